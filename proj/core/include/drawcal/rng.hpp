#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

// Every random draw in this library goes through the helpers below so results
// are pinned by this code, not by unspecified standard-library distribution
// internals. Runs with equal seeds reproduce bit-identical streams.

namespace drawcal {

using Rng = std::mt19937_64;

// splitmix64 finalizer; derives independent stream seeds from one master seed.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Uniform in [0, 1) with 53-bit resolution.
inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_in(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform_unit(rng);
}

// Unbiased integer in [0, n) by rejection.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % n;
}

// Fisher-Yates with the pinned index draw above.
template <typename T>
void shuffle_pinned(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(uniform_index(rng, i));
    std::swap(v[i - 1], v[j]);
  }
}

// Standard normal draws, Marsaglia polar method. Stateful: keeps the spare.
class Gaussian {
 public:
  double operator()(Rng& rng) {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform_unit(rng) - 1.0;
      v = 2.0 * uniform_unit(rng) - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
  }

 private:
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace drawcal
