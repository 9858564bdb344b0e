#include "drawcal/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "drawcal/kinematics.hpp"

namespace drawcal {

namespace {

std::vector<double> parse_doubles(const std::string& text, std::size_t expected,
                                  const std::string& context) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string token = text.substr(pos, comma - pos);
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(token, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument(context + ": bad number '" + token + "'");
    }
    if (used != token.size()) {
      throw std::invalid_argument(context + ": bad number '" + token + "'");
    }
    out.push_back(value);
    pos = comma + 1;
    if (comma == text.size()) break;
  }
  if (out.size() != expected) {
    throw std::invalid_argument(context + ": expected " + std::to_string(expected) +
                                " comma-separated values");
  }
  return out;
}

void validate_noise(const NoiseModel& noise) {
  if (noise.sigma < 0.0 || noise.half_width < 0.0) {
    throw std::invalid_argument("noise model: widths must be non-negative");
  }
  if (noise.outlier_prob < 0.0 || noise.outlier_prob > 1.0) {
    throw std::invalid_argument("noise model: outlier probability must lie in [0, 1]");
  }
  if (noise.outlier_scale < 1.0) {
    throw std::invalid_argument("noise model: outlier scale must be >= 1");
  }
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

NoiseModel parse_noise_spec(const std::string& spec) {
  const std::size_t colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string params = colon == std::string::npos ? "" : spec.substr(colon + 1);
  NoiseModel noise;
  if (kind == "none") {
    if (!params.empty()) throw std::invalid_argument("noise spec: 'none' takes no parameters");
    noise.kind = NoiseModel::Kind::kNone;
  } else if (kind == "gaussian") {
    noise.kind = NoiseModel::Kind::kGaussian;
    noise.sigma = parse_doubles(params, 1, "noise spec 'gaussian'")[0];
  } else if (kind == "uniform") {
    noise.kind = NoiseModel::Kind::kUniform;
    noise.half_width = parse_doubles(params, 1, "noise spec 'uniform'")[0];
  } else if (kind == "mixture") {
    const auto v = parse_doubles(params, 3, "noise spec 'mixture'");
    noise.kind = NoiseModel::Kind::kMixture;
    noise.sigma = v[0];
    noise.outlier_prob = v[1];
    noise.outlier_scale = v[2];
  } else {
    throw std::invalid_argument("noise spec: unknown kind '" + kind + "'");
  }
  validate_noise(noise);
  return noise;
}

std::string noise_spec_string(const NoiseModel& noise) {
  switch (noise.kind) {
    case NoiseModel::Kind::kNone:
      return "none";
    case NoiseModel::Kind::kGaussian:
      return "gaussian:" + format_number(noise.sigma);
    case NoiseModel::Kind::kUniform:
      return "uniform:" + format_number(noise.half_width);
    case NoiseModel::Kind::kMixture:
      return "mixture:" + format_number(noise.sigma) + "," +
             format_number(noise.outlier_prob) + "," + format_number(noise.outlier_scale);
  }
  return "none";
}

DeviationSpec parse_deviation_spec(const std::string& spec) {
  const auto v = parse_doubles(spec, 4, "deviation spec");
  DeviationSpec out;
  out.cap_a = v[0];
  out.cap_d = v[1];
  out.cap_alpha = v[2];
  out.cap_theta = v[3];
  if (out.cap_a < 0.0 || out.cap_d < 0.0 || out.cap_alpha < 0.0 || out.cap_theta < 0.0) {
    throw std::invalid_argument("deviation spec: caps must be non-negative");
  }
  return out;
}

std::vector<JointVector> sample_joint_configs(int n, const DhTable& table,
                                              std::uint64_t seed) {
  if (n < 1) {
    throw std::invalid_argument("sample_joint_configs: n must be >= 1");
  }
  for (const JointLimit& lim : table.joint_limits) {
    if (!(lim.min <= lim.max)) {
      throw std::invalid_argument("sample_joint_configs: joint limits out of order");
    }
  }
  Rng rng(seed);
  std::vector<JointVector> out(static_cast<std::size_t>(n));
  for (JointVector& q : out) {
    for (int j = 0; j < kLinks; ++j) {
      q[j] = uniform_in(rng, table.joint_limits[j].min, table.joint_limits[j].max);
    }
  }
  return out;
}

DeviationVector inject_deviation(const DeviationSpec& spec) {
  if (spec.cap_a < 0.0 || spec.cap_d < 0.0 || spec.cap_alpha < 0.0 ||
      spec.cap_theta < 0.0) {
    throw std::invalid_argument("inject_deviation: caps must be non-negative");
  }
  Rng rng(spec.seed);
  DeviationVector delta;
  // Draw order is part of the determinism contract: groups a, d, alpha, theta,
  // link-major within each group.
  for (int i = 0; i < kLinks; ++i) delta[dev::a(i)] = uniform_in(rng, -spec.cap_a, spec.cap_a);
  for (int i = 0; i < kLinks; ++i) delta[dev::d(i)] = uniform_in(rng, -spec.cap_d, spec.cap_d);
  for (int i = 0; i < kLinks; ++i) {
    delta[dev::alpha(i)] = uniform_in(rng, -spec.cap_alpha, spec.cap_alpha);
  }
  for (int i = 0; i < kLinks; ++i) {
    delta[dev::theta(i)] = uniform_in(rng, -spec.cap_theta, spec.cap_theta);
  }
  return delta;
}

Dataset simulate_measurements(const DhTable& nominal, const DeviationVector& true_delta,
                              const std::vector<JointVector>& configs,
                              const Eigen::Vector3d& p0, const NoiseModel& noise) {
  if (configs.empty()) {
    throw std::invalid_argument("simulate_measurements: no joint configurations");
  }
  validate_noise(noise);
  const DhTable truth = apply_deviation(nominal, true_delta);
  Rng rng(noise.seed);
  Gaussian gauss;

  Dataset out;
  out.p0 = p0;
  out.samples.reserve(configs.size());
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const double len = cable_length(forward_kinematics(truth, configs[i]).p, p0);
    if (len <= kMinWireLength) {
      throw DegenerateGeometry("simulate_measurements: flange on the anchor at configuration " +
                               std::to_string(i));
    }
    double eps = 0.0;
    switch (noise.kind) {
      case NoiseModel::Kind::kNone:
        break;
      case NoiseModel::Kind::kGaussian:
        eps = noise.sigma * gauss(rng);
        break;
      case NoiseModel::Kind::kUniform:
        eps = uniform_in(rng, -noise.half_width, noise.half_width);
        break;
      case NoiseModel::Kind::kMixture: {
        const double scale =
            uniform_unit(rng) < noise.outlier_prob ? noise.sigma * noise.outlier_scale : noise.sigma;
        eps = scale * gauss(rng);
        break;
      }
    }
    out.samples.push_back({configs[i], std::max(0.0, len + eps)});
  }
  return out;
}

}  // namespace drawcal
