#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "drawcal/error_model.hpp"
#include "drawcal/rng.hpp"

namespace drawcal {

struct NoiseModel {
  enum class Kind { kNone, kGaussian, kUniform, kMixture };
  Kind kind = Kind::kNone;
  double sigma = 0.0;          // gaussian / mixture core std, mm
  double half_width = 0.0;     // uniform half-width, mm
  double outlier_prob = 0.0;   // mixture outlier probability
  double outlier_scale = 1.0;  // mixture std multiplier, >= 1
  std::uint64_t seed = 0;
};

// Mini-format: "none", "gaussian:SIGMA", "uniform:HALF_WIDTH",
// "mixture:SIGMA,PROB,SCALE". Throws std::invalid_argument on bad input.
NoiseModel parse_noise_spec(const std::string& spec);
std::string noise_spec_string(const NoiseModel& noise);

// Per-group uniform caps for the injected parameter deviations.
struct DeviationSpec {
  double cap_a = 1.0;       // mm
  double cap_d = 1.0;       // mm
  double cap_alpha = 0.01;  // rad
  double cap_theta = 0.01;  // rad
  std::uint64_t seed = 0;
};

// Mini-format: "A,D,ALPHA,THETA" (caps, mm mm rad rad).
DeviationSpec parse_deviation_spec(const std::string& spec);

// n joint configurations, each component uniform within its joint limits.
std::vector<JointVector> sample_joint_configs(int n, const DhTable& table,
                                              std::uint64_t seed);

// Uniform draw in [-cap, cap] per component, grouped a, d, alpha, theta.
DeviationVector inject_deviation(const DeviationSpec& spec);

// Wire lengths of the deviated robot at the given configurations plus additive
// noise, clamped at zero (lengths cannot be negative). Throws
// DegenerateGeometry (with the configuration index) if a flange point lands on
// the anchor.
Dataset simulate_measurements(const DhTable& nominal, const DeviationVector& true_delta,
                              const std::vector<JointVector>& configs,
                              const Eigen::Vector3d& p0, const NoiseModel& noise);

}  // namespace drawcal
