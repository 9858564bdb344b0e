#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "drawcal/beetle_search.hpp"
#include "drawcal/ekf.hpp"
#include "drawcal/simulator.hpp"

namespace drawcal {

struct MetricsReport {
  double rmse = 0.0;   // sqrt(mean r^2), mm
  double stdev = 0.0;  // mean |r|, mm (the reporting convention's "Std")
  double max = 0.0;    // max |r|, mm
  int n = 0;
};

MetricsReport metrics(const std::vector<double>& residuals);

// Seeded-shuffle split; train gets floor(n * train_fraction) samples, test the
// rest. Either side may come out empty for extreme fractions and tiny n;
// calibrate() rejects that.
std::pair<Dataset, Dataset> split_dataset(const Dataset& data, double train_fraction,
                                          std::uint64_t seed);

enum class Method { kEkf, kBas, kQibas, kEkfQibas };

std::string method_name(Method m);
std::optional<Method> parse_method(const std::string& name);

struct CalibrationConfig {
  double train_fraction = 0.8;
  double bound_mm = 5.0;    // search half-width for length deviations
  double bound_rad = 0.05;  // search half-width for angle deviations
  int max_iters = 4000;     // search iteration budget
  EkfNoiseConfig noise = EkfNoiseConfig::defaults();
};

struct CalibrationResult {
  Method method = Method::kEkfQibas;
  DeviationVector delta_hat = DeviationVector::Zero();
  MetricsReport before;  // held-out residuals of the nominal table
  MetricsReport after;   // held-out residuals of the calibrated table
  double train_objective_before = 0.0;  // mm^2
  double train_objective_after = 0.0;   // mm^2
  std::vector<TracePoint> search_trace;     // empty for the pure filter method
  std::vector<EkfTracePoint> filter_trace;  // empty for pure search methods
  double wall_ms = 0.0;
};

// Splits the data, computes held-out metrics of the nominal table, estimates
// the deviations with the chosen method, and re-evaluates the held-out
// metrics. Sub-seeds (split, search) derive deterministically from `seed`.
CalibrationResult calibrate(Method method, const DhTable& nominal, const Dataset& data,
                            const CalibrationConfig& cfg, std::uint64_t seed);

// Simulation scenario for end-to-end comparisons.
struct Scenario {
  DhTable nominal;
  Eigen::Vector3d p0 = Eigen::Vector3d::Zero();
  DeviationSpec deviations;
  NoiseModel noise;
  int n = 120;
};

struct MethodSummary {
  std::string label;      // "before" or a method name
  MetricsReport median;   // per-metric medians across trials
  MetricsReport iqr;      // per-metric interquartile ranges
  double median_wall_ms = 0.0;
  std::vector<MetricsReport> per_trial;
};

struct Comparison {
  int trials = 0;
  std::vector<Method> methods;
  std::vector<MethodSummary> rows;                      // "before" first
  std::vector<std::vector<CalibrationResult>> results;  // [method][trial]
};

// Paired trials: each trial simulates one fresh dataset (derived sub-seeds for
// configurations, injected deviations, noise, split) that every method
// calibrates identically.
Comparison compare(const std::vector<Method>& methods, const Scenario& scenario,
                   int trials, const CalibrationConfig& cfg, std::uint64_t seed);

}  // namespace drawcal
