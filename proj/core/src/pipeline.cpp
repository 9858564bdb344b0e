#include "drawcal/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace drawcal {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void validate_joint_limits(const DhTable& table, const Dataset& data) {
  for (std::size_t i = 0; i < data.samples.size(); ++i) {
    const JointVector& q = data.samples[i].q;
    for (int j = 0; j < kLinks; ++j) {
      if (q[j] < table.joint_limits[j].min || q[j] > table.joint_limits[j].max) {
        throw std::invalid_argument("calibrate: sample " + std::to_string(i) +
                                    " violates the limits of joint " + std::to_string(j + 1));
      }
    }
  }
}

struct Box {
  DeviationVector lower;
  DeviationVector upper;
};

Box global_box(const CalibrationConfig& cfg) {
  Box box;
  for (int i = 0; i < kLinks; ++i) {
    box.lower[dev::a(i)] = -cfg.bound_mm;
    box.lower[dev::d(i)] = -cfg.bound_mm;
    box.lower[dev::alpha(i)] = -cfg.bound_rad;
    box.lower[dev::theta(i)] = -cfg.bound_rad;
  }
  box.upper = -box.lower;
  return box;
}

// The search runs in box-normalized coordinates u in [-1,1]^24: millimeter and
// radian components differ by orders of magnitude in both width and objective
// sensitivity, and the beetle probes isotropically.
struct SearchOutcome {
  DeviationVector delta = DeviationVector::Zero();
  std::vector<TracePoint> trace;
};

SearchOutcome run_search(SearchVariant variant, const DhTable& nominal,
                         const Dataset& train, const Box& box,
                         const DeviationVector& init, int max_iters,
                         std::uint64_t seed) {
  const DeviationVector center = 0.5 * (box.lower + box.upper);
  const DeviationVector half = 0.5 * (box.upper - box.lower);
  Eigen::VectorXd u0 =
      (init - center).cwiseQuotient(half).cwiseMax(-1.0).cwiseMin(1.0);
  // Values are normalized by the objective at the start point so that the
  // vertex degeneracy guard and the stall tolerance act scale-free; a warm
  // start near the optimum would otherwise trip both orders of magnitude
  // before the polish is done.
  const double raw0 = objective(nominal, DeviationVector(center + half.cwiseProduct(u0)),
                                train);
  const double f_ref = raw0 > 0.0 ? raw0 : 1.0;
  const Objective f = [&](const Eigen::VectorXd& u) {
    const DeviationVector delta = center + half.cwiseProduct(u);
    return objective(nominal, delta, train) / f_ref;
  };
  BeetleConfig cfg = BeetleConfig::for_box(Eigen::VectorXd::Constant(kParams, -1.0),
                                           Eigen::VectorXd::Constant(kParams, 1.0));
  cfg.max_iters = max_iters;
  cfg.seed = seed;
  SearchResult r = optimize(f, cfg, variant, u0);
  SearchOutcome out;
  out.delta = center + half.cwiseProduct(r.best_position);
  out.trace = std::move(r.trace);
  for (TracePoint& p : out.trace) p.best_value *= f_ref;  // back to mm^2
  return out;
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Linear-interpolated quantile on sorted data.
double quantile_of(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return v[lo] + frac * (v[hi] - v[lo]);
}

MethodSummary summarize(const std::string& label,
                        const std::vector<MetricsReport>& per_trial,
                        const std::vector<double>& wall_ms) {
  MethodSummary s;
  s.label = label;
  s.per_trial = per_trial;
  std::vector<double> rmse, stdev, max;
  for (const MetricsReport& m : per_trial) {
    rmse.push_back(m.rmse);
    stdev.push_back(m.stdev);
    max.push_back(m.max);
  }
  s.median = {median_of(rmse), median_of(stdev), median_of(max), per_trial.front().n};
  s.iqr = {quantile_of(rmse, 0.75) - quantile_of(rmse, 0.25),
           quantile_of(stdev, 0.75) - quantile_of(stdev, 0.25),
           quantile_of(max, 0.75) - quantile_of(max, 0.25), per_trial.front().n};
  s.median_wall_ms = wall_ms.empty() ? 0.0 : median_of(wall_ms);
  return s;
}

}  // namespace

MetricsReport metrics(const std::vector<double>& residuals) {
  if (residuals.empty()) {
    throw std::invalid_argument("metrics: no residuals");
  }
  double sq = 0.0, abs_sum = 0.0, abs_max = 0.0;
  for (const double r : residuals) {
    sq += r * r;
    abs_sum += std::abs(r);
    abs_max = std::max(abs_max, std::abs(r));
  }
  const double n = static_cast<double>(residuals.size());
  return {std::sqrt(sq / n), abs_sum / n, abs_max, static_cast<int>(residuals.size())};
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& data, double train_fraction,
                                          std::uint64_t seed) {
  if (data.samples.size() < 2) {
    throw std::invalid_argument("split_dataset: need at least 2 samples");
  }
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("split_dataset: train fraction must lie in (0, 1)");
  }
  std::vector<std::size_t> order(data.samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  shuffle_pinned(order, rng);

  const std::size_t n_train = static_cast<std::size_t>(
      std::floor(static_cast<double>(data.samples.size()) * train_fraction));
  Dataset train, test;
  train.p0 = data.p0;
  test.p0 = data.p0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i < n_train ? train : test).samples.push_back(data.samples[order[i]]);
  }
  return {std::move(train), std::move(test)};
}

std::string method_name(Method m) {
  switch (m) {
    case Method::kEkf:
      return "ekf";
    case Method::kBas:
      return "bas";
    case Method::kQibas:
      return "qibas";
    case Method::kEkfQibas:
      return "ekf-qibas";
  }
  return "ekf-qibas";
}

std::optional<Method> parse_method(const std::string& name) {
  if (name == "ekf") return Method::kEkf;
  if (name == "bas") return Method::kBas;
  if (name == "qibas") return Method::kQibas;
  if (name == "ekf-qibas") return Method::kEkfQibas;
  return std::nullopt;
}

CalibrationResult calibrate(Method method, const DhTable& nominal, const Dataset& data,
                            const CalibrationConfig& cfg, std::uint64_t seed) {
  if (!(cfg.bound_mm > 0.0) || !(cfg.bound_rad > 0.0)) {
    throw std::invalid_argument("calibrate: search bounds must be positive");
  }
  if (cfg.max_iters < 0) {
    throw std::invalid_argument("calibrate: max_iters must be non-negative");
  }
  validate_joint_limits(nominal, data);

  auto [train, test] = split_dataset(data, cfg.train_fraction, mix_seed(seed, 0));
  if (train.samples.empty() || test.samples.empty()) {
    throw std::invalid_argument("calibrate: train fraction leaves an empty split");
  }

  CalibrationResult out;
  out.method = method;
  const DeviationVector zero = DeviationVector::Zero();
  out.before = metrics(length_residuals(nominal, zero, test));
  out.train_objective_before = objective(nominal, zero, train);

  const Box box = global_box(cfg);
  const std::uint64_t search_seed = mix_seed(seed, 1);
  const Clock::time_point t0 = Clock::now();
  switch (method) {
    case Method::kEkf: {
      EkfResult r = run_ekf(nominal, train, cfg.noise, true);
      out.delta_hat = r.eta;
      out.filter_trace = std::move(r.trace);
      break;
    }
    case Method::kBas:
    case Method::kQibas: {
      const SearchVariant variant =
          method == Method::kBas ? SearchVariant::kBas : SearchVariant::kQibas;
      SearchOutcome r =
          run_search(variant, nominal, train, box, zero, cfg.max_iters, search_seed);
      out.delta_hat = r.delta;
      out.search_trace = std::move(r.trace);
      break;
    }
    case Method::kEkfQibas: {
      EkfResult filter = run_ekf(nominal, train, cfg.noise, true);
      out.filter_trace = std::move(filter.trace);
      // Search box centered on the filter estimate, sized by its marginal
      // uncertainty (3 sigma), clamped to the global box. The floor keeps the
      // box nonempty when the filter collapses a component.
      const DeviationVector eta =
          filter.eta.cwiseMax(box.lower).cwiseMin(box.upper);
      const DeviationVector sigma = filter.p.diagonal().cwiseMax(0.0).cwiseSqrt();
      const DeviationVector half =
          (3.0 * sigma).cwiseMax(1e-9 * (box.upper - box.lower));
      Box refine;
      refine.lower = (eta - half).cwiseMax(box.lower);
      refine.upper = (eta + half).cwiseMin(box.upper);
      SearchOutcome r = run_search(SearchVariant::kQibas, nominal, train, refine, eta,
                                   cfg.max_iters, search_seed);
      out.delta_hat = r.delta;
      out.search_trace = std::move(r.trace);
      break;
    }
  }
  out.wall_ms = ms_since(t0);

  out.after = metrics(length_residuals(nominal, out.delta_hat, test));
  out.train_objective_after = objective(nominal, out.delta_hat, train);
  return out;
}

Comparison compare(const std::vector<Method>& methods, const Scenario& scenario,
                   int trials, const CalibrationConfig& cfg, std::uint64_t seed) {
  if (methods.empty()) {
    throw std::invalid_argument("compare: no methods");
  }
  if (trials < 1) {
    throw std::invalid_argument("compare: trials must be >= 1");
  }

  Comparison out;
  out.trials = trials;
  out.methods = methods;
  out.results.resize(methods.size());

  std::vector<MetricsReport> before_per_trial;
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t trial_seed = mix_seed(seed, static_cast<std::uint64_t>(t));
    const std::vector<JointVector> configs =
        sample_joint_configs(scenario.n, scenario.nominal, mix_seed(trial_seed, 10));
    DeviationSpec dev_spec = scenario.deviations;
    dev_spec.seed = mix_seed(trial_seed, 11);
    NoiseModel noise = scenario.noise;
    noise.seed = mix_seed(trial_seed, 12);
    const DeviationVector truth = inject_deviation(dev_spec);
    const Dataset data =
        simulate_measurements(scenario.nominal, truth, configs, scenario.p0, noise);
    const std::uint64_t calib_seed = mix_seed(trial_seed, 13);

    for (std::size_t m = 0; m < methods.size(); ++m) {
      out.results[m].push_back(
          calibrate(methods[m], scenario.nominal, data, cfg, calib_seed));
    }
    before_per_trial.push_back(out.results[0].back().before);
  }

  out.rows.push_back(summarize("before", before_per_trial, {}));
  for (std::size_t m = 0; m < methods.size(); ++m) {
    std::vector<MetricsReport> after;
    std::vector<double> wall;
    for (const CalibrationResult& r : out.results[m]) {
      after.push_back(r.after);
      wall.push_back(r.wall_ms);
    }
    out.rows.push_back(summarize(method_name(methods[m]), after, wall));
  }
  return out;
}

}  // namespace drawcal
