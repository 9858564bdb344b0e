#include "drawcal/beetle_search.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace drawcal {

namespace {

double elapsed_ms(const OptimizerState& s) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                   s.started)
      .count();
}

double checked_eval(OptimizerState& s, const Objective& f, const Eigen::VectorXd& x) {
  const double v = f(x);
  ++s.evaluations;
  if (!std::isfinite(v)) {
    throw OptimizerAbort("objective returned a non-finite value", x);
  }
  return v;
}

Eigen::VectorXd clamp_to_box(const BeetleConfig& cfg, const Eigen::VectorXd& x) {
  return x.cwiseMax(cfg.lower).cwiseMin(cfg.upper);
}

void consider_best(OptimizerState& s) {
  if (s.current_value < s.best_value) {
    s.best_value = s.current_value;
    s.best_position = s.position;
  }
}

struct Probes {
  Eigen::VectorXd dir;
  Eigen::VectorXd right;  // clamped eta + m*dir
  Eigen::VectorXd left;   // clamped eta - m*dir
  double f_right = 0.0;
  double f_left = 0.0;
};

// Shared first phase of both variants: probe, then move against the gradient
// sign. current_value stays exact for the (possibly unmoved) position.
Probes probe_and_move(OptimizerState& s, const Objective& f, const BeetleConfig& cfg) {
  Probes pr;
  pr.dir = random_direction(static_cast<int>(s.position.size()), s.rng);
  auto [right, left] = antenna_points(s.position, s.antenna, pr.dir);
  pr.right = clamp_to_box(cfg, right);
  pr.left = clamp_to_box(cfg, left);
  pr.f_right = checked_eval(s, f, pr.right);
  pr.f_left = checked_eval(s, f, pr.left);
  const double diff = pr.f_right - pr.f_left;
  const double sign = (diff > 0.0) - (diff < 0.0);
  if (sign != 0.0) {
    s.position = clamp_to_box(cfg, s.position - s.step * sign * pr.dir);
    s.current_value = checked_eval(s, f, s.position);
    consider_best(s);
  }
  return pr;
}

void finish_iteration(OptimizerState& s, const BeetleConfig& cfg) {
  const auto [step, antenna] = decay_update(s.step, s.antenna, cfg);
  s.step = step;
  s.antenna = antenna;
  ++s.iteration;
  s.trace.push_back({s.iteration, s.best_value, s.evaluations, elapsed_ms(s)});
}

void validate_config(const BeetleConfig& cfg) {
  const auto dims = cfg.lower.size();
  if (dims < 1 || cfg.upper.size() != dims) {
    throw std::invalid_argument("beetle config: empty or mismatched bounds");
  }
  for (Eigen::Index i = 0; i < dims; ++i) {
    if (!(cfg.lower[i] < cfg.upper[i])) {
      throw std::invalid_argument("beetle config: lower must be < upper componentwise");
    }
  }
  if (!(cfg.initial_step > 0.0) || !(cfg.initial_antenna > 0.0)) {
    throw std::invalid_argument("beetle config: initial lengths must be positive");
  }
  if (!(cfg.step_decay > 0.0 && cfg.step_decay < 1.0) ||
      !(cfg.antenna_decay > 0.0 && cfg.antenna_decay < 1.0)) {
    throw std::invalid_argument("beetle config: decay factors must lie in (0, 1)");
  }
  if (cfg.step_floor < 0.0 || cfg.antenna_floor < 0.0) {
    throw std::invalid_argument("beetle config: floors must be non-negative");
  }
  if (!(cfg.vertex_guard > 0.0)) {
    throw std::invalid_argument("beetle config: vertex guard must be positive");
  }
  if (cfg.max_iters < 0) {
    throw std::invalid_argument("beetle config: max_iters must be non-negative");
  }
  if (cfg.stall_patience < 1) {
    throw std::invalid_argument("beetle config: stall patience must be >= 1");
  }
}

}  // namespace

BeetleConfig BeetleConfig::for_box(Eigen::VectorXd lower, Eigen::VectorXd upper) {
  BeetleConfig cfg;
  cfg.lower = std::move(lower);
  cfg.upper = std::move(upper);
  const double mean_width = (cfg.upper - cfg.lower).mean();
  cfg.initial_step = 0.1 * mean_width;
  cfg.initial_antenna = 0.2 * mean_width;
  cfg.step_floor = 1e-4 * mean_width;
  // A wider antenna floor than the step floor: the quadratic-interpolation
  // denominator shrinks with the cube of the probe spacing, and an antenna
  // that decays too far turns every vertex degenerate before convergence.
  cfg.antenna_floor = 1e-3 * mean_width;
  return cfg;
}

Eigen::VectorXd random_direction(int dims, Rng& rng) {
  if (dims < 1) {
    throw std::invalid_argument("random_direction: dims must be >= 1");
  }
  Gaussian gauss;
  Eigen::VectorXd b(dims);
  double norm = 0.0;
  do {
    for (int i = 0; i < dims; ++i) b[i] = gauss(rng);
    norm = b.norm();
  } while (norm < 1e-12);
  return b / norm;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> antenna_points(const Eigen::VectorXd& eta,
                                                           double m,
                                                           const Eigen::VectorXd& dir) {
  if (eta.size() != dir.size()) {
    throw std::invalid_argument("antenna_points: dimension mismatch");
  }
  return {eta + m * dir, eta - m * dir};
}

std::pair<double, bool> quadratic_vertex(double x1, double x2, double x3,
                                         double f1, double f2, double f3,
                                         double guard) {
  const double num =
      (x1 * x1 - x3 * x3) * f2 + (x3 * x3 - x2 * x2) * f1 + (x2 * x2 - x1 * x1) * f3;
  const double den = 2.0 * ((x1 - x3) * f2 + (x3 - x2) * f1 + (x2 - x1) * f3);
  const bool degenerate = std::abs(den) < 10.0 * guard;
  return {num / (den + guard), degenerate};
}

std::pair<double, double> decay_update(double step, double antenna,
                                       const BeetleConfig& cfg) {
  if (cfg.constant_lengths) return {step, antenna};
  return {cfg.step_decay * step + cfg.step_floor,
          cfg.antenna_decay * antenna + cfg.antenna_floor};
}

OptimizerState init_state(const BeetleConfig& cfg, const Eigen::VectorXd& init,
                          const Objective& f) {
  validate_config(cfg);
  if (init.size() != cfg.lower.size()) {
    throw std::invalid_argument("init_state: start point dimension mismatch");
  }
  for (Eigen::Index i = 0; i < init.size(); ++i) {
    if (init[i] < cfg.lower[i] || init[i] > cfg.upper[i]) {
      throw std::invalid_argument("init_state: start point outside bounds at component " +
                                  std::to_string(i));
    }
  }
  OptimizerState s;
  s.position = init;
  s.best_position = init;
  s.step = cfg.initial_step;
  s.antenna = cfg.initial_antenna;
  s.rng.seed(cfg.seed);
  s.started = std::chrono::steady_clock::now();
  s.current_value = checked_eval(s, f, init);
  s.best_value = s.current_value;
  return s;
}

void bas_step(OptimizerState& state, const Objective& f, const BeetleConfig& cfg) {
  probe_and_move(state, f, cfg);
  finish_iteration(state, cfg);
}

void qibas_step(OptimizerState& state, const Objective& f, const BeetleConfig& cfg) {
  const Probes pr = probe_and_move(state, f, cfg);
  Eigen::VectorXd candidate = state.position;
  for (Eigen::Index k = 0; k < candidate.size(); ++k) {
    const auto [vertex, degenerate] =
        quadratic_vertex(pr.left[k], pr.right[k], state.best_position[k],
                         pr.f_left, pr.f_right, state.best_value, cfg.vertex_guard);
    if (!degenerate) candidate[k] = vertex;
  }
  candidate = clamp_to_box(cfg, candidate);
  const double candidate_value = checked_eval(state, f, candidate);
  if (candidate_value < state.current_value) {
    state.position = std::move(candidate);
    state.current_value = candidate_value;
    consider_best(state);
  }
  finish_iteration(state, cfg);
}

SearchResult optimize(const Objective& f, const BeetleConfig& cfg,
                      SearchVariant variant, const Eigen::VectorXd& init) {
  OptimizerState s = init_state(cfg, init, f);
  std::vector<double> best_history;
  best_history.reserve(static_cast<std::size_t>(cfg.max_iters) + 1);
  best_history.push_back(s.best_value);
  for (int t = 1; t <= cfg.max_iters; ++t) {
    if (variant == SearchVariant::kBas) {
      bas_step(s, f, cfg);
    } else {
      qibas_step(s, f, cfg);
    }
    best_history.push_back(s.best_value);
    if (t >= cfg.stall_patience) {
      const double then = best_history[static_cast<std::size_t>(t - cfg.stall_patience)];
      const double improvement = then - s.best_value;
      if (improvement <= cfg.stall_rel_tol * std::max(1.0, std::abs(then))) break;
    }
  }
  return {std::move(s.best_position), s.best_value, s.evaluations, s.iteration,
          std::move(s.trace)};
}

}  // namespace drawcal
