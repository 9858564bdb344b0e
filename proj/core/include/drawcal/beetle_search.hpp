#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "drawcal/rng.hpp"
#include "drawcal/types.hpp"

namespace drawcal {

using Objective = std::function<double(const Eigen::VectorXd&)>;

enum class SearchVariant { kBas, kQibas };

struct BeetleConfig {
  Eigen::VectorXd lower;          // box bounds, componentwise lower < upper
  Eigen::VectorXd upper;
  double initial_step = 0.0;      // first move length
  double initial_antenna = 0.0;   // first probe half-spacing
  double step_decay = 0.95;
  double antenna_decay = 0.95;
  double step_floor = 0.0;        // additive constant in the step recurrence
  double antenna_floor = 0.0;
  bool constant_lengths = false;  // hold step/antenna at their initial values
  double vertex_guard = 1e-10;    // denominator regularizer for interpolation
  int max_iters = 2000;
  double stall_rel_tol = 1e-12;
  int stall_patience = 50;
  std::uint64_t seed = 0;

  // Scale-derived defaults for a box: lengths proportional to the mean width.
  static BeetleConfig for_box(Eigen::VectorXd lower, Eigen::VectorXd upper);
};

struct TracePoint {
  int iteration = 0;
  double best_value = 0.0;
  long evaluations = 0;
  double wall_ms = 0.0;
};

struct OptimizerState {
  Eigen::VectorXd position;
  double current_value = 0.0;       // objective at position
  Eigen::VectorXd best_position;
  double best_value = 0.0;
  double step = 0.0;
  double antenna = 0.0;
  int iteration = 0;
  long evaluations = 0;
  Rng rng;
  std::vector<TracePoint> trace;    // one entry per completed iteration
  std::chrono::steady_clock::time_point started;
};

// Isotropic unit direction: normalized i.i.d. gaussian components.
Eigen::VectorXd random_direction(int dims, Rng& rng);

// Probe points {eta + m*dir, eta - m*dir}; pure, callers clamp as needed.
std::pair<Eigen::VectorXd, Eigen::VectorXd> antenna_points(const Eigen::VectorXd& eta,
                                                           double m,
                                                           const Eigen::VectorXd& dir);

// Vertex abscissa of the parabola through (x1,f1), (x2,f2), (x3,f3), with the
// denominator regularized by `guard`. The flag marks a near-degenerate triple
// (|unregularized denominator| < 10*guard): collinear or flat data.
std::pair<double, bool> quadratic_vertex(double x1, double x2, double x3,
                                         double f1, double f2, double f3,
                                         double guard);

// next = decay * current + floor; identity when constant_lengths is set.
std::pair<double, double> decay_update(double step, double antenna,
                                       const BeetleConfig& cfg);

// Validates config and start point, seeds the generator, evaluates f(init).
OptimizerState init_state(const BeetleConfig& cfg, const Eigen::VectorXd& init,
                          const Objective& f);

// One antenna-and-move iteration. Probes are evaluated clamped to the box, the
// position moves opposite the worse probe and is clamped, the best-so-far
// updates only on strict improvement. Two evaluations, plus one more when the
// position actually moved.
void bas_step(OptimizerState& state, const Objective& f, const BeetleConfig& cfg);

// bas_step plus a componentwise quadratic-interpolation candidate built from
// (left probe, right probe, best-so-far); degenerate components keep the plain
// move. Greedy: the candidate replaces the position only on strict
// improvement. Exactly one evaluation more than bas_step.
void qibas_step(OptimizerState& state, const Objective& f, const BeetleConfig& cfg);

struct SearchResult {
  Eigen::VectorXd best_position;
  double best_value = 0.0;
  long evaluations = 0;
  int iterations = 0;
  std::vector<TracePoint> trace;
};

// Runs steps until max_iters or until best_value has improved by no more than
// stall_rel_tol (relative) over the last stall_patience iterations.
SearchResult optimize(const Objective& f, const BeetleConfig& cfg,
                      SearchVariant variant, const Eigen::VectorXd& init);

}  // namespace drawcal
