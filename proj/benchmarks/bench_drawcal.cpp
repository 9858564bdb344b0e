// Microbenchmarks for the hot paths: the kinematic chain, its jacobians, the
// dataset objective, single optimizer steps, and one full filter pass.
#include <benchmark/benchmark.h>

#include "drawcal/beetle_search.hpp"
#include "drawcal/ekf.hpp"
#include "drawcal/error_model.hpp"
#include "drawcal/rng.hpp"
#include "drawcal/simulator.hpp"

namespace {

using namespace drawcal;

DhTable bench_table() {
  // Mixed nonzero parameters, no special structure.
  DhTable t;
  const double a[] = {120.0, 330.0, 90.0, 60.0, 45.0, 60.0};
  const double d[] = {360.0, 55.0, -45.0, 340.0, 70.0, 95.0};
  const double alpha[] = {-kPi / 2, 0.35, -0.4, kPi / 2, -kPi / 2, 0.3};
  const double off[] = {0.0, -kPi / 2, 0.25, 0.0, 0.4, 0.0};
  for (int i = 0; i < kLinks; ++i) {
    t.links[i] = {a[i], d[i], off[i], alpha[i]};
    t.joint_limits[i] = {-2.6, 2.6};
  }
  return t;
}

Dataset bench_dataset(const DhTable& table, int n) {
  DeviationSpec spec;
  spec.seed = 7;
  NoiseModel noise = parse_noise_spec("gaussian:0.1");
  noise.seed = 8;
  return simulate_measurements(table, inject_deviation(spec),
                               sample_joint_configs(n, table, 9),
                               Eigen::Vector3d(800.0, -400.0, 150.0), noise);
}

void BM_ForwardKinematics(benchmark::State& state) {
  const DhTable table = bench_table();
  JointVector q;
  q << 0.3, -0.7, 1.1, -0.2, 0.9, -1.4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(forward_kinematics(table, q));
  }
}
BENCHMARK(BM_ForwardKinematics);

void BM_PositionJacobian(benchmark::State& state) {
  const DhTable table = bench_table();
  JointVector q;
  q << 0.3, -0.7, 1.1, -0.2, 0.9, -1.4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(position_jacobian(table, q));
  }
}
BENCHMARK(BM_PositionJacobian);

void BM_Objective96(benchmark::State& state) {
  // The training-set evaluation that dominates every search iteration.
  const DhTable table = bench_table();
  const Dataset data = bench_dataset(table, 96);
  DeviationVector delta = DeviationVector::Constant(0.1);
  delta.tail<2 * kLinks>().setConstant(0.001);
  for (auto _ : state) {
    benchmark::DoNotOptimize(objective(table, delta, data));
  }
}
BENCHMARK(BM_Objective96);

BeetleConfig step_config() {
  BeetleConfig cfg = BeetleConfig::for_box(Eigen::VectorXd::Constant(kParams, -5.0),
                                           Eigen::VectorXd::Constant(kParams, 5.0));
  cfg.constant_lengths = true;
  cfg.seed = 11;
  return cfg;
}

void BM_BasStep(benchmark::State& state) {
  const BeetleConfig cfg = step_config();
  const Objective f = [](const Eigen::VectorXd& x) { return x.squaredNorm(); };
  OptimizerState s = init_state(cfg, Eigen::VectorXd::Constant(kParams, 2.0), f);
  for (auto _ : state) {
    bas_step(s, f, cfg);
    benchmark::DoNotOptimize(s.best_value);
  }
}
BENCHMARK(BM_BasStep);

void BM_QibasStep(benchmark::State& state) {
  const BeetleConfig cfg = step_config();
  const Objective f = [](const Eigen::VectorXd& x) { return x.squaredNorm(); };
  OptimizerState s = init_state(cfg, Eigen::VectorXd::Constant(kParams, 2.0), f);
  for (auto _ : state) {
    qibas_step(s, f, cfg);
    benchmark::DoNotOptimize(s.best_value);
  }
}
BENCHMARK(BM_QibasStep);

void BM_EkfPass(benchmark::State& state) {
  // Full relinearized filter sweep over a 96-sample training set.
  const DhTable table = bench_table();
  const Dataset data = bench_dataset(table, 96);
  const EkfNoiseConfig noise = EkfNoiseConfig::defaults();
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_ekf(table, data, noise, true));
  }
}
BENCHMARK(BM_EkfPass);

}  // namespace

BENCHMARK_MAIN();
