// Command line front end: simulate drawstring datasets, calibrate a robot
// against one, compare estimation methods, or just run forward kinematics.
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "drawcal/io.hpp"
#include "drawcal/kinematics.hpp"
#include "drawcal/pipeline.hpp"
#include "drawcal/version.hpp"

namespace {

using namespace drawcal;

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void print_metrics(const char* label, const MetricsReport& m) {
  std::printf("%-8s rmse %s mm   mean|r| %s mm   max %s mm   (n=%d)\n", label,
              num(m.rmse).c_str(), num(m.stdev).c_str(), num(m.max).c_str(), m.n);
}

struct SimulateArgs {
  std::string robot;
  std::string out;
  int n = 120;
  std::string noise = "none";
  std::string deviation = "1,1,0.01,0.01";
  std::uint64_t seed = 0;
};

int run_simulate(const SimulateArgs& args) {
  const RobotConfig robot = read_robot_config(args.robot);
  NoiseModel noise = parse_noise_spec(args.noise);
  noise.seed = mix_seed(args.seed, 12);
  DeviationSpec spec = parse_deviation_spec(args.deviation);
  spec.seed = mix_seed(args.seed, 11);

  const DeviationVector truth = inject_deviation(spec);
  const std::vector<JointVector> configs =
      sample_joint_configs(args.n, robot.table, mix_seed(args.seed, 10));
  const Dataset data =
      simulate_measurements(robot.table, truth, configs, robot.p0, noise);

  const std::string truth_path = args.out + ".truth.json";
  const std::string manifest_path = args.out + ".manifest.json";
  write_dataset(args.out, data,
                {"robot: " + robot.name, "noise: " + noise_spec_string(noise),
                 "seed: " + std::to_string(args.seed)});
  write_truth_sidecar(truth_path, truth, noise);

  RunManifest manifest;
  manifest.command = "simulate";
  manifest.parameters = {{"robot", args.robot},
                         {"n", std::to_string(args.n)},
                         {"noise", noise_spec_string(noise)},
                         {"deviation", args.deviation},
                         {"seed", std::to_string(args.seed)}};
  manifest.outputs = {args.out, truth_path};
  write_manifest(manifest_path, manifest);

  std::printf("wrote %d samples to %s (anchor %s %s %s mm)\n", args.n,
              args.out.c_str(), num(robot.p0[0]).c_str(), num(robot.p0[1]).c_str(),
              num(robot.p0[2]).c_str());
  std::printf("truth sidecar: %s\n", truth_path.c_str());
  return 0;
}

struct CalibrateArgs {
  std::string robot;
  std::string data;
  std::string out;
  std::string method = "ekf-qibas";
  double split = 0.8;
  int max_iters = 4000;
  std::uint64_t seed = 0;
};

int run_calibrate(const CalibrateArgs& args) {
  const std::optional<Method> method = parse_method(args.method);
  if (!method) {
    throw std::invalid_argument("unknown method '" + args.method +
                                "' (expected ekf, bas, qibas, or ekf-qibas)");
  }
  const RobotConfig robot = read_robot_config(args.robot);
  const Dataset data = read_dataset(args.data, robot.p0);

  CalibrationConfig cfg;
  cfg.train_fraction = args.split;
  cfg.max_iters = args.max_iters;
  const CalibrationResult result =
      calibrate(*method, robot.table, data, cfg, args.seed);

  RunManifest manifest;
  manifest.command = "calibrate";
  manifest.parameters = {{"robot", args.robot},
                         {"data", args.data},
                         {"method", args.method},
                         {"split", num(args.split)},
                         {"max_iters", std::to_string(args.max_iters)},
                         {"seed", std::to_string(args.seed)}};

  write_calibration_result(args.out, result);
  manifest.outputs.push_back(args.out);

  RobotConfig calibrated = robot;
  calibrated.name = robot.name + "-calibrated";
  calibrated.table = apply_deviation(robot.table, result.delta_hat);
  const std::string table_path = args.out + ".table.json";
  write_robot_config(table_path, calibrated);
  manifest.outputs.push_back(table_path);

  if (!result.search_trace.empty()) {
    const std::string p = args.out + ".search_trace.csv";
    write_search_trace(p, result.search_trace);
    manifest.outputs.push_back(p);
  }
  if (!result.filter_trace.empty()) {
    const std::string p = args.out + ".filter_trace.csv";
    write_filter_trace(p, result.filter_trace);
    manifest.outputs.push_back(p);
  }
  write_manifest(args.out + ".manifest.json", manifest);

  std::printf("method %s on %zu samples (train fraction %s)\n",
              method_name(*method).c_str(), data.samples.size(),
              num(args.split).c_str());
  print_metrics("before", result.before);
  print_metrics("after", result.after);
  std::printf("train objective %s -> %s mm^2 in %s ms\n",
              num(result.train_objective_before).c_str(),
              num(result.train_objective_after).c_str(),
              num(result.wall_ms).c_str());
  std::printf("calibrated table: %s\n", table_path.c_str());
  return 0;
}

struct CompareArgs {
  std::string robot;
  std::string out;
  std::vector<std::string> methods;
  int n = 120;
  int trials = 20;
  std::string noise = "gaussian:0.1";
  std::string deviation = "1,1,0.01,0.01";
  double split = 0.8;
  int max_iters = 4000;
  std::uint64_t seed = 0;
};

int run_compare(const CompareArgs& args) {
  std::vector<Method> methods;
  for (const std::string& name : args.methods) {
    const std::optional<Method> m = parse_method(name);
    if (!m) {
      throw std::invalid_argument("unknown method '" + name +
                                  "' (expected ekf, bas, qibas, or ekf-qibas)");
    }
    methods.push_back(*m);
  }
  if (methods.empty()) {
    methods = {Method::kEkf, Method::kBas, Method::kQibas, Method::kEkfQibas};
  }

  const RobotConfig robot = read_robot_config(args.robot);
  Scenario scenario;
  scenario.nominal = robot.table;
  scenario.p0 = robot.p0;
  scenario.noise = parse_noise_spec(args.noise);
  scenario.deviations = parse_deviation_spec(args.deviation);
  scenario.n = args.n;

  CalibrationConfig cfg;
  cfg.train_fraction = args.split;
  cfg.max_iters = args.max_iters;
  const Comparison comparison =
      compare(methods, scenario, args.trials, cfg, args.seed);

  namespace fs = std::filesystem;
  fs::create_directories(args.out);
  RunManifest manifest;
  manifest.command = "compare";
  manifest.parameters = {{"robot", args.robot},
                         {"n", std::to_string(args.n)},
                         {"trials", std::to_string(args.trials)},
                         {"noise", args.noise},
                         {"deviation", args.deviation},
                         {"split", num(args.split)},
                         {"max_iters", std::to_string(args.max_iters)},
                         {"seed", std::to_string(args.seed)}};

  const std::string table_path = (fs::path(args.out) / "comparison.txt").string();
  const std::string json_path = (fs::path(args.out) / "comparison.json").string();
  std::ofstream table_file(table_path);
  if (!table_file) {
    throw std::runtime_error("cannot write " + table_path);
  }
  const std::string table = comparison_table(comparison);
  table_file << table;
  table_file.close();
  write_comparison(json_path, comparison);
  manifest.outputs = {table_path, json_path};

  // First-trial traces, one file per method.
  for (std::size_t m = 0; m < methods.size(); ++m) {
    const CalibrationResult& first = comparison.results[m][0];
    const std::string base =
        (fs::path(args.out) / ("trial0_" + method_name(methods[m]))).string();
    if (!first.search_trace.empty()) {
      write_search_trace(base + ".search_trace.csv", first.search_trace);
      manifest.outputs.push_back(base + ".search_trace.csv");
    }
    if (!first.filter_trace.empty()) {
      write_filter_trace(base + ".filter_trace.csv", first.filter_trace);
      manifest.outputs.push_back(base + ".filter_trace.csv");
    }
  }
  write_manifest((fs::path(args.out) / "manifest.json").string(), manifest);

  std::fputs(table.c_str(), stdout);
  std::printf("\nwrote %s\n", table_path.c_str());
  return 0;
}

struct FkArgs {
  std::string robot;
  std::vector<double> joints;
};

int run_fk(const FkArgs& args) {
  const RobotConfig robot = read_robot_config(args.robot);
  JointVector q;
  for (int i = 0; i < kLinks; ++i) q[i] = args.joints[static_cast<std::size_t>(i)];
  for (int i = 0; i < kLinks; ++i) {
    if (q[i] < robot.table.joint_limits[i].min ||
        q[i] > robot.table.joint_limits[i].max) {
      throw std::invalid_argument("joint " + std::to_string(i + 1) +
                                  " outside the limits of " + robot.name);
    }
  }
  const Pose pose = forward_kinematics(robot.table, q);
  std::printf("p_mm: %s %s %s\n", num(pose.p[0]).c_str(), num(pose.p[1]).c_str(),
              num(pose.p[2]).c_str());
  for (int r = 0; r < 3; ++r) {
    std::printf("R%d:   %s %s %s\n", r, num(pose.r(r, 0)).c_str(),
                num(pose.r(r, 1)).c_str(), num(pose.r(r, 2)).c_str());
  }
  const double len = cable_length(pose.p, robot.p0);
  std::printf("wire_mm: %s\n", num(len).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Drawstring kinematic calibration toolkit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Generate a synthetic wire-length dataset with a known deviation");
  simulate->add_option("--robot", sim.robot, "robot config JSON")->required();
  simulate->add_option("--out", sim.out, "output dataset path")->required();
  simulate->add_option("--n", sim.n, "number of samples")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--noise", sim.noise,
                       "none | gaussian:S | uniform:H | mixture:S,P,SCALE");
  simulate->add_option("--deviation", sim.deviation,
                       "injected caps A,D,ALPHA,THETA (mm mm rad rad)");
  simulate->add_option("--seed", sim.seed, "master seed");

  CalibrateArgs cal;
  CLI::App* calibrate = app.add_subcommand(
      "calibrate", "Estimate parameter deviations from a measured dataset");
  calibrate->add_option("--robot", cal.robot, "robot config JSON")->required();
  calibrate->add_option("--data", cal.data, "dataset path")->required();
  calibrate->add_option("--out", cal.out, "output result path")->required();
  calibrate->add_option("--method", cal.method, "ekf | bas | qibas | ekf-qibas");
  calibrate->add_option("--split", cal.split, "train fraction")
      ->check(CLI::Range(0.0, 1.0));
  calibrate->add_option("--max-iters", cal.max_iters, "search iteration budget")
      ->check(CLI::NonNegativeNumber);
  calibrate->add_option("--seed", cal.seed, "master seed");

  CompareArgs cmp;
  CLI::App* compare = app.add_subcommand(
      "compare", "Benchmark methods over repeated simulated calibrations");
  compare->add_option("--robot", cmp.robot, "robot config JSON")->required();
  compare->add_option("--out", cmp.out, "output directory")->required();
  compare->add_option("--method", cmp.methods,
                      "methods to run (repeatable; default all four)");
  compare->add_option("--n", cmp.n, "samples per trial")->check(CLI::PositiveNumber);
  compare->add_option("--trials", cmp.trials, "number of trials")
      ->check(CLI::PositiveNumber);
  compare->add_option("--noise", cmp.noise, "noise spec");
  compare->add_option("--deviation", cmp.deviation, "injected caps");
  compare->add_option("--split", cmp.split, "train fraction")
      ->check(CLI::Range(0.0, 1.0));
  compare->add_option("--max-iters", cmp.max_iters, "search iteration budget")
      ->check(CLI::NonNegativeNumber);
  compare->add_option("--seed", cmp.seed, "master seed");

  FkArgs fk;
  CLI::App* fk_cmd = app.add_subcommand(
      "fk", "Print the flange pose and wire length at a joint configuration");
  fk_cmd->add_option("--robot", fk.robot, "robot config JSON")->required();
  fk_cmd->add_option("q", fk.joints, "six joint values (rad)")
      ->expected(6)
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (simulate->parsed()) return run_simulate(sim);
    if (calibrate->parsed()) return run_calibrate(cal);
    if (compare->parsed()) return run_compare(cmp);
    return run_fk(fk);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
}
