#include "drawcal/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <gtest/gtest.h>

#include "helpers.hpp"

namespace drawcal {
namespace {

namespace fs = std::filesystem;

using testing::random_table;

class IoFixture : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("drawcal_io_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
  }

  fs::path dir_;
};

TEST_F(IoFixture, RobotConfigRoundTrips) {
  RobotConfig robot;
  robot.name = "bench";
  Rng rng(601);
  robot.table = random_table(rng);
  robot.table.joint_limits[2] = {-1.25, 0.75};
  robot.p0 = Eigen::Vector3d(812.5, -40.25, 99.0);
  write_robot_config(path("robot.json"), robot);
  const RobotConfig back = read_robot_config(path("robot.json"));
  EXPECT_EQ(back.name, "bench");
  EXPECT_TRUE(back.p0 == robot.p0);
  for (int i = 0; i < kLinks; ++i) {
    EXPECT_DOUBLE_EQ(back.table.links[i].a, robot.table.links[i].a);
    EXPECT_DOUBLE_EQ(back.table.links[i].d, robot.table.links[i].d);
    EXPECT_DOUBLE_EQ(back.table.links[i].theta_offset,
                     robot.table.links[i].theta_offset);
    EXPECT_DOUBLE_EQ(back.table.links[i].alpha, robot.table.links[i].alpha);
    EXPECT_DOUBLE_EQ(back.table.joint_limits[i].min, robot.table.joint_limits[i].min);
    EXPECT_DOUBLE_EQ(back.table.joint_limits[i].max, robot.table.joint_limits[i].max);
  }
}

TEST_F(IoFixture, ShippedFixturesLoad) {
  const RobotConfig irb = read_robot_config(std::string(DRAWCAL_CONFIG_DIR) +
                                            "/irb120.json");
  EXPECT_EQ(irb.name, "irb120");
  EXPECT_DOUBLE_EQ(irb.table.links[1].a, 270.0);
  const RobotConfig bench = read_robot_config(std::string(DRAWCAL_CONFIG_DIR) +
                                              "/bench6r.json");
  EXPECT_EQ(bench.name, "bench6r");
  for (int i = 0; i < kLinks; ++i) {
    EXPECT_NE(bench.table.links[i].alpha, 0.0);  // fully identifiable geometry
  }
}

TEST_F(IoFixture, RobotConfigNamesBadFields) {
  write_text(path("missing.json"), R"({"name": "x", "p0_mm": [0, 0, 0], "links": [
    {"a_mm": 1, "d_mm": 2, "theta_offset_rad": 0, "alpha_rad": 0, "q_min_rad": -1},
    {}, {}, {}, {}, {}]})");
  try {
    read_robot_config(path("missing.json"));
    FAIL() << "expected invalid_argument";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("q_max_rad"), std::string::npos) << e.what();
  }

  write_text(path("unknown.json"), R"({"name": "x", "p0_mm": [0, 0, 0], "links": [
    {"a_mm": 1, "d_mm": 2, "theta_offset_rad": 0, "alpha_rad": 0,
     "q_min_rad": -1, "q_max_rad": 1, "color": "red"},
    {}, {}, {}, {}, {}]})");
  try {
    read_robot_config(path("unknown.json"));
    FAIL() << "expected invalid_argument";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("color"), std::string::npos) << e.what();
  }

  write_text(path("limits.json"), R"({"name": "x", "p0_mm": [0, 0, 0], "links": [
    {"a_mm": 1, "d_mm": 2, "theta_offset_rad": 0, "alpha_rad": 0,
     "q_min_rad": 1, "q_max_rad": -1},
    {}, {}, {}, {}, {}]})");
  EXPECT_THROW(read_robot_config(path("limits.json")), std::invalid_argument);

  EXPECT_THROW(read_robot_config(path("nonexistent.json")), std::runtime_error);
}

TEST_F(IoFixture, DatasetRoundTripsWithAnchorAndComments) {
  Dataset data;
  data.p0 = Eigen::Vector3d(1000.0, 0.125, -3.5);
  Rng rng(602);
  for (int i = 0; i < 7; ++i) {
    JointVector q;
    for (int j = 0; j < kLinks; ++j) q[j] = uniform_in(rng, -2.0, 2.0);
    data.samples.push_back({q, uniform_in(rng, 200.0, 1500.0)});
  }
  write_dataset(path("data.csv"), data, {"synthetic lengths", "second comment"});
  const Dataset back = read_dataset(path("data.csv"));
  EXPECT_TRUE(back.p0 == data.p0);
  ASSERT_EQ(back.samples.size(), data.samples.size());
  for (std::size_t i = 0; i < data.samples.size(); ++i) {
    EXPECT_TRUE(back.samples[i].q == data.samples[i].q);  // full-precision text
    EXPECT_EQ(back.samples[i].y, data.samples[i].y);
  }
}

TEST_F(IoFixture, DatasetFallbackAnchorAppliesOnlyWithoutTheComment) {
  write_text(path("plain.csv"),
             "q1,q2,q3,q4,q5,q6,y_mm\n0,0,0,0,0,0,500\n");
  const Dataset d =
      read_dataset(path("plain.csv"), Eigen::Vector3d(1.0, 2.0, 3.0));
  EXPECT_TRUE(d.p0 == Eigen::Vector3d(1.0, 2.0, 3.0));
  EXPECT_THROW(read_dataset(path("plain.csv")), std::invalid_argument);
}

TEST_F(IoFixture, DatasetErrorsNameTheLine) {
  write_text(path("bad_row.csv"),
             "# p0_mm: 0 0 0\nq1,q2,q3,q4,q5,q6,y_mm\n0,0,0,0,0,0,500\n0,0,0,0,0,500\n");
  try {
    read_dataset(path("bad_row.csv"));
    FAIL() << "expected invalid_argument";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find(":4"), std::string::npos) << e.what();
  }

  write_text(path("bad_number.csv"),
             "# p0_mm: 0 0 0\nq1,q2,q3,q4,q5,q6,y_mm\n0,0,zero,0,0,0,500\n");
  EXPECT_THROW(read_dataset(path("bad_number.csv")), std::invalid_argument);

  write_text(path("negative_y.csv"),
             "# p0_mm: 0 0 0\nq1,q2,q3,q4,q5,q6,y_mm\n0,0,0,0,0,0,-1\n");
  EXPECT_THROW(read_dataset(path("negative_y.csv")), std::invalid_argument);

  write_text(path("no_header.csv"), "# p0_mm: 0 0 0\n0,0,0,0,0,0,500\n");
  EXPECT_THROW(read_dataset(path("no_header.csv")), std::invalid_argument);

  write_text(path("empty.csv"), "# p0_mm: 0 0 0\nq1,q2,q3,q4,q5,q6,y_mm\n");
  EXPECT_THROW(read_dataset(path("empty.csv")), std::invalid_argument);
}

TEST_F(IoFixture, TruthSidecarRoundTrips) {
  Rng rng(603);
  const DeviationVector delta = testing::random_deviation(rng, 1.0, 0.01);
  NoiseModel noise = parse_noise_spec("mixture:0.1,0.05,10");
  write_truth_sidecar(path("truth.json"), delta, noise);
  const DeviationVector back = read_truth_sidecar(path("truth.json"));
  for (int i = 0; i < kParams; ++i) {
    EXPECT_DOUBLE_EQ(back[i], delta[i]) << i;
  }
}

TEST_F(IoFixture, SearchTraceHasTheDocumentedHeader) {
  std::vector<TracePoint> trace = {{1, 2.5, 4, 0.125}, {2, 1.25, 8, 0.25}};
  write_search_trace(path("trace.csv"), trace);
  std::ifstream in(path("trace.csv"));
  std::string header, row1, row2;
  std::getline(in, header);
  std::getline(in, row1);
  std::getline(in, row2);
  EXPECT_EQ(header, "iteration,best_value,cumulative_evaluations,wall_ms");
  EXPECT_EQ(row1.substr(0, 6), "1,2.5,");
  EXPECT_NE(row2.find("2,1.25,8"), std::string::npos);
}

TEST_F(IoFixture, FilterTraceHasTheDocumentedHeader) {
  std::vector<EkfTracePoint> trace = {{1, 0.5, 2.0, 24.0}};
  write_filter_trace(path("trace.csv"), trace);
  std::ifstream in(path("trace.csv"));
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header, "k,innovation,innovation_variance,trace_p");
  EXPECT_EQ(row, "1,0.5,2,24");
}

TEST_F(IoFixture, CalibrationResultSerializesTheEstimate) {
  CalibrationResult r;
  r.method = Method::kQibas;
  r.delta_hat[dev::a(0)] = 0.75;
  r.delta_hat[dev::theta(5)] = -0.0125;
  r.before = {1.0, 0.8, 2.0, 24};
  r.after = {0.1, 0.08, 0.2, 24};
  r.train_objective_before = 1.5;
  r.train_objective_after = 0.01;
  r.wall_ms = 12.0;
  write_calibration_result(path("result.json"), r);

  std::ifstream in(path("result.json"));
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  EXPECT_NE(text.find("\"qibas\""), std::string::npos);
  EXPECT_NE(text.find("0.75"), std::string::npos);
  EXPECT_NE(text.find("-0.0125"), std::string::npos);
  EXPECT_NE(text.find("rmse"), std::string::npos);
}

TEST_F(IoFixture, ComparisonTableListsBeforeAndEveryMethod) {
  Comparison c;
  c.trials = 2;
  c.methods = {Method::kBas};
  MethodSummary before;
  before.label = "before";
  before.median = {3.0, 2.5, 6.0, 24};
  before.iqr = {0.5, 0.4, 1.0, 24};
  before.per_trial = {{3.0, 2.5, 6.0, 24}, {3.5, 2.9, 7.0, 24}};
  MethodSummary bas = before;
  bas.label = "bas";
  bas.median = {0.3, 0.25, 0.6, 24};
  bas.median_wall_ms = 42.0;
  c.rows = {before, bas};
  c.results = {{}};

  const std::string table = comparison_table(c);
  EXPECT_NE(table.find("before"), std::string::npos);
  EXPECT_NE(table.find("bas"), std::string::npos);
  EXPECT_NE(table.find("rmse_mm"), std::string::npos);
  EXPECT_NE(table.find("wall_ms"), std::string::npos);

  write_comparison(path("cmp.json"), c);
  std::ifstream in(path("cmp.json"));
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  EXPECT_NE(text.find("per_trial"), std::string::npos);
}

TEST_F(IoFixture, ManifestRecordsCommandParametersAndOutputs) {
  RunManifest m;
  m.command = "simulate";
  m.parameters = {{"robot", "configs/irb120.json"}, {"n", "120"}};
  m.outputs = {"data.csv", "data.truth.json"};
  write_manifest(path("manifest.json"), m);
  std::ifstream in(path("manifest.json"));
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  EXPECT_NE(text.find("\"simulate\""), std::string::npos);
  EXPECT_NE(text.find("\"n\": \"120\""), std::string::npos);
  EXPECT_NE(text.find("data.truth.json"), std::string::npos);
  EXPECT_NE(text.find("\"created\""), std::string::npos);
  EXPECT_NE(text.find("version"), std::string::npos);
}

}  // namespace
}  // namespace drawcal
