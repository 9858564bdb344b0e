// End-to-end checks of the command line tool: real process, real files.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

namespace {

namespace fs = std::filesystem;

const std::string kCli = DRAWCAL_CLI_PATH;
const std::string kConfigs = DRAWCAL_CONFIG_DIR;

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

class CliFixture : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("drawcal_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  RunResult run(const std::string& args) const {
    const std::string out = path("stdout.txt");
    const std::string err = path("stderr.txt");
    const std::string cmd = kCli + " " + args + " > " + out + " 2> " + err;
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  std::string robot() const { return kConfigs + "/irb120.json"; }

  fs::path dir_;
};

int count_data_rows(const std::string& text) {
  int rows = 0;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (!line.empty() && line[0] != '#' && line[0] != 'q') ++rows;
  }
  return rows;
}

TEST_F(CliFixture, SimulateWritesTheRequestedRowsAndSidecars) {
  const RunResult r = run("simulate --robot " + robot() + " --out " + path("d.csv") +
                          " --n 120 --noise gaussian:0.1 --seed 5");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("120 samples"), std::string::npos);
  EXPECT_EQ(count_data_rows(slurp(path("d.csv"))), 120);
  EXPECT_TRUE(fs::exists(path("d.csv.truth.json")));
  EXPECT_TRUE(fs::exists(path("d.csv.manifest.json")));
}

TEST_F(CliFixture, SimulateIsByteIdenticalUnderTheSameSeed) {
  ASSERT_EQ(run("simulate --robot " + robot() + " --out " + path("a.csv") +
                " --n 50 --noise mixture:0.1,0.05,10 --seed 11")
                .exit_code,
            0);
  ASSERT_EQ(run("simulate --robot " + robot() + " --out " + path("b.csv") +
                " --n 50 --noise mixture:0.1,0.05,10 --seed 11")
                .exit_code,
            0);
  ASSERT_EQ(run("simulate --robot " + robot() + " --out " + path("c.csv") +
                " --n 50 --noise mixture:0.1,0.05,10 --seed 12")
                .exit_code,
            0);
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
  EXPECT_NE(slurp(path("a.csv")), slurp(path("c.csv")));
}

TEST_F(CliFixture, SimulateRejectsANonPositiveSampleCount) {
  const RunResult r = run("simulate --robot " + robot() + " --out " + path("d.csv") +
                          " --n 0");
  EXPECT_EQ(r.exit_code, 2);
}

TEST_F(CliFixture, CalibrateRecoversANoiseFreeDataset) {
  // The bench geometry: every deviation direction that can change a wire
  // length is well conditioned, so a noise-free fit has no residual floor.
  const std::string bench = kConfigs + "/bench6r.json";
  ASSERT_EQ(run("simulate --robot " + bench + " --out " + path("d.csv") +
                " --n 120 --noise none --seed 3")
                .exit_code,
            0);
  const RunResult r = run("calibrate --robot " + bench + " --data " + path("d.csv") +
                          " --out " + path("r.json") + " --method ekf-qibas --seed 3");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_TRUE(fs::exists(path("r.json")));
  EXPECT_TRUE(fs::exists(path("r.json.table.json")));
  EXPECT_TRUE(fs::exists(path("r.json.manifest.json")));
  EXPECT_TRUE(fs::exists(path("r.json.search_trace.csv")));
  EXPECT_TRUE(fs::exists(path("r.json.filter_trace.csv")));

  // Pull the held-out rmse of the calibrated table out of the result file.
  const std::string result = slurp(path("r.json"));
  const auto after = result.find("\"after\"");
  ASSERT_NE(after, std::string::npos);
  const auto rmse = result.find("\"rmse_mm\":", after);
  ASSERT_NE(rmse, std::string::npos);
  const double value = std::strtod(result.c_str() + rmse + 10, nullptr);
  EXPECT_LT(value, 1e-5);
}

TEST_F(CliFixture, CalibrateIsDeterministicUnderTheSeed) {
  ASSERT_EQ(run("simulate --robot " + robot() + " --out " + path("d.csv") +
                " --n 80 --noise gaussian:0.1 --seed 9")
                .exit_code,
            0);
  ASSERT_EQ(run("calibrate --robot " + robot() + " --data " + path("d.csv") +
                " --out " + path("r1.json") + " --seed 4 --max-iters 800")
                .exit_code,
            0);
  ASSERT_EQ(run("calibrate --robot " + robot() + " --data " + path("d.csv") +
                " --out " + path("r2.json") + " --seed 4 --max-iters 800")
                .exit_code,
            0);
  // The result files carry wall-clock timings; the calibrated tables are the
  // timing-free artifact and must match byte for byte.
  EXPECT_EQ(slurp(path("r1.json.table.json")), slurp(path("r2.json.table.json")));
}

TEST_F(CliFixture, CalibrateRejectsAnUnknownMethod) {
  ASSERT_EQ(run("simulate --robot " + robot() + " --out " + path("d.csv") +
                " --n 20 --seed 1")
                .exit_code,
            0);
  const RunResult r = run("calibrate --robot " + robot() + " --data " + path("d.csv") +
                          " --out " + path("r.json") + " --method annealing");
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.err.find("annealing"), std::string::npos);
}

TEST_F(CliFixture, CalibrateNamesTheMalformedDatasetLine) {
  std::ofstream out(path("bad.csv"));
  out << "# p0_mm: 1000 0 0\nq1,q2,q3,q4,q5,q6,y_mm\n0,0,0,0,0,0,500\n0,0,oops,0,0,0,500\n";
  out.close();
  const RunResult r = run("calibrate --robot " + robot() + " --data " + path("bad.csv") +
                          " --out " + path("r.json"));
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.err.find(":4"), std::string::npos) << r.err;
}

TEST_F(CliFixture, MissingInputFileIsARuntimeError) {
  const RunResult r = run("simulate --robot " + path("nope.json") + " --out " +
                          path("d.csv"));
  EXPECT_EQ(r.exit_code, 1);
}

TEST_F(CliFixture, FkPrintsTheHomePose) {
  const RunResult r = run("fk --robot " + robot() + " 0 0 0 0 0 0");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("p_mm: 374 "), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("630"), std::string::npos);
  EXPECT_NE(r.out.find("wire_mm:"), std::string::npos);
}

TEST_F(CliFixture, FkRequiresExactlySixJointValues) {
  EXPECT_EQ(run("fk --robot " + robot() + " 0 0 0 0 0").exit_code, 2);
}

TEST_F(CliFixture, FkRejectsAJointOutsideItsLimits) {
  // 7 rad exceeds every limit of the first joint.
  const RunResult r = run("fk --robot " + robot() + " 7 0 0 0 0 0");
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.err.find("joint 1"), std::string::npos);
}

TEST_F(CliFixture, CompareWritesTheSummaryArtifacts) {
  const RunResult r =
      run("compare --robot " + robot() + " --out " + path("cmp") +
          " --trials 1 --n 40 --method ekf --method qibas --max-iters 200 --seed 2");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_TRUE(fs::exists(path("cmp/comparison.txt")));
  EXPECT_TRUE(fs::exists(path("cmp/comparison.json")));
  EXPECT_TRUE(fs::exists(path("cmp/manifest.json")));
  EXPECT_TRUE(fs::exists(path("cmp/trial0_ekf.filter_trace.csv")));
  EXPECT_TRUE(fs::exists(path("cmp/trial0_qibas.search_trace.csv")));
  const std::string table = slurp(path("cmp/comparison.txt"));
  EXPECT_NE(table.find("before"), std::string::npos);
  EXPECT_NE(table.find("qibas"), std::string::npos);
  EXPECT_EQ(r.out.find("error"), std::string::npos);
}

TEST_F(CliFixture, VersionFlagPrintsTheVersion) {
  const RunResult r = run("--version");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("0.1.0"), std::string::npos);
}

}  // namespace
