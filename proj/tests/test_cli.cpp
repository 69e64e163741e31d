#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace hbt {
namespace {

namespace fs = std::filesystem;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double value_of(const std::string& text, const std::string& key) {
  const auto pos = text.find(key + "=");
  if (pos == std::string::npos) return std::nan("");
  return std::stod(text.substr(pos + key.size() + 1));
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("hbt_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, SimulateNoiseless) {
  const auto r = run({"simulate", "--sigma", "0", "--xi", "0", "--chi", "0", "--pulses", "20000",
                      "--sidebands", "10", "--seed", "7", "-o", path("c.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("g2_zero=0 center=0 sidebands=", 0), 0u) << r.out;
  std::ifstream in(path("c.csv"));
  const auto result = read_correlation_csv(in);
  EXPECT_EQ(result.lags.size(), 21u);
  EXPECT_EQ(result.g2_zero, 0.0);
}

TEST_F(CliTest, SimulateNoisy) {
  const auto r = run({"simulate", "--sigma", "0.6", "--pulses", "20000", "--seed", "7", "-o",
                      path("c.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(value_of(r.out, "g2_zero"), 0.609375, 0.04);
}

TEST_F(CliTest, SimulateRejectsXi) {
  const auto r = run({"simulate", "--xi", "0.6", "-o", path("c.csv")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("xi must lie in the open interval (-1/2, 1/2)"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(path("c.csv")));
}

TEST_F(CliTest, SimulateWritesStreams) {
  const auto r = run({"simulate", "--sigma", "0.2", "--pulses", "100", "--sidebands", "3",
                      "-o", path("c.csv"), "--streams-output", path("s.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(path("s.csv"));
  EXPECT_EQ(read_streams_csv(in).size(), 100u);
}

TEST_F(CliTest, IoFailureExitsThree) {
  const auto r = run({"simulate", "--pulses", "100", "-o", path("no/such/dir/c.csv")});
  EXPECT_EQ(r.code, 3);
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"simulate", "--sigma", "abc"}).code, 2);
  EXPECT_EQ(run({"sweep"}).code, 2);
  EXPECT_EQ(run({"sweep", "--axis", "sigma=0:1:1", "-o", path("g.csv")}).code, 2);
  EXPECT_EQ(run({"theory", "--fock", "0"}).code, 2);
  EXPECT_EQ(run({"simulate", "--pulses", "5", "--sidebands", "10", "-o", path("c.csv")}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(CliTest, TheoryValues) {
  auto r = run({"theory", "--fock", "2"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "fock_g2=0.5\n");
  r = run({"theory", "--sigma", "0.4142135", "--xi", "0", "--chi", "0"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(value_of(r.out, "analytic_g2_zero"), 0.5, 5e-5);
  r = run({"theory", "--sigma", "0.5", "--chi", "0.5"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "analytic_g2_zero=0.5\n");
  r = run({"theory", "--fock", "1", "--sigma", "0"});
  EXPECT_EQ(r.out, "fock_g2=0\nanalytic_g2_zero=0\n");
}

TEST_F(CliTest, SweepAnalyticHasZeroSpread) {
  const auto r = run({"sweep", "--axis", "sigma=0:1:11", "--analytic", "-o", path("g.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("crossing_sigma="), std::string::npos);
  std::ifstream in(path("g.csv"));
  const auto g = read_grid_csv(in);
  ASSERT_EQ(g.cells.size(), 11u);
  for (std::size_t i = 0; i < 11; ++i) {
    const double s = g.axes[0].value(i);
    EXPECT_NEAR(g.cell(i).mean, 1 - 1 / ((1 + s) * (1 + s)), 1e-14);
    EXPECT_EQ(g.cell(i).stddev, 0.0);
  }
}

TEST_F(CliTest, Sweep2DWritesContour) {
  const auto r = run({"sweep", "--axis", "sigma=0:1:11", "--axis", "xi=-0.4:0.4:9", "--pulses",
                      "2000", "--replicates", "2", "--seed", "3", "--jobs", "2", "-o",
                      path("g.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string contour = slurp(path("g_contour.csv"));
  EXPECT_EQ(contour.rfind("polyline_id,axis1,axis2\n", 0), 0u);
  EXPECT_GT(std::count(contour.begin(), contour.end(), '\n'), 2);

  const auto c = run({"contour", "--grid", path("g.csv"), "-o", path("c2.csv")});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_EQ(slurp(path("c2.csv")), contour);
}

TEST_F(CliTest, SweepReportsMissingCells) {
  const auto r = run({"sweep", "--axis", "sigma=0:0.001:2", "--xi", "0.49", "--pulses", "3",
                      "--sidebands", "1", "--replicates", "2", "-o", path("g.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("missing cell (0, 0) sigma=0"), std::string::npos) << r.err;
  EXPECT_NE(slurp(path("g.csv")).find("\n0,nan,nan,0\n"), std::string::npos);
}

TEST_F(CliTest, ByteIdenticalRepeatsAndWorkerCounts) {
  const std::vector<std::string> base{"sweep", "--axis", "xi=-0.4:0.4:5", "--axis",
                                      "chi=-0.5:0.5:5", "--sigma", "0.5", "--pulses", "3000",
                                      "--replicates", "3", "--seed", "11"};
  auto with = [&](std::vector<std::string> extra) {
    auto args = base;
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
  };
  ASSERT_EQ(run(with({"--jobs", "1", "-o", path("a.csv")})).code, 0);
  ASSERT_EQ(run(with({"--jobs", "1", "-o", path("b.csv")})).code, 0);
  ASSERT_EQ(run(with({"--jobs", "8", "-o", path("c.csv")})).code, 0);
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("c.csv")));
  EXPECT_EQ(slurp(path("a_contour.csv")), slurp(path("c_contour.csv")));
}

TEST_F(CliTest, ConfigFileWithOverrides) {
  {
    std::ofstream cfg(path("run.cfg"));
    cfg << "# experiment record\nsigma = 0.6\npulses=4000\nseed=5\nsidebands=4\n";
  }
  const auto from_file = run({"simulate", "--config", path("run.cfg"), "-o", path("a.csv")});
  const auto explicit_flags = run({"simulate", "--sigma", "0.6", "--pulses", "4000", "--seed", "5",
                                   "--sidebands", "4", "-o", path("b.csv")});
  ASSERT_EQ(from_file.code, 0) << from_file.err;
  ASSERT_EQ(explicit_flags.code, 0);
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));

  const auto overridden = run({"simulate", "--config", path("run.cfg"), "--sigma", "0", "-o",
                               path("c.csv")});
  ASSERT_EQ(overridden.code, 0) << overridden.err;
  EXPECT_EQ(value_of(overridden.out, "g2_zero"), 0.0);

  EXPECT_EQ(run({"simulate", "--config", path("missing.cfg")}).code, 3);
}

TEST_F(CliTest, SeedFromEnvironment) {
  ::setenv("HBT_SEED", "1234", 1);
  const auto env = run({"simulate", "--sigma", "0.3", "--pulses", "3000", "-o", path("a.csv")});
  ::unsetenv("HBT_SEED");
  const auto flag = run({"simulate", "--sigma", "0.3", "--pulses", "3000", "--seed", "1234", "-o",
                         path("b.csv")});
  ASSERT_EQ(env.code, 0);
  EXPECT_EQ(env.out, flag.out);
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
}

}  // namespace
}  // namespace hbt
