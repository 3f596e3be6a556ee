#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int status;
  std::string out;  // stdout and stderr merged
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string("\"") + FINFOLD_CLI_PATH + "\" " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  char buf[512];
  while (std::fgets(buf, sizeof buf, pipe)) out += buf;
  const int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

fs::path scratch(const char* name) {
  const fs::path dir = fs::temp_directory_path() / ("finfold_cli_" + std::string(name));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TEST(Cli, UnknownOptionIsArgumentError) {
  const RunResult r = run("simulate --warp 9");
  EXPECT_EQ(r.status, 2);
  EXPECT_EQ(r.out.rfind("argument_error:", 0), 0u) << r.out;
}

TEST(Cli, BadFrequencyIsDomainError) {
  const fs::path d = scratch("domain");
  const RunResult r = run("simulate -f -1 -o " + (d / "t.csv").string());
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.out.find("_error:"), std::string::npos) << r.out;
}

TEST(Cli, MissingConfigIsIoError) {
  const RunResult r = run("simulate -c /nonexistent/finfold.json");
  EXPECT_EQ(r.status, 1);
  EXPECT_EQ(r.out.rfind("io_error:", 0), 0u) << r.out;
}

TEST(Cli, InvalidConfigNamesField) {
  const fs::path d = scratch("invalid");
  std::ofstream(d / "c.json") << R"({"robot": {"mass": -1}})";
  const RunResult r = run("simulate -c " + (d / "c.json").string());
  EXPECT_EQ(r.status, 1);
  EXPECT_EQ(r.out.rfind("validation_error:", 0), 0u) << r.out;
  EXPECT_NE(r.out.find("robot.mass"), std::string::npos);
}

TEST(Cli, SimulateThenAnalyze) {
  const fs::path d = scratch("roundtrip");
  const std::string csv = (d / "t.csv").string();
  RunResult r = run("simulate -f 2.5 --fin erected -d 20 --dt 0.01 -o " + csv);
  ASSERT_EQ(r.status, 0) << r.out;
  ASSERT_TRUE(fs::exists(csv));
  r = run("analyze -i " + csv);
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("\"steady_speed_mps\""), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("\"r2\""), std::string::npos);
}

TEST(Cli, ShuffledCsvIsNonMonotonic) {
  const fs::path d = scratch("shuffled");
  std::ofstream(d / "t.csv") << "t,marker_id,x,y\n0.02,0,0,0\n0.01,0,0,0\n0.03,0,0,0\n";
  const RunResult r = run("analyze -i " + (d / "t.csv").string());
  EXPECT_EQ(r.status, 1);
  EXPECT_EQ(r.out.rfind("non_monotonic_time:", 0), 0u) << r.out;
}

TEST(Cli, DirectMetrics) {
  const RunResult r =
      run("metrics --power 1.55 --speed 0.338 --mass 2.305 --tail-amplitude 0.13 --length 0.57 -f 2.6");
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("\"cot\""), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("\"re\": 192660"), std::string::npos);
}

TEST(Cli, SweepAndReport) {
  const fs::path d = scratch("sweep");
  std::ofstream(d / "c.json") << R"({"simulation": {"dt": 0.01},
    "sweep": {"f_min": 2, "f_max": 2.5, "f_step": 0.5, "include_turns": false}})";
  RunResult r = run("sweep -c " + (d / "c.json").string() + " -o " + (d / "out").string());
  ASSERT_EQ(r.status, 0) << r.out;
  ASSERT_TRUE(fs::exists(d / "out" / "metrics.csv"));
  r = run("report -i " + (d / "out" / "metrics.csv").string() + " -o " + (d / "again").string());
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_TRUE(fs::exists(d / "again" / "cot_vs_f.svg"));
}

}  // namespace
