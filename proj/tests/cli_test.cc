// Drives the built `igd` binary through the shell and checks exit codes,
// echoed configuration and written files.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>

#include "gtest/gtest.h"

namespace {

namespace fs = std::filesystem;

struct CliRun {
  int status = -1;
  std::string output;  // stdout and stderr interleaved
};

CliRun run(const std::string& args, const std::string& env = "env -u IGD_OUTPUT_DIR") {
  const std::string cmd = env + " " + IGD_CLI_PATH + " " + args + " 2>&1";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("igd_cli_") + info->name());
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string dir(const std::string& sub = "") const { return (dir_ / sub).string(); }
  fs::path dir_;
};

TEST_F(CliTest, GenerateWritesInstancesAndManifest) {
  const CliRun r = run("generate --class norm --d 100 --count 3 --seed 7 --out " + dir("a"));
  ASSERT_EQ(r.status, 0) << r.output;
  EXPECT_NE(r.output.find("config seed = 7"), std::string::npos);
  for (int i = 0; i < 3; ++i) EXPECT_TRUE(fs::exists(dir_ / "a" / ("norm_" + std::to_string(i) + ".txt")));
  EXPECT_TRUE(fs::exists(dir_ / "a" / "norm_manifest.txt"));
}

TEST_F(CliTest, GenerateIsDeterministic) {
  ASSERT_EQ(run("generate --class soc --count 2 --seed 7 --out " + dir("a")).status, 0);
  ASSERT_EQ(run("generate --class soc --count 2 --seed 7 --out " + dir("b")).status, 0);
  for (const char* f : {"soc_0.txt", "soc_1.txt", "soc_manifest.txt"}) {
    EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
  }
}

TEST_F(CliTest, GenerateRefusesOverwriteWithoutForce) {
  ASSERT_EQ(run("generate --class lin --count 1 --out " + dir()).status, 0);
  EXPECT_EQ(run("generate --class lin --count 1 --out " + dir()).status, 2);
  EXPECT_EQ(run("generate --class lin --count 1 --force --out " + dir()).status, 0);
}

TEST_F(CliTest, UnknownClassIsUsageError) {
  const CliRun r = run("generate --class pgd --out " + dir());
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.output.find("unknown problem class"), std::string::npos) << r.output;
}

TEST_F(CliTest, OutputDirectoryFromEnvironment) {
  EXPECT_EQ(run("generate --class exp --count 1").status, 1);
  const CliRun r = run("generate --class exp --count 1", "env IGD_OUTPUT_DIR=" + dir("env"));
  ASSERT_EQ(r.status, 0) << r.output;
  EXPECT_TRUE(fs::exists(dir_ / "env" / "exp_0.txt"));
}

TEST_F(CliTest, SolveNormAutoBetaReportsGapWithinBound) {
  const CliRun r = run("solve --class norm --seed 3 --alg igd --beta auto --K 10000");
  ASSERT_EQ(r.status, 0) << r.output;
  std::smatch m;
  const std::regex gap("gap=([-0-9.e+]+) convergence_bound=([-0-9.e+]+)");
  ASSERT_TRUE(std::regex_search(r.output, m, gap)) << r.output;
  EXPECT_LE(std::stod(m[1]), std::stod(m[2]));
  EXPECT_NE(r.output.find("lemma1_violated=no"), std::string::npos);
  EXPECT_NE(r.output.find("config K = 10000"), std::string::npos);
}

TEST_F(CliTest, SolveFromArchivedInstanceWithTrace) {
  ASSERT_EQ(run("generate --class lin --count 1 --seed 2 --out " + dir()).status, 0);
  const CliRun r = run("solve --instance " + dir("lin_0.txt") + " --alg subgd --beta 1e-2 --K 50 --trace " +
                    dir("trace.csv"));
  ASSERT_EQ(r.status, 0) << r.output;
  const std::string trace = slurp(dir_ / "trace.csv");
  EXPECT_EQ(trace.rfind("k,eta,objective,constraint,alpha,feasible\n", 0), 0u);
  EXPECT_EQ(std::count(trace.begin(), trace.end(), '\n'), 51);
}

TEST_F(CliTest, SolveUsageErrors) {
  EXPECT_EQ(run("solve --class norm --K 0").status, 1);
  const CliRun pgd = run("solve --class sdp --alg pgd --beta 1e-3 --K 10");
  EXPECT_EQ(pgd.status, 1);
  EXPECT_NE(pgd.output.find("pgd is unsupported"), std::string::npos) << pgd.output;
  EXPECT_EQ(run("solve --K 10").status, 1);
  EXPECT_EQ(run("solve --class norm --alg adam").status, 1);
  EXPECT_EQ(run("frobnicate").status, 1);
}

TEST_F(CliTest, SolveConfigurationErrorIsRuntime) {
  // SOC has no domain bound, so the automatic step size is unavailable.
  const CliRun r = run("solve --class soc --beta auto --K 100");
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.output.find("configuration"), std::string::npos) << r.output;
}

TEST_F(CliTest, SweepWritesSchemaAndIsByteDeterministic) {
  const std::string flags =
      "sweep --class lin --betas 1e-3,1e-2 --algs igd,subgd --instances 3 --iters 200 --seed 1 "
      "--oracle-iters 2000 --out ";
  const CliRun a = run(flags + dir("a"));
  ASSERT_EQ(a.status, 0) << a.output;
  ASSERT_EQ(run(flags + dir("b") + " --threads 2").status, 0);
  const std::string curves = slurp(dir_ / "a" / "lin_curves.csv");
  EXPECT_EQ(curves.rfind("class,algorithm,beta,iteration,median,q25,q75,defined_count\n", 0), 0u);
  EXPECT_EQ(curves, slurp(dir_ / "b" / "lin_curves.csv"));
  EXPECT_EQ(slurp(dir_ / "a" / "lin_terminal.csv"), slurp(dir_ / "b" / "lin_terminal.csv"));
  EXPECT_NE(a.output.find("config instances = 3"), std::string::npos);
}

TEST_F(CliTest, SweepConfigFileWithFlagOverride) {
  fs::create_directories(dir_);
  std::ofstream(dir_ / "sweep.cfg") << "# small\nclass = lin\nbetas = 1e-2\ninstances = 2\n"
                                       "iters = 100\noracle_iters = 2000\nout = "
                                    << dir("fromfile") << "\n";
  const CliRun r = run("sweep --config " + dir("sweep.cfg") + " --instances 3");
  ASSERT_EQ(r.status, 0) << r.output;
  EXPECT_NE(r.output.find("config instances = 3"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "fromfile" / "lin_curves.csv"));

  std::ofstream(dir_ / "bad.cfg") << "colour = blue\n";
  EXPECT_EQ(run("sweep --config " + dir("bad.cfg")).status, 1);
}

TEST_F(CliTest, SweepUsageErrors) {
  EXPECT_EQ(run("sweep --class lin --instances 2 --iters 10").status, 1);
  EXPECT_EQ(run("sweep --class soc --algs igd,pgd --out " + dir()).status, 1);
  EXPECT_EQ(run("sweep --class lin --betas 0 --out " + dir()).status, 1);
}

TEST_F(CliTest, PaperScaleEchoesHundredInstances) {
  // Norm has an analytic optimum, so 100 one-iteration runs are cheap.
  const CliRun r = run("sweep --class norm --paper-scale --iters 1 --betas 1e-2 --algs igd "
                    "--oracle-iters 10 --out " + dir());
  ASSERT_EQ(r.status, 0) << r.output;
  EXPECT_NE(r.output.find("config instances = 100"), std::string::npos);
}

TEST_F(CliTest, DemoReportsContrast) {
  const CliRun r = run("demo --out " + dir("demo.csv"));
  ASSERT_EQ(r.status, 0) << r.output;
  EXPECT_NE(r.output.find("identical_before_exit=yes"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "demo.csv"));
  EXPECT_EQ(run("demo --K 0").status, 1);
}

TEST_F(CliTest, VerifyFastPassesWithinAMinute) {
  const auto start = std::chrono::steady_clock::now();
  const CliRun r = run("verify --level fast");
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_EQ(r.status, 0) << r.output;
  EXPECT_LT(seconds, 60.0);
  EXPECT_NE(r.output.find("all checks passed"), std::string::npos);
  EXPECT_EQ(r.output.find("FAIL "), std::string::npos) << r.output;
  EXPECT_EQ(run("verify --level medium").status, 1);
}

}  // namespace
