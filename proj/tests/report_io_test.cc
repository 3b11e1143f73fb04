#include "igd/report_io.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"
#include "igd/error.h"

namespace igd {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

BenchmarkReport tiny_report() {
  SweepConfig c;
  c.problem = with_defaults({ProblemClass::kLin, 4, 3});
  c.instances = 2;
  c.iterations = 20;
  c.betas = {1e-2};
  c.oracle_iterations = 1000;
  return run_sweep(c);
}

class ReportIoTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("igd_report_io_") + info->name());
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

TEST_F(ReportIoTest, CurvesCsvSchema) {
  std::ostringstream out;
  write_curves_csv(tiny_report(), out);
  std::istringstream lines(out.str());
  std::string header, first;
  std::getline(lines, header);
  std::getline(lines, first);
  EXPECT_EQ(header, "class,algorithm,beta,iteration,median,q25,q75,defined_count");
  EXPECT_EQ(first.rfind("lin,igd,0.01,0,1,1,1,2", 0), 0u) << first;
  int rows = 0;
  for (std::string l; std::getline(lines, l);) ++rows;
  // Two curves of 20 points, minus the row already read.
  EXPECT_EQ(rows, 39);
}

TEST_F(ReportIoTest, TerminalCsvWritesUndefinedAsNan) {
  BenchmarkReport r = tiny_report();
  r.terminal[0].best_raw.reset();
  r.terminal[0].best_normalized.reset();
  std::ostringstream out;
  write_terminal_csv(r, out);
  std::istringstream lines(out.str());
  std::string header, first;
  std::getline(lines, header);
  std::getline(lines, first);
  EXPECT_EQ(header,
            "class,algorithm,beta,instance,seed,f_star,f_x0,best_raw,best_normalized,"
            "averaged_objective,lemma1_violated,diverged_at");
  EXPECT_NE(first.find(",nan,nan,"), std::string::npos) << first;
}

TEST_F(ReportIoTest, ManifestCarriesSeedsAndDrops) {
  std::ostringstream out;
  write_manifest(tiny_report(), out);
  const std::string m = out.str();
  EXPECT_NE(m.find("seed = 1\n"), std::string::npos);
  EXPECT_NE(m.find("dropped = 0\n"), std::string::npos);
  EXPECT_NE(m.find("wall_seconds = "), std::string::npos);
  EXPECT_NE(m.find("provenance=analytic"), std::string::npos);
}

TEST_F(ReportIoTest, WriteReportCreatesDirectoriesAndRefusesOverwrite) {
  const BenchmarkReport r = tiny_report();
  const fs::path nested = dir_ / "a" / "b";
  const ReportFiles files = write_report(r, nested.string(), false);
  EXPECT_TRUE(fs::exists(files.curves));
  EXPECT_TRUE(fs::exists(files.terminal));
  EXPECT_TRUE(fs::exists(files.manifest));
  ASSERT_EQ(files.instances.size(), 2u);
  EXPECT_TRUE(fs::exists(nested / "instances" / "lin_0.txt"));
  const std::string before = slurp(files.curves);
  try {
    write_report(r, nested.string(), false);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
  EXPECT_NO_THROW(write_report(r, nested.string(), true));
  EXPECT_EQ(slurp(files.curves), before);
}

TEST_F(ReportIoTest, TextFileOverwriteRule) {
  const std::string path = (dir_ / "x" / "t.txt").string();
  write_text_file(path, "one", false);
  EXPECT_THROW(write_text_file(path, "two", false), Error);
  write_text_file(path, "two", true);
  EXPECT_EQ(slurp(path), "two");
}

}  // namespace
}  // namespace igd
