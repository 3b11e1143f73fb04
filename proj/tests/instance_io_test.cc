#include "igd/instance_io.h"

#include <filesystem>

#include "gtest/gtest.h"
#include "igd/error.h"

namespace igd {
namespace {

TEST(InstanceIoTest, RoundTripIsBitExactForEveryClass) {
  for (ProblemClass cls : kBenchmarkClasses) {
    const GeneratedInstance inst = generate({cls, 0, 0, 0, 31});
    const std::string text = serialize_instance(inst);
    const GeneratedInstance back = parse_instance(text);
    EXPECT_EQ(serialize_instance(back), text) << problem_class_name(cls);
    EXPECT_EQ(back.program.anchor(), inst.program.anchor());
    EXPECT_EQ(back.program.objective().c(), inst.program.objective().c());
    EXPECT_EQ(back.program.h_at_anchor(), inst.program.h_at_anchor());
    EXPECT_EQ(back.spec.seed, inst.spec.seed);
    EXPECT_EQ(instance_hash(back), instance_hash(inst));
  }
}

TEST(InstanceIoTest, DemoRoundTrip) {
  const GeneratedInstance demo = gen_demo_fig1();
  const GeneratedInstance back = parse_instance(serialize_instance(demo));
  EXPECT_EQ(back.program.anchor(), demo.program.anchor());
  EXPECT_EQ(*back.program.reference_optimum(), *demo.program.reference_optimum());
}

TEST(InstanceIoTest, ReferenceSurvives) {
  GeneratedInstance inst = gen_exp(2, 3);
  inst.reference = {-0.123456789012345678, ReferenceProvenance::kDerivedOracle, true};
  const GeneratedInstance back = parse_instance(serialize_instance(inst));
  EXPECT_EQ(*back.reference.value, -0.123456789012345678);
  EXPECT_EQ(back.reference.provenance, ReferenceProvenance::kDerivedOracle);
  EXPECT_TRUE(back.reference.low_confidence);
}

TEST(InstanceIoTest, HeaderLayout) {
  const std::string text = serialize_instance(gen_norm(3, 1));
  EXPECT_EQ(text.rfind("igd-instance 1\nclass norm\ndimension 3\n", 0), 0u);
  EXPECT_EQ(text.substr(text.size() - 4), "end\n");
}

TEST(InstanceIoTest, MalformedInputRaisesIo) {
  const std::string good = serialize_instance(gen_norm(3, 1));
  for (const std::string& bad :
       {std::string(""), std::string("igd-instance 2\n"), good.substr(0, good.size() / 2),
        std::string("igd-instance 1\nclass banana\n")}) {
    try {
      parse_instance(bad);
      ADD_FAILURE() << "accepted: " << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kIo);
    }
  }
}

TEST(InstanceIoTest, FileRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "igd_instance_io_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const GeneratedInstance inst = gen_lin(4, 3, 2);
  const std::string path = (dir / "lin.txt").string();
  write_instance_file(inst, path);
  EXPECT_EQ(serialize_instance(read_instance_file(path)), serialize_instance(inst));
  EXPECT_THROW(read_instance_file((dir / "missing.txt").string()), Error);
  std::filesystem::remove_all(dir);
}

TEST(FormatRealTest, SeventeenDigits) {
  EXPECT_EQ(format_real(0.1), "0.10000000000000001");
  EXPECT_EQ(format_real(-1.0), "-1");
  EXPECT_EQ(std::stod(format_real(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(HashTest, Fnv1aKnownValues) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cull);
}

}  // namespace
}  // namespace igd
