#include "igd/random.h"

#include <cmath>

#include "gtest/gtest.h"
#include "igd/error.h"

namespace igd {
namespace {

TEST(RngTest, SameSeedSameStream) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(a.next_u64(), b.next_u64());
    EXPECT_EQ(a.uniform(), b.uniform());
    EXPECT_EQ(a.normal(), b.normal());
  }
}

TEST(RngTest, UniformInUnitInterval) {
  Rng rng(1);
  for (int i = 0; i < 10'000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

// The engine sequence is fixed by the standard, so the first
// std::mt19937_64 output for seed 5489 is a known constant.
TEST(RngTest, EngineMatchesStandardSequence) {
  Rng rng(5489);
  std::uint64_t last = 0;
  for (int i = 0; i < 10'000; ++i) last = rng.next_u64();
  EXPECT_EQ(last, 9981545732273789042ull);
}

TEST(RngTest, DerivedSeedsDiffer) {
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0, 0), derive_seed(1, 0, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
  EXPECT_EQ(derive_seed(7, 3, 4), derive_seed(7, 3, 4));
}

TEST(SphereTest, OneDimensionalIsPlusOrMinusOne) {
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const Vector v = sample_unit_sphere(1, rng);
    EXPECT_NEAR(std::abs(v[0]), 1.0, 1e-15);
  }
}

TEST(SphereTest, DeterministicForFixedSeed) {
  Rng a(77), b(77);
  EXPECT_EQ(sample_unit_sphere(10, a), sample_unit_sphere(10, b));
}

TEST(SphereTest, UnitNormAndCenteredCoordinates) {
  Rng rng(4);
  Vector mean(3);
  const int n = 10'000;
  for (int i = 0; i < n; ++i) {
    const Vector v = sample_unit_sphere(3, rng);
    ASSERT_NEAR(norm2(v), 1.0, 1e-12);
    axpy(1.0 / n, v, mean);
  }
  for (double m : mean) EXPECT_LE(std::abs(m), 3 * (1 / std::sqrt(3.0)) / 100);
}

TEST(BallTest, AreaFractionOfInnerDisc) {
  Rng rng(8);
  int inner = 0;
  const int n = 10'000;
  for (int i = 0; i < n; ++i) {
    const Vector v = sample_unit_ball(2, rng);
    ASSERT_LE(norm2(v), 1.0);
    if (norm2(v) <= 0.5) ++inner;
  }
  EXPECT_NEAR(static_cast<double>(inner) / n, 0.25, 0.02);
}

TEST(BallTest, Deterministic) {
  Rng a(2), b(2);
  EXPECT_EQ(sample_unit_ball(5, a), sample_unit_ball(5, b));
  EXPECT_EQ(sample_normal(5, a), sample_normal(5, b));
}

TEST(NormalTest, UnitVariance) {
  Rng rng(6);
  const int n = 10'000;
  double sum = 0, sum2 = 0;
  for (int i = 0; i < n; ++i) {
    const double x = sample_normal(1, rng)[0];
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / n;
  EXPECT_NEAR((sum2 - n * mean * mean) / (n - 1), 1.0, 0.05);
}

TEST(SamplerTest, ZeroDimensionRejected) {
  Rng rng(1);
  EXPECT_THROW(sample_unit_sphere(0, rng), Error);
  EXPECT_THROW(sample_unit_ball(0, rng), Error);
  EXPECT_THROW(sample_normal(0, rng), Error);
}

}  // namespace
}  // namespace igd
