#include "igd/optimizers.h"

#include <cmath>

#include "gtest/gtest.h"
#include "igd/error.h"
#include "igd/harness.h"
#include "igd/problems.h"
#include "igd/random.h"

namespace igd {
namespace {

ConstraintFunction affine(Vector a, double offset) {
  const double lip = norm2(a);
  return ConstraintFunction(
      [a, offset](const Vector& x, Vector* s) {
        if (s) *s = a;
        return dot(a, x) + offset;
      },
      lip);
}

ErrorCode code_of(const std::function<void()>& body) {
  try {
    body();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kIo;
}

IgdConfig fixed(double beta, int k, TraceLevel trace = TraceLevel::kScalars) {
  IgdConfig c;
  c.beta = beta;
  c.iterations = k;
  c.trace = trace;
  return c;
}

TEST(IgdTest, InactiveConstraintIsGradientDescent) {
  const ConvexProgram p(LinearObjective(Vector{1, 0}), affine(Vector{1, 0}, -1e9),
                        Vector{0.0, 0.0});
  const RunTrace t = run_igd(p, fixed(0.1, 5));
  ASSERT_EQ(t.records.size(), 5u);
  EXPECT_NEAR(t.final_iterate[0], -0.5, 1e-15);
  EXPECT_EQ(t.final_iterate[1], 0.0);
  for (const IterationRecord& r : t.records) EXPECT_EQ(r.alpha, 0.1);
}

TEST(IgdTest, AveragedPointIsMeanOfProjectedPoints) {
  const GeneratedInstance inst = gen_norm(5, 3);
  const RunTrace t = run_igd(inst.program, fixed(0.05, 200, TraceLevel::kFull));
  ASSERT_EQ(t.projected.size(), 200u);
  Vector mean(5);
  for (const Vector& g : t.projected) axpy(1.0 / 200, g, mean);
  EXPECT_LE(norm2(mean - t.averaged_point), 1e-12);
  EXPECT_DOUBLE_EQ(t.averaged_objective, inst.program.objective().value(t.averaged_point));
}

TEST(IgdTest, ConvergenceBoundOnNorm) {
  const GeneratedInstance inst = gen_norm(100, 2024);
  IgdConfig c;
  c.iterations = 10'000;
  c.trace = TraceLevel::kSummary;
  const RunTrace t = run_igd(inst.program, c);
  const ConvexProgram& p = inst.program;
  const double h0 = 1.0 / std::abs(p.h_at_anchor());
  const double r = *p.domain_bound();
  ASSERT_GE(c.iterations, auto_beta_min_iterations(h0, r));
  EXPECT_LE(t.averaged_objective - (-1.0), convergence_bound(1.0, h0, r, c.iterations) + 1e-9);
  EXPECT_DOUBLE_EQ(t.beta, auto_beta_step(1.0, h0, r, c.iterations));
}

TEST(IgdTest, DescentSignHoldsOnHalfPlane) {
  const ConvexProgram p(LinearObjective(Vector{1, 0}), affine(Vector{1, 1}, -1.0),
                        Vector{0.0, 0.0});
  // beta = 0.01 is below 1 / (L H) = 1 / sqrt(2).
  const RunTrace t = run_igd(p, fixed(0.01, 10'000));
  EXPECT_FALSE(t.report.lemma1_violated);
  EXPECT_LE(t.report.max_sign_quantity, kDescentSignTolerance);
}

TEST(IgdTest, StepOutsideIsScaledByViolation) {
  const ConvexProgram p(LinearObjective(Vector{-1}), affine(Vector{1}, -1.0), Vector{0.0});
  const RunTrace t = run_igd(p, fixed(2.0, 3));
  // x1 = 2 has rescaled h = 1, so alpha = (1 + 1) * beta.
  EXPECT_EQ(t.records[0].alpha, 2.0);
  EXPECT_DOUBLE_EQ(t.records[1].constraint, 1.0);
  EXPECT_DOUBLE_EQ(t.records[1].alpha, 4.0);
}

TEST(IgdTest, RescalingIsAReparameterization) {
  const GeneratedInstance inst = gen_exp(2, 5);
  const ConvexProgram scaled = inst.program.with_constraint(inst.program.constraint().scaled(7.5));
  const RunTrace a = run_igd(inst.program, fixed(0.05, 500, TraceLevel::kFull));
  const RunTrace b = run_igd(scaled, fixed(0.05, 500, TraceLevel::kFull));
  for (std::size_t k = 0; k < a.iterates.size(); ++k) {
    ASSERT_LE(norm2(a.iterates[k] - b.iterates[k]), 1e-10) << "k=" << k;
  }
}

TEST(IgdTest, DeterministicTraces) {
  const GeneratedInstance inst = gen_lin(10, 10, 9);
  const RunTrace a = run_igd(inst.program, fixed(1e-2, 1000, TraceLevel::kFull));
  const RunTrace b = run_igd(inst.program, fixed(1e-2, 1000, TraceLevel::kFull));
  EXPECT_EQ(a.iterates, b.iterates);
  EXPECT_EQ(a.averaged_objective, b.averaged_objective);
}

TEST(IgdTest, ConfigurationErrors) {
  const GeneratedInstance soc = gen_soc(20, 10, 1);
  IgdConfig c;
  c.iterations = 100;
  // SOC carries no domain bound.
  EXPECT_EQ(code_of([&] { run_igd(soc.program, c); }), ErrorCode::kConfiguration);
  EXPECT_EQ(code_of([&] { run_igd(soc.program, fixed(0.1, 0)); }), ErrorCode::kConfiguration);
  EXPECT_EQ(code_of([&] { run_igd(soc.program, fixed(-1.0, 10)); }), ErrorCode::kConfiguration);
}

// (H0 R / (1 + H0 R))^2 < 1, so every K >= 1 clears the threshold.
TEST(IgdTest, AutoBetaThresholdIsBelowOne) {
  for (double h0 : {1e-3, 1.0, 1e3, 1e9}) {
    for (double r : {1e-3, 1.0, 10.0, 1e6}) {
      EXPECT_LT(auto_beta_min_iterations(h0, r), 1.0);
    }
  }
  const ConvexProgram p(LinearObjective(Vector{1}), affine(Vector{1}, -1e-3), Vector{0.0},
                        std::nullopt, 10.0);
  IgdConfig one;
  one.iterations = 1;
  EXPECT_NO_THROW(run_igd(p, one));
}

TEST(IgdTest, EqualityMustBeEliminatedFirst) {
  const ConvexProgram p(LinearObjective(Vector{1, 0}), affine(Vector{1, 0}, -1.0),
                        Vector{0.0, 0.0}, AffineEquality{Matrix{{0, 1}}, Vector{0}});
  EXPECT_EQ(code_of([&] { run_igd(p, fixed(0.1, 3)); }), ErrorCode::kInvalidInput);
}

TEST(IgdTest, StopPolicyKeepsFiniteRecords) {
  // The exponential constraint overflows once the iterate runs far outside.
  const ConstraintFunction h(
      [](const Vector& x, Vector* s) {
        if (s) *s = Vector{std::exp(x[0])};
        return std::exp(x[0]) - 2.0;
      },
      std::nullopt);
  const ConvexProgram p(LinearObjective(Vector{-1}), h, Vector{0.0});
  IgdConfig c = fixed(1e3, 50);
  EXPECT_EQ(code_of([&] { run_igd(p, c); }), ErrorCode::kNumerical);
  c.on_divergence = DivergencePolicy::kStop;
  const RunTrace t = run_igd(p, c);
  ASSERT_TRUE(t.report.diverged_at.has_value());
  EXPECT_LT(t.records.size(), 50u);
  for (const IterationRecord& r : t.records) EXPECT_TRUE(std::isfinite(r.objective));
  EXPECT_TRUE(t.final_iterate.all_finite());
}

TEST(SubgdTest, AlwaysFeasibleMatchesIgd) {
  const ConvexProgram p(LinearObjective(Vector{1, 0}), affine(Vector{1, 0}, -1e9),
                        Vector{0.0, 0.0});
  const RunTrace a = run_subgd(p, 0.1, 20, TraceLevel::kFull);
  const RunTrace b = run_igd(p, fixed(0.1, 20, TraceLevel::kFull));
  EXPECT_EQ(a.iterates, b.iterates);
}

TEST(SubgdTest, InfeasibleIterateStepsAlongNormal) {
  // Anchor near the boundary of the unit ball; one objective step leaves C.
  const GeneratedInstance inst = gen_norm(3, 1);
  const Vector c = inst.program.objective().c();
  const ConvexProgram p(LinearObjective(c), inst.program.constraint(), -0.95 * c);
  const RunTrace t = run_subgd(p, 0.2, 3, TraceLevel::kFull);
  const Vector& x1 = t.iterates[1];
  ASSERT_GT(norm2(x1), 1.0);
  EXPECT_FALSE(t.records[1].feasible);
  const Vector expected = x1 - (0.2 / norm2(x1)) * x1;
  EXPECT_LE(norm2(t.iterates[2] - expected), 1e-15);
}

TEST(SubgdTest, WorseThanIgdOnTwoDimensionalLinearProblem) {
  const GeneratedInstance inst = gen_lin(2, 2, 3);
  const RunTrace s = run_subgd(inst.program, 1e-3, 10'000);
  const RunTrace i = run_igd(inst.program, fixed(1e-3, 10'000));
  const auto best = [](const RunTrace& t) { return *best_so_far(t).back(); };
  EXPECT_GT(best(s), best(i));
}

TEST(PgdTest, InteriorRunIsGradientDescent) {
  const GeneratedInstance inst = gen_norm(4, 2);
  const ConvexProgram p(inst.program.objective(), inst.program.constraint(), Vector(4));
  const RunTrace t = run_pgd(p, *inst.euclidean_projector(), 0.01, 10, TraceLevel::kFull);
  const Vector expected = -0.1 * inst.program.objective().c();
  EXPECT_LE(norm2(t.final_iterate - expected), 1e-15);
}

TEST(PgdTest, ConvergesToMinusC) {
  const GeneratedInstance inst = gen_norm(10, 4);
  const RunTrace t = run_pgd(inst.program, *inst.euclidean_projector(), 0.05, 2000);
  const Vector& c = inst.program.objective().c();
  EXPECT_LE(norm2(t.final_iterate + c), 1e-6);
  EXPECT_NEAR(*best_so_far(t).back(), -1.0, 1e-9);
}

TEST(PgdTest, ProjectorIsRadial) {
  const GeneratedInstance inst = gen_norm(6, 5);
  const Vector& c = inst.program.objective().c();
  EXPECT_LE(norm2((*inst.euclidean_projector())(2.0 * c) - c), 1e-15);
}

TEST(AdamTest, ConstantFunctionKeepsStart) {
  const Vector start{0.3, -2.0};
  const Vector x = run_adam(
      [](const Vector& v, Vector* g) {
        if (g) *g = Vector(v.size());
        return 4.0;
      },
      start);
  EXPECT_EQ(x, start);
}

TEST(AdamTest, QuadraticDecreases) {
  const Vector x = run_adam(
      [](const Vector& v, Vector* g) {
        if (g) *g = 2.0 * v;
        return dot(v, v);
      },
      Vector{1.0});
  EXPECT_LT(std::abs(x[0]), 0.5);
}

TEST(AdamTest, NonFiniteGradientRaises) {
  EXPECT_EQ(code_of([] {
              run_adam(
                  [](const Vector&, Vector* g) {
                    if (g) *g = Vector{std::nan("")};
                    return 0.0;
                  },
                  Vector{1.0});
            }),
            ErrorCode::kNumerical);
}

TEST(AdamTest, SocAnchorRefinementIsStrictlyFeasible) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const GeneratedInstance inst = gen_soc(20, 10, seed);
    EXPECT_LT(inst.program.constraint().value(inst.program.anchor()), 0.0);
  }
}

TEST(NaiveUpdateTest, ZeroIterationsReturnsStart) {
  const GeneratedInstance demo = gen_demo_fig1();
  const RunTrace t = naive_projected_update(demo.program, *demo.demo_objective(), 0.1, 0);
  EXPECT_TRUE(t.records.empty());
  EXPECT_EQ(t.final_iterate, demo.program.anchor());
}

TEST(NaiveUpdateTest, FeasibleTrajectoryIsGradientDescent) {
  const ConvexProgram p(LinearObjective(Vector(2)), affine(Vector{1, 0}, -1e9), Vector{2.0, 1.0});
  const SmoothObjective sphere = [](const Vector& x, Vector* g) {
    if (g) *g = x;
    return 0.5 * dot(x, x);
  };
  const RunTrace t = naive_projected_update(p, sphere, 0.1, 10);
  Vector x{2.0, 1.0};
  for (int k = 0; k < 10; ++k) x = 0.9 * x;
  EXPECT_LE(norm2(t.final_iterate - x), 1e-14);
}

TEST(NaiveUpdateTest, StallsWhereCompositionConverges) {
  const DemoReport d = run_fig1_demo();
  EXPECT_LE(d.composite_gap, 1e-3 * d.initial_gap);
  EXPECT_GE(d.naive_gap, 10 * d.composite_gap);
  EXPECT_TRUE(d.identical_before_exit);
}

}  // namespace
}  // namespace igd
