#ifndef IGD_OPTIMIZERS_H_
#define IGD_OPTIMIZERS_H_

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "igd/linalg.h"
#include "igd/problem.h"

namespace igd {

enum class Algorithm { kIgd, kSubgd, kPgd };

const char* algorithm_name(Algorithm algorithm);
// Accepts "igd", "subgd", "pgd" (case-insensitive). Throws kInvalidInput.
Algorithm parse_algorithm(const std::string& name);

enum class TraceLevel {
  kSummary,  // no per-iteration records; summary and StopReport only
  kScalars,  // one IterationRecord per iteration
  kFull,     // records plus x_k and g(x_k)
};

enum class StepSchedule {
  kConstant,     // fixed beta, the base schedule
  kInverseSqrt,  // beta_k = beta / sqrt(k + 1)
};

// Response to a non-finite constraint value or iterate.
enum class DivergencePolicy {
  kThrow,  // raise kNumerical
  kStop,   // end the run; only the finite records are kept
};

struct IgdConfig {
  int iterations = 0;
  // nullopt selects beta = R / (L (1 + H0 R) sqrt(K)) with H0 = H / |h(x0)|.
  std::optional<double> beta;
  std::optional<double> lipschitz_l;
  std::optional<double> lipschitz_h;
  std::optional<double> domain_r;
  TraceLevel trace = TraceLevel::kScalars;
  StepSchedule schedule = StepSchedule::kConstant;
  DivergencePolicy on_divergence = DivergencePolicy::kThrow;
};

struct IterationRecord {
  int k = 0;
  double eta = 1.0;
  double objective = 0.0;   // f(g(x_k)); f(x_k) for SubGD
  double constraint = 0.0;  // h(x_k), unscaled
  double alpha = 0.0;
  bool feasible = true;     // h(x_k) <= 0
};

struct StopReport {
  int iterations = 0;
  std::optional<double> best_feasible_objective;
  bool lemma1_violated = false;
  std::optional<int> first_violation;
  // max_k c^T (g(x_k) - x0); only meaningful for IGD.
  double max_sign_quantity = 0.0;
  // Set under DivergencePolicy::kStop: the iteration at which h or x_{k+1}
  // was non-finite.
  std::optional<int> diverged_at;
};

struct RunTrace {
  Algorithm algorithm = Algorithm::kIgd;
  std::vector<IterationRecord> records;
  std::vector<Vector> iterates;   // x_k, kFull only
  std::vector<Vector> projected;  // g(x_k), kFull only
  Vector final_iterate;           // x_K
  Vector averaged_point;          // (1/K) sum of the projected points
  double averaged_objective = 0.0;
  double beta = 0.0;              // base step size actually used
  StopReport report;
};

// Descent-sign monitor tolerance: c^T (g(x_k) - x0) above this is a violation.
inline constexpr double kDescentSignTolerance = 1e-9;

// Minimum K for the auto-beta convergence bound: R^2 H0^2 / (1 + H0 R)^2.
double auto_beta_min_iterations(double h0_lipschitz, double r);
// Convergence bound on the averaged point: R L (1 + H0 R) / sqrt(K).
double convergence_bound(double l, double h0_lipschitz, double r, int iterations);
// beta = R / (L (1 + H0 R) sqrt(K)).
double auto_beta_step(double l, double h0_lipschitz, double r, int iterations);

// Interpolation-projection gradient descent (IGD). h is rescaled internally
// so that h(x0) = -1; the step is beta inside C and (1 + h(x_k)) beta
// outside, along c or the composite gradient respectively. The descent-sign
// quantity is monitored at every iteration and reported, not enforced.
// Throws kConfiguration on missing constants for auto beta or K below the
// auto-beta threshold, kInvalidInput for programs that still carry an
// equality part, kNumerical on non-finite iterates unless the policy is
// kStop.
RunTrace run_igd(const ConvexProgram& program, const IgdConfig& config);

// Switching subgradient method: -beta c inside C, -beta s(x) outside.
RunTrace run_subgd(const ConvexProgram& program, double beta, int iterations,
                   TraceLevel trace = TraceLevel::kScalars,
                   DivergencePolicy on_divergence = DivergencePolicy::kThrow);

using EuclideanProjector = std::function<Vector(const Vector&)>;

// x_{k+1} = P(x_k - beta c) with a caller-supplied orthogonal projector.
RunTrace run_pgd(const ConvexProgram& program, const EuclideanProjector& projector,
                 double beta, int iterations, TraceLevel trace = TraceLevel::kScalars);

// Objective with a (sub)gradient oracle, same calling convention as
// ConstraintFunction::Oracle.
using SmoothObjective = std::function<double(const Vector& x, Vector* gradient)>;

struct AdamOptions {
  int steps = 100;
  double step_size = 1e-2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Standard bias-corrected Adam; returns the final iterate.
Vector run_adam(const SmoothObjective& objective, const Vector& x_init,
                const AdamOptions& options = {});

// x_{k+1} = g(x_k - beta grad f(x_k)) with the interpolation projection g.
// Starts from `start` (default: the anchor). Records g(x_k).
RunTrace naive_projected_update(const ConvexProgram& program, const SmoothObjective& objective,
                                double beta, int iterations,
                                std::optional<Vector> start = std::nullopt,
                                TraceLevel trace = TraceLevel::kFull);

// The IGD step rule applied to a differentiable, possibly non-linear
// objective: the composite gradient mixes grad f(g(x_k)) with s(x_k).
RunTrace composite_descent(const ConvexProgram& program, const SmoothObjective& objective,
                           double beta, int iterations,
                           std::optional<Vector> start = std::nullopt,
                           TraceLevel trace = TraceLevel::kFull);

}  // namespace igd

#endif  // IGD_OPTIMIZERS_H_
