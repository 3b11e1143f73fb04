#ifndef IGD_VERIFY_H_
#define IGD_VERIFY_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "igd/harness.h"
#include "igd/problem.h"

namespace igd {

// Self-check suites shared by `igd verify` and the acceptance test binary.

struct CheckResult {
  int criterion = 0;  // 1..9; 0 for auxiliary checks
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  std::uint64_t seed = 20240611;
  int threads = 1;
  bool enforce_time_limits = false;

  int feasibility_instances = 20;   // per class
  int feasibility_points = 100'000;  // per class, spread over the instances
  int gradient_points = 1000;        // per class
  int sign_instances = 20;
  int sign_iterations = 10'000;
  int bound_instances = 20;
  int bound_iterations = 10'000;
  bool run_benchmark = true;
  int benchmark_instances = 20;
  int benchmark_iterations = 10'000;
  int oracle_instances = 3;  // per analytic class
  int oracle_iterations = 1'000'000;
  int determinism_instances = 3;
  int determinism_iterations = 2000;
  int determinism_oracle_iterations = 20'000;
  int equality_trials = 20;
  int equality_iterations = 1000;

  // Acceptance sizes.
  static VerifyOptions full();
  // Subsampled sizes that finish well under a minute; skips the benchmark.
  static VerifyOptions fast();
};

using CompositeGradientFn = std::function<Vector(const ConvexProgram&, const Vector&)>;

// composite_gradient with the sign of the mixing term flipped; exists so the
// gradient check can be shown to catch that error.
Vector flipped_mixing_gradient(const ConvexProgram& program, const Vector& x);

CheckResult check_projection_feasibility(const VerifyOptions& options);
CheckResult check_composite_gradient(const VerifyOptions& options,
                                     const CompositeGradientFn& gradient = composite_gradient);
CheckResult check_sign_invariant(const VerifyOptions& options);
CheckResult check_convergence_bound(const VerifyOptions& options);
CheckResult check_demo_contrast(const VerifyOptions& options);
CheckResult check_benchmark_ordering(const VerifyOptions& options);
CheckResult check_oracle_consistency(const VerifyOptions& options);
CheckResult check_determinism(const VerifyOptions& options);
CheckResult check_equality_elimination(const VerifyOptions& options);
// The gradient check run against flipped_mixing_gradient must fail.
CheckResult check_gradient_mutation(const VerifyOptions& options);

// IGD median within `factor` of PGD's wherever PGD's median is at least
// `floor`. Returns the first offending iteration, or -1.
int first_tracking_violation(const Curve& igd, const Curve& pgd, double factor, double floor);

using CheckLog = std::function<void(const CheckResult&)>;

// Criteria 1..9 in order (6 only when options.run_benchmark), then the
// mutation check.
std::vector<CheckResult> run_verification(const VerifyOptions& options,
                                          const CheckLog& on_result = {});

}  // namespace igd

#endif  // IGD_VERIFY_H_
