#ifndef IGD_PROBLEM_H_
#define IGD_PROBLEM_H_

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "igd/linalg.h"

namespace igd {

// h(x) values in (0, kBoundaryClamp) are treated as feasible: the
// interpolation weight would otherwise come from h(x0) - h(x) with almost
// total cancellation.
inline constexpr double kBoundaryClamp = 1e-14;

// f(x) = c^T x with ||c|| <= lipschitz.
class LinearObjective {
 public:
  LinearObjective() = default;
  // Lipschitz bound defaults to ||c||.
  explicit LinearObjective(Vector c, std::optional<double> lipschitz = std::nullopt);

  const Vector& c() const { return c_; }
  double lipschitz() const { return lipschitz_; }
  double value(const Vector& x) const { return dot(c_, x); }

 private:
  Vector c_;
  double lipschitz_ = 0.0;
};

enum class ConstraintKind { kSmooth, kMaxAggregate, kCustom };

// Convex domain-defining function h with a subgradient oracle; the feasible
// set is {x : h(x) <= 0}. Convexity and the subgradient inequality are the
// caller's contract and are probed in tests only.
class ConstraintFunction {
 public:
  // Returns h(x). When `subgradient` is non-null it is resized and filled
  // with an element of the subdifferential at x.
  using Oracle = std::function<double(const Vector& x, Vector* subgradient)>;

  ConstraintFunction() = default;
  ConstraintFunction(Oracle oracle, std::optional<double> lipschitz,
                     ConstraintKind kind = ConstraintKind::kSmooth);

  double value(const Vector& x) const { return oracle_(x, nullptr); }
  Vector subgradient(const Vector& x) const;
  double evaluate(const Vector& x, Vector& subgradient) const {
    return oracle_(x, &subgradient);
  }

  std::optional<double> lipschitz() const { return lipschitz_; }
  ConstraintKind kind() const { return kind_; }

  // Non-empty only for max-aggregates.
  const std::vector<ConstraintFunction>& components() const;
  // For a max-aggregate, the maximising component at x (lowest index on
  // ties); 0 otherwise.
  std::size_t active_component(const Vector& x) const;

  // h scaled by a positive factor, with the Lipschitz bound scaled alongside.
  ConstraintFunction scaled(double factor) const;

 private:
  friend ConstraintFunction make_max_aggregate(std::vector<ConstraintFunction>);

  Oracle oracle_;
  std::optional<double> lipschitz_;
  ConstraintKind kind_ = ConstraintKind::kCustom;
  std::shared_ptr<const std::vector<ConstraintFunction>> components_;
};

// h(x) = max_i h_i(x). Subgradient of the lowest-index maximiser; Lipschitz
// bound is the max of the components' (unknown if any component's is).
ConstraintFunction make_max_aggregate(std::vector<ConstraintFunction> components);

struct AffineEquality {
  Matrix a;
  Vector b;
};

// min c^T x  s.t.  h(x) <= 0  [, Ax = b], with a strictly feasible anchor.
// Immutable after construction.
class ConvexProgram {
 public:
  // Throws kInvalidAnchor unless h(anchor) < 0 and the anchor satisfies the
  // equality (when present) to 1e-10; kInvalidInput on dimension mismatches
  // or non-finite data.
  ConvexProgram(LinearObjective objective, ConstraintFunction constraint,
                Vector anchor, std::optional<AffineEquality> equality = std::nullopt,
                std::optional<double> domain_bound = std::nullopt,
                std::optional<double> reference_optimum = std::nullopt);

  std::size_t dimension() const { return anchor_.size(); }
  const LinearObjective& objective() const { return objective_; }
  const ConstraintFunction& constraint() const { return constraint_; }
  const Vector& anchor() const { return anchor_; }
  double h_at_anchor() const { return h_at_anchor_; }
  const std::optional<AffineEquality>& equality() const { return equality_; }
  std::optional<double> domain_bound() const { return domain_bound_; }
  std::optional<double> reference_optimum() const { return reference_optimum_; }

  ConvexProgram with_reference_optimum(double value) const;
  ConvexProgram with_constraint(ConstraintFunction constraint) const;

 private:
  LinearObjective objective_;
  ConstraintFunction constraint_;
  Vector anchor_;
  double h_at_anchor_ = -1.0;
  std::optional<AffineEquality> equality_;
  std::optional<double> domain_bound_;
  std::optional<double> reference_optimum_;
};

struct ProjectionResult {
  Vector point;
  double eta = 1.0;
  bool was_projected = false;
  double constraint_value = 0.0;  // h at the input point
};

// eta_x = h(x0) / (h(x0) - h(x)) when x is infeasible, 1 otherwise.
double interpolation_weight(const ConvexProgram& program, const Vector& x);

// g(x) = x if feasible, else eta x + (1 - eta) x0.
ProjectionResult project(const ConvexProgram& program, const Vector& x);
// Same as project() with h(x) already evaluated by the caller.
ProjectionResult project_with_value(const ConvexProgram& program, const Vector& x,
                                    double h_at_x);

// Gradient of f o g at an infeasible x:
//   eta (grad_f + (grad_f^T (g(x) - x0) / h(x0)) s(x)),
// using g(x) - x0 = eta (x - x0). `grad_f` is the objective gradient at g(x),
// which for a linear objective is c.
Vector mix_gradient(const ConvexProgram& program, const ProjectionResult& projection,
                    const Vector& x, const Vector& grad_f, const Vector& subgradient);

// Composite gradient of the program's linear objective. Throws
// kContractViolation when x is feasible; the caller uses c there.
Vector composite_gradient(const ConvexProgram& program, const Vector& x);

// Program in z-coordinates after substituting x = F z + x0, where the columns
// of F are an orthonormal basis of ker(A).
struct ReducedProgram {
  ConvexProgram program;
  Matrix basis;   // F
  Vector offset;  // x0

  Vector lift(const Vector& z) const;
};

// Throws kInvalidInput when the program has no equality part.
ReducedProgram eliminate_equality(const ConvexProgram& program);

}  // namespace igd

#endif  // IGD_PROBLEM_H_
