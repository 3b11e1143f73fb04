#include "igd/problem.h"

#include <cmath>
#include <limits>
#include <string>

#include "igd/error.h"

namespace igd {

LinearObjective::LinearObjective(Vector c, std::optional<double> lipschitz)
    : c_(std::move(c)) {
  if (!c_.all_finite()) throw Error(ErrorCode::kInvalidInput, "objective is not finite");
  const double n = norm2(c_);
  lipschitz_ = lipschitz.value_or(n);
  if (n > lipschitz_ * (1.0 + 1e-12)) {
    throw Error(ErrorCode::kInvalidInput, "||c|| exceeds the stated Lipschitz bound");
  }
}

ConstraintFunction::ConstraintFunction(Oracle oracle, std::optional<double> lipschitz,
                                       ConstraintKind kind)
    : oracle_(std::move(oracle)), lipschitz_(lipschitz), kind_(kind) {
  if (!oracle_) throw Error(ErrorCode::kInvalidInput, "constraint oracle is empty");
  if (lipschitz_ && !(*lipschitz_ > 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "Lipschitz bound must be positive");
  }
}

Vector ConstraintFunction::subgradient(const Vector& x) const {
  Vector s;
  oracle_(x, &s);
  return s;
}

const std::vector<ConstraintFunction>& ConstraintFunction::components() const {
  static const std::vector<ConstraintFunction> kEmpty;
  return components_ ? *components_ : kEmpty;
}

std::size_t ConstraintFunction::active_component(const Vector& x) const {
  if (!components_) return 0;
  std::size_t best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < components_->size(); ++i) {
    const double v = (*components_)[i].value(x);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  return best;
}

ConstraintFunction ConstraintFunction::scaled(double factor) const {
  if (!(factor > 0.0)) throw Error(ErrorCode::kInvalidInput, "scale must be positive");
  Oracle inner = oracle_;
  ConstraintFunction out(
      [inner, factor](const Vector& x, Vector* s) {
        const double v = inner(x, s);
        if (s) *s *= factor;
        return factor * v;
      },
      lipschitz_ ? std::optional<double>(*lipschitz_ * factor) : std::nullopt, kind_);
  if (components_) {
    auto comps = std::make_shared<std::vector<ConstraintFunction>>();
    for (const auto& c : *components_) comps->push_back(c.scaled(factor));
    out.components_ = std::move(comps);
  }
  return out;
}

ConstraintFunction make_max_aggregate(std::vector<ConstraintFunction> components) {
  if (components.empty()) {
    throw Error(ErrorCode::kInvalidInput, "max-aggregate needs at least one component");
  }
  std::optional<double> lipschitz = 0.0;
  for (const auto& c : components) {
    if (!c.lipschitz()) {
      lipschitz.reset();
      break;
    }
    lipschitz = std::max(*lipschitz, *c.lipschitz());
  }
  auto shared = std::make_shared<const std::vector<ConstraintFunction>>(std::move(components));
  ConstraintFunction out(
      [shared](const Vector& x, Vector* s) {
        std::size_t best = 0;
        double best_value = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < shared->size(); ++i) {
          const double v = (*shared)[i].value(x);
          if (v > best_value) {
            best_value = v;
            best = i;
          }
        }
        if (s) (*shared)[best].evaluate(x, *s);
        return best_value;
      },
      lipschitz, ConstraintKind::kMaxAggregate);
  out.components_ = std::move(shared);
  return out;
}

ConvexProgram::ConvexProgram(LinearObjective objective, ConstraintFunction constraint,
                             Vector anchor, std::optional<AffineEquality> equality,
                             std::optional<double> domain_bound,
                             std::optional<double> reference_optimum)
    : objective_(std::move(objective)),
      constraint_(std::move(constraint)),
      anchor_(std::move(anchor)),
      equality_(std::move(equality)),
      domain_bound_(domain_bound),
      reference_optimum_(reference_optimum) {
  if (objective_.c().size() != anchor_.size()) {
    throw Error(ErrorCode::kInvalidInput, "objective and anchor dimensions differ");
  }
  if (!anchor_.all_finite()) throw Error(ErrorCode::kInvalidInput, "anchor is not finite");
  h_at_anchor_ = constraint_.value(anchor_);
  if (!(h_at_anchor_ < 0.0)) {
    throw Error(ErrorCode::kInvalidAnchor,
                "h(x0) = " + std::to_string(h_at_anchor_) + " is not strictly negative");
  }
  if (equality_) {
    if (equality_->a.cols() != anchor_.size() || equality_->a.rows() != equality_->b.size()) {
      throw Error(ErrorCode::kInvalidInput, "equality data has the wrong shape");
    }
    const Vector residual = equality_->a * anchor_ - equality_->b;
    double worst = 0.0;
    for (double r : residual) worst = std::max(worst, std::abs(r));
    if (worst > 1e-10) {
      throw Error(ErrorCode::kInvalidAnchor, "anchor violates Ax = b by " + std::to_string(worst));
    }
  }
  if (domain_bound_ && !(*domain_bound_ >= 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "domain bound must be non-negative");
  }
}

ConvexProgram ConvexProgram::with_reference_optimum(double value) const {
  ConvexProgram copy = *this;
  copy.reference_optimum_ = value;
  return copy;
}

ConvexProgram ConvexProgram::with_constraint(ConstraintFunction constraint) const {
  return ConvexProgram(objective_, std::move(constraint), anchor_, equality_, domain_bound_,
                       reference_optimum_);
}

namespace {

void require_point(const ConvexProgram& program, const Vector& x) {
  if (x.size() != program.dimension()) {
    throw Error(ErrorCode::kInvalidInput, "point has the wrong dimension");
  }
  if (!x.all_finite()) throw Error(ErrorCode::kInvalidInput, "point is not finite");
}

bool treated_feasible(double h) { return h <= 0.0 || h < kBoundaryClamp; }

}  // namespace

double interpolation_weight(const ConvexProgram& program, const Vector& x) {
  require_point(program, x);
  const double hx = program.constraint().value(x);
  if (treated_feasible(hx)) return 1.0;
  const double h0 = program.h_at_anchor();
  return h0 / (h0 - hx);
}

ProjectionResult project_with_value(const ConvexProgram& program, const Vector& x,
                                    double h_at_x) {
  ProjectionResult out;
  out.constraint_value = h_at_x;
  if (treated_feasible(h_at_x)) {
    out.point = x;
    return out;
  }
  const double h0 = program.h_at_anchor();
  out.eta = h0 / (h0 - h_at_x);
  out.was_projected = true;
  // x0 + eta (x - x0)
  const Vector& x0 = program.anchor();
  out.point = x0;
  for (std::size_t i = 0; i < x0.size(); ++i) out.point[i] += out.eta * (x[i] - x0[i]);
  return out;
}

ProjectionResult project(const ConvexProgram& program, const Vector& x) {
  require_point(program, x);
  return project_with_value(program, x, program.constraint().value(x));
}

Vector mix_gradient(const ConvexProgram& program, const ProjectionResult& projection,
                    const Vector& x, const Vector& grad_f, const Vector& subgradient) {
  const Vector& x0 = program.anchor();
  const double eta = projection.eta;
  double inner = 0.0;  // grad_f^T (g(x) - x0)
  for (std::size_t i = 0; i < x0.size(); ++i) inner += grad_f[i] * (x[i] - x0[i]);
  inner *= eta;
  const double mixing = inner / program.h_at_anchor();
  Vector out = grad_f;
  axpy(mixing, subgradient, out);
  out *= eta;
  return out;
}

Vector composite_gradient(const ConvexProgram& program, const Vector& x) {
  require_point(program, x);
  Vector s;
  const double hx = program.constraint().evaluate(x, s);
  const ProjectionResult p = project_with_value(program, x, hx);
  if (!p.was_projected) {
    throw Error(ErrorCode::kContractViolation,
                "composite_gradient called at a feasible point; use c there");
  }
  return mix_gradient(program, p, x, program.objective().c(), s);
}

Vector ReducedProgram::lift(const Vector& z) const {
  Vector x = basis * z;
  x += offset;
  return x;
}

ReducedProgram eliminate_equality(const ConvexProgram& program) {
  if (!program.equality()) {
    throw Error(ErrorCode::kInvalidInput, "program has no equality constraint to eliminate");
  }
  const AffineEquality& eq = *program.equality();
  Matrix basis = null_space_basis(eq.a);
  const Vector offset = program.anchor();

  Vector reduced_c = transpose_times(basis, program.objective().c());
  ConstraintFunction h = program.constraint();
  ConstraintFunction reduced_h(
      [h, basis, offset](const Vector& z, Vector* s) {
        Vector x = basis * z;
        x += offset;
        if (!s) return h.value(x);
        Vector full;
        const double v = h.evaluate(x, full);
        *s = transpose_times(basis, full);
        return v;
      },
      h.lipschitz(), ConstraintKind::kCustom);

  // f(F z + x0) = c~^T z + c^T x0, so the reduced optimum drops the constant.
  std::optional<double> reduced_reference;
  if (program.reference_optimum()) {
    reduced_reference = *program.reference_optimum() - program.objective().value(offset);
  }
  ConvexProgram reduced(LinearObjective(std::move(reduced_c), program.objective().lipschitz()),
                        std::move(reduced_h), Vector(basis.cols()), std::nullopt,
                        program.domain_bound(), reduced_reference);
  return ReducedProgram{std::move(reduced), std::move(basis), offset};
}

}  // namespace igd
