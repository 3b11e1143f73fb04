#include "igd/optimizers.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>

#include "igd/error.h"

namespace igd {

const char* algorithm_name(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kIgd: return "igd";
    case Algorithm::kSubgd: return "subgd";
    case Algorithm::kPgd: return "pgd";
  }
  return "unknown";
}

Algorithm parse_algorithm(const std::string& name) {
  std::string lower = name;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  if (lower == "igd") return Algorithm::kIgd;
  if (lower == "subgd") return Algorithm::kSubgd;
  if (lower == "pgd") return Algorithm::kPgd;
  throw Error(ErrorCode::kInvalidInput, "unknown algorithm '" + name + "'");
}

double auto_beta_min_iterations(double h0_lipschitz, double r) {
  const double num = r * h0_lipschitz;
  const double den = 1.0 + h0_lipschitz * r;
  return (num * num) / (den * den);
}

double convergence_bound(double l, double h0_lipschitz, double r, int iterations) {
  return r * l * (1.0 + h0_lipschitz * r) / std::sqrt(static_cast<double>(iterations));
}

double auto_beta_step(double l, double h0_lipschitz, double r, int iterations) {
  return r / (l * (1.0 + h0_lipschitz * r) * std::sqrt(static_cast<double>(iterations)));
}

namespace {

void require_iterations(int iterations) {
  if (iterations < 1) {
    throw Error(ErrorCode::kConfiguration, "iteration count must be >= 1");
  }
}

void require_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw Error(ErrorCode::kConfiguration, "step size must be positive and finite");
  }
}

void require_no_equality(const ConvexProgram& program) {
  if (program.equality()) {
    throw Error(ErrorCode::kInvalidInput,
                "program carries Ax = b; run on eliminate_equality(program) instead");
  }
}

void require_finite(const Vector& x, int k, const char* who) {
  if (!x.all_finite()) {
    throw Error(ErrorCode::kNumerical,
                std::string(who) + ": non-finite iterate at k = " + std::to_string(k));
  }
}

// True when the run must stop; throws under kThrow.
bool diverged(bool finite, int k, const char* who, const char* what, DivergencePolicy policy,
              StopReport& report) {
  if (finite) return false;
  if (policy == DivergencePolicy::kThrow) {
    throw Error(ErrorCode::kNumerical,
                std::string(who) + ": non-finite " + what + " at k = " + std::to_string(k));
  }
  report.diverged_at = k;
  return true;
}

// Accumulates records and the running average shared by all optimizers.
class TraceBuilder {
 public:
  TraceBuilder(Algorithm algorithm, TraceLevel level, int iterations, std::size_t dim,
               double beta)
      : level_(level), sum_(dim) {
    trace_.algorithm = algorithm;
    trace_.beta = beta;
    if (level_ != TraceLevel::kSummary) trace_.records.reserve(iterations);
    if (level_ == TraceLevel::kFull) {
      trace_.iterates.reserve(iterations);
      trace_.projected.reserve(iterations);
    }
  }

  void add(const IterationRecord& record, const Vector& x, const Vector& gx) {
    sum_ += gx;
    ++count_;
    if (record.feasible || trace_.algorithm != Algorithm::kSubgd) {
      auto& best = trace_.report.best_feasible_objective;
      if (!best || record.objective < *best) best = record.objective;
    }
    if (level_ != TraceLevel::kSummary) trace_.records.push_back(record);
    if (level_ == TraceLevel::kFull) {
      trace_.iterates.push_back(x);
      trace_.projected.push_back(gx);
    }
  }

  void note_sign(double quantity, int k) {
    StopReport& r = trace_.report;
    r.max_sign_quantity = std::max(r.max_sign_quantity, quantity);
    if (quantity > kDescentSignTolerance && !r.lemma1_violated) {
      r.lemma1_violated = true;
      r.first_violation = k;
    }
  }

  StopReport& report() { return trace_.report; }

  RunTrace finish(Vector final_iterate, const std::function<double(const Vector&)>& f) {
    trace_.final_iterate = std::move(final_iterate);
    trace_.averaged_point = count_ == 0 ? trace_.final_iterate
                                        : (1.0 / static_cast<double>(count_)) * sum_;
    trace_.averaged_objective = f(trace_.averaged_point);
    trace_.report.iterations = count_;
    return std::move(trace_);
  }

 private:
  TraceLevel level_;
  Vector sum_;
  int count_ = 0;
  RunTrace trace_;
};

// Gradient descent on f o g with the IGD step rule. `objective` evaluates f
// and writes grad f at the requested point.
template <typename ObjectiveFn>
RunTrace composite_loop(const ConvexProgram& program, ObjectiveFn&& objective, double beta,
                        int iterations, StepSchedule schedule, Vector x, TraceLevel level,
                        bool monitor_sign,
                        DivergencePolicy policy = DivergencePolicy::kThrow) {
  const Vector& x0 = program.anchor();
  const double inv_scale = 1.0 / std::abs(program.h_at_anchor());
  TraceBuilder builder(Algorithm::kIgd, level, iterations, x.size(), beta);
  Vector s;
  Vector grad;
  Vector held;  // x_k, kept under kStop so the final iterate stays finite
  for (int k = 0; k < iterations; ++k) {
    const double hx = program.constraint().evaluate(x, s);
    if (diverged(std::isfinite(hx), k, "igd", "h", policy, builder.report())) break;
    if (policy == DivergencePolicy::kStop) held = x;
    const ProjectionResult p = project_with_value(program, x, hx);
    const double fg = objective(p.point, &grad);
    const double beta_k = schedule == StepSchedule::kConstant
                              ? beta
                              : beta / std::sqrt(static_cast<double>(k) + 1.0);

    if (monitor_sign) {
      double q = 0.0;
      for (std::size_t i = 0; i < x0.size(); ++i) q += grad[i] * (p.point[i] - x0[i]);
      builder.note_sign(q, k);
    }

    IterationRecord rec;
    rec.k = k;
    rec.eta = p.eta;
    rec.objective = fg;
    rec.constraint = hx;
    rec.feasible = !p.was_projected;
    if (!p.was_projected) {
      rec.alpha = beta_k;
      builder.add(rec, x, p.point);
      axpy(-rec.alpha, grad, x);
    } else {
      // |h(x0) - h(x_k)| after rescaling h(x0) to -1.
      rec.alpha = (1.0 + hx * inv_scale) * beta_k;
      builder.add(rec, x, p.point);
      const Vector step = mix_gradient(program, p, x, grad, s);
      axpy(-rec.alpha, step, x);
    }
    if (diverged(x.all_finite(), k, "igd", "iterate", policy, builder.report())) {
      x = std::move(held);
      break;
    }
  }
  return builder.finish(std::move(x), [&](const Vector& v) { return objective(v, nullptr); });
}

}  // namespace

RunTrace run_igd(const ConvexProgram& program, const IgdConfig& config) {
  require_no_equality(program);
  require_iterations(config.iterations);

  double beta = 0.0;
  if (config.beta) {
    beta = *config.beta;
    require_beta(beta);
  } else {
    const std::optional<double> l =
        config.lipschitz_l ? config.lipschitz_l
                           : std::optional<double>(program.objective().lipschitz());
    const std::optional<double> h =
        config.lipschitz_h ? config.lipschitz_h : program.constraint().lipschitz();
    const std::optional<double> r = config.domain_r ? config.domain_r : program.domain_bound();
    if (!l || !h || !r || !(*l > 0.0) || !(*h > 0.0) || !(*r > 0.0)) {
      throw Error(ErrorCode::kConfiguration,
                  "automatic beta needs positive L, H and R (missing or non-positive)");
    }
    const double h0 = *h / std::abs(program.h_at_anchor());
    const double threshold = auto_beta_min_iterations(h0, *r);
    if (static_cast<double>(config.iterations) < threshold) {
      throw Error(ErrorCode::kConfiguration,
                  "K = " + std::to_string(config.iterations) +
                      " is below the auto-beta iteration threshold " + std::to_string(threshold));
    }
    beta = auto_beta_step(*l, h0, *r, config.iterations);
  }

  const Vector& c = program.objective().c();
  auto linear = [&c](const Vector& x, Vector* grad) {
    if (grad) *grad = c;
    return dot(c, x);
  };
  return composite_loop(program, linear, beta, config.iterations, config.schedule,
                        program.anchor(), config.trace, /*monitor_sign=*/true,
                        config.on_divergence);
}

RunTrace composite_descent(const ConvexProgram& program, const SmoothObjective& objective,
                           double beta, int iterations, std::optional<Vector> start,
                           TraceLevel trace) {
  require_no_equality(program);
  require_beta(beta);
  if (iterations < 0) throw Error(ErrorCode::kConfiguration, "negative iteration count");
  Vector x = start ? *start : program.anchor();
  if (iterations == 0) {
    TraceBuilder builder(Algorithm::kIgd, trace, 0, x.size(), beta);
    return builder.finish(x, [&](const Vector& v) { return objective(v, nullptr); });
  }
  return composite_loop(program, objective, beta, iterations, StepSchedule::kConstant,
                        std::move(x), trace, /*monitor_sign=*/false);
}

RunTrace run_subgd(const ConvexProgram& program, double beta, int iterations,
                   TraceLevel trace, DivergencePolicy on_divergence) {
  require_no_equality(program);
  require_iterations(iterations);
  require_beta(beta);
  const Vector& c = program.objective().c();
  TraceBuilder builder(Algorithm::kSubgd, trace, iterations, program.dimension(), beta);
  Vector x = program.anchor();
  Vector s;
  Vector held;
  for (int k = 0; k < iterations; ++k) {
    const double hx = program.constraint().evaluate(x, s);
    if (diverged(std::isfinite(hx), k, "subgd", "h", on_divergence, builder.report())) break;
    if (on_divergence == DivergencePolicy::kStop) held = x;
    IterationRecord rec;
    rec.k = k;
    rec.objective = dot(c, x);
    rec.constraint = hx;
    rec.feasible = hx <= 0.0;
    rec.alpha = beta;
    builder.add(rec, x, x);
    axpy(-beta, rec.feasible ? c : s, x);
    if (diverged(x.all_finite(), k, "subgd", "iterate", on_divergence, builder.report())) {
      x = std::move(held);
      break;
    }
  }
  return builder.finish(std::move(x), [&c](const Vector& v) { return dot(c, v); });
}

RunTrace run_pgd(const ConvexProgram& program, const EuclideanProjector& projector,
                 double beta, int iterations, TraceLevel trace) {
  require_no_equality(program);
  require_iterations(iterations);
  require_beta(beta);
  if (!projector) throw Error(ErrorCode::kInvalidInput, "pgd needs a Euclidean projector");
  const Vector& c = program.objective().c();
  TraceBuilder builder(Algorithm::kPgd, trace, iterations, program.dimension(), beta);
  Vector x = projector(program.anchor());
  for (int k = 0; k < iterations; ++k) {
    IterationRecord rec;
    rec.k = k;
    rec.objective = dot(c, x);
    rec.constraint = program.constraint().value(x);
    rec.feasible = true;
    rec.alpha = beta;
    builder.add(rec, x, x);
    Vector moved = x;
    axpy(-beta, c, moved);
    x = projector(moved);
    require_finite(x, k, "pgd");
  }
  return builder.finish(std::move(x), [&c](const Vector& v) { return dot(c, v); });
}

Vector run_adam(const SmoothObjective& objective, const Vector& x_init,
                const AdamOptions& options) {
  if (!x_init.all_finite()) throw Error(ErrorCode::kInvalidInput, "adam: non-finite start");
  Vector x = x_init;
  Vector m(x.size());
  Vector v(x.size());
  Vector grad;
  double beta1_t = 1.0;
  double beta2_t = 1.0;
  for (int t = 1; t <= options.steps; ++t) {
    objective(x, &grad);
    if (grad.size() != x.size() || !grad.all_finite()) {
      throw Error(ErrorCode::kNumerical, "adam: non-finite gradient at step " + std::to_string(t));
    }
    beta1_t *= options.beta1;
    beta2_t *= options.beta2;
    for (std::size_t i = 0; i < x.size(); ++i) {
      m[i] = options.beta1 * m[i] + (1.0 - options.beta1) * grad[i];
      v[i] = options.beta2 * v[i] + (1.0 - options.beta2) * grad[i] * grad[i];
      const double m_hat = m[i] / (1.0 - beta1_t);
      const double v_hat = v[i] / (1.0 - beta2_t);
      x[i] -= options.step_size * m_hat / (std::sqrt(v_hat) + options.epsilon);
    }
  }
  return x;
}

RunTrace naive_projected_update(const ConvexProgram& program, const SmoothObjective& objective,
                                double beta, int iterations, std::optional<Vector> start,
                                TraceLevel trace) {
  require_no_equality(program);
  require_beta(beta);
  if (iterations < 0) throw Error(ErrorCode::kConfiguration, "negative iteration count");
  TraceBuilder builder(Algorithm::kIgd, trace, iterations, program.dimension(), beta);
  Vector x = start ? *start : program.anchor();
  Vector grad;
  for (int k = 0; k < iterations; ++k) {
    const ProjectionResult p = project(program, x);
    IterationRecord rec;
    rec.k = k;
    rec.eta = p.eta;
    rec.objective = objective(p.point, &grad);
    rec.constraint = p.constraint_value;
    rec.feasible = !p.was_projected;
    rec.alpha = beta;
    builder.add(rec, x, p.point);
    // Gradient step from the projected point, then project again next round.
    x = p.point;
    axpy(-beta, grad, x);
    require_finite(x, k, "naive update");
  }
  return builder.finish(std::move(x), [&](const Vector& v) { return objective(v, nullptr); });
}

}  // namespace igd
