#include "igd/verify.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "igd/error.h"
#include "igd/random.h"
#include "igd/report_io.h"

namespace igd {

VerifyOptions VerifyOptions::full() {
  VerifyOptions o;
  o.enforce_time_limits = true;
  return o;
}

VerifyOptions VerifyOptions::fast() {
  VerifyOptions o;
  o.feasibility_instances = 4;
  o.feasibility_points = 10'000;
  o.gradient_points = 100;
  o.sign_instances = 3;
  o.sign_iterations = 5000;
  o.bound_instances = 5;
  o.run_benchmark = false;
  o.oracle_instances = 1;
  o.oracle_iterations = 300'000;
  o.determinism_instances = 2;
  o.determinism_iterations = 1000;
  o.equality_trials = 5;
  return o;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::uint64_t check_seed(const VerifyOptions& o, int criterion, ProblemClass cls, int index) {
  return derive_seed(o.seed, static_cast<std::uint64_t>(criterion) * 16 + static_cast<int>(cls),
                     static_cast<std::uint64_t>(index));
}

GeneratedInstance check_instance(const VerifyOptions& o, int criterion, ProblemClass cls,
                                 int index) {
  ProblemSpec spec;
  spec.cls = cls;
  spec.seed = check_seed(o, criterion, cls, index);
  return generate(spec);
}

// Wraps a check body: times it, applies the time limit and turns exceptions
// into failures.
template <typename Body>
CheckResult run_check(int criterion, const char* name, double limit_seconds,
                      const VerifyOptions& options, Body&& body) {
  CheckResult r;
  r.criterion = criterion;
  r.name = name;
  const auto start = Clock::now();
  try {
    std::ostringstream detail;
    r.passed = body(detail);
    r.detail = detail.str();
    while (!r.detail.empty() && (r.detail.back() == ' ' || r.detail.back() == ';')) {
      r.detail.pop_back();
    }
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = seconds_since(start);
  if (options.enforce_time_limits && limit_seconds > 0.0 && r.seconds > limit_seconds) {
    r.passed = false;
    r.detail += " [over the " + std::to_string(static_cast<int>(limit_seconds)) + " s limit]";
  }
  return r;
}

double instance_scale(const ConvexProgram& p) { return 1.0 + norm2(p.anchor()); }

// x0 + r u with r log-uniform over [0.01, 10] times the instance scale.
Vector probe_point(const ConvexProgram& p, Rng& rng) {
  const Vector u = sample_unit_sphere(p.dimension(), rng);
  const double r = instance_scale(p) * std::exp(rng.uniform(std::log(1e-2), std::log(10.0)));
  Vector x = p.anchor();
  axpy(r, u, x);
  return x;
}

double max_abs_diff(const Vector& a, const Vector& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Infeasible point with h >= 0.1 at a smooth location, or nullopt.
std::optional<Vector> gradient_probe(const GeneratedInstance& inst, Rng& rng) {
  const ConvexProgram& p = inst.program;
  const ConstraintFunction& h = p.constraint();
  const Vector u = sample_unit_sphere(p.dimension(), rng);
  double r = 1e-3 * instance_scale(p);
  for (int i = 0; i < 80; ++i, r *= 2.0) {
    Vector x = p.anchor();
    axpy(r, u, x);
    if (h.value(x) >= 0.1) break;
  }
  Vector x = p.anchor();
  axpy(r * rng.uniform(1.0, 2.0), u, x);
  const double hx = h.value(x);
  if (!(hx >= 0.1) || !std::isfinite(hx) || !is_smooth_point(inst, x, 1e-3)) return std::nullopt;
  return x;
}

Vector finite_difference(const ConvexProgram& p, const Vector& x, double step) {
  Vector fd(x.size());
  Vector y = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    y[i] = x[i] + step;
    const double up = p.objective().value(project(p, y).point);
    y[i] = x[i] - step;
    const double down = p.objective().value(project(p, y).point);
    y[i] = x[i];
    fd[i] = (up - down) / (2.0 * step);
  }
  return fd;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

Vector flipped_mixing_gradient(const ConvexProgram& program, const Vector& x) {
  Vector s;
  const double hx = program.constraint().evaluate(x, s);
  const ProjectionResult p = project_with_value(program, x, hx);
  if (!p.was_projected) {
    throw Error(ErrorCode::kContractViolation, "flipped_mixing_gradient at a feasible point");
  }
  s *= -1.0;
  return mix_gradient(program, p, x, program.objective().c(), s);
}

CheckResult check_projection_feasibility(const VerifyOptions& o) {
  return run_check(1, "projection feasibility", 30.0, o, [&](std::ostream& detail) {
    bool ok = true;
    for (ProblemClass cls : kBenchmarkClasses) {
      double worst_h = -std::numeric_limits<double>::infinity();
      double worst_segment = 0.0;
      int idempotence_failures = 0;
      int projected = 0;
      const int per_instance = std::max(1, o.feasibility_points / o.feasibility_instances);
      for (int i = 0; i < o.feasibility_instances; ++i) {
        const GeneratedInstance inst = check_instance(o, 1, cls, i);
        const ConvexProgram& p = inst.program;
        Rng rng(derive_seed(inst.spec.seed, 1, 1));
        for (int j = 0; j < per_instance; ++j) {
          const Vector x = probe_point(p, rng);
          const ProjectionResult r = project(p, x);
          worst_h = std::max(worst_h, p.constraint().value(r.point));
          if (!r.was_projected) continue;
          ++projected;
          // point - x0 must equal eta (x - x0).
          Vector expect = p.anchor();
          for (std::size_t k = 0; k < x.size(); ++k) expect[k] += r.eta * (x[k] - expect[k]);
          worst_segment = std::max(worst_segment, max_abs_diff(expect, r.point));
          if (project(p, r.point).eta != 1.0) ++idempotence_failures;
        }
      }
      const bool cls_ok = worst_h <= 1e-12 && worst_segment <= 1e-12 && idempotence_failures == 0;
      ok = ok && cls_ok;
      detail << problem_class_name(cls) << ": max h=" << fmt(worst_h)
             << " segment=" << fmt(worst_segment) << " idem_fail=" << idempotence_failures
             << " projected=" << projected << "; ";
    }
    return ok;
  });
}

CheckResult check_composite_gradient(const VerifyOptions& o, const CompositeGradientFn& gradient) {
  return run_check(2, "composite gradient", 30.0, o, [&](std::ostream& detail) {
    bool ok = true;
    for (ProblemClass cls : kBenchmarkClasses) {
      double worst = 0.0;
      int tested = 0;
      int attempts = 0;
      int instance_index = 0;
      while (tested < o.gradient_points) {
        // Ten points per instance.
        const GeneratedInstance inst = check_instance(o, 2, cls, instance_index++);
        Rng rng(derive_seed(inst.spec.seed, 2, 2));
        for (int j = 0; j < 10 && tested < o.gradient_points; ++j) {
          if (++attempts > 100 * o.gradient_points) {
            throw Error(ErrorCode::kNumerical, "could not find smooth infeasible probe points");
          }
          const std::optional<Vector> x = gradient_probe(inst, rng);
          if (!x) {
            --j;
            continue;
          }
          const Vector an = gradient(inst.program, *x);
          const Vector fd = finite_difference(inst.program, *x, 1e-6);
          // Floor on the scale: central differences carry ~1e-10 (1 + |f|)
          // rounding, which swamps a vanishing gradient.
          const double f = inst.program.objective().value(project(inst.program, *x).point);
          const double denom = std::max({norm2(an), norm2(fd), 1e-6 * (1.0 + std::abs(f))});
          worst = std::max(worst, norm2(an - fd) / denom);
          ++tested;
        }
      }
      const bool cls_ok = worst <= 1e-4;
      ok = ok && cls_ok;
      detail << problem_class_name(cls) << ": max rel err=" << fmt(worst) << " over " << tested
             << "; ";
    }
    return ok;
  });
}

CheckResult check_sign_invariant(const VerifyOptions& o) {
  return run_check(3, "descent sign invariant", 120.0, o, [&](std::ostream& detail) {
    bool ok = true;
    for (ProblemClass cls : kBenchmarkClasses) {
      double worst = -std::numeric_limits<double>::infinity();
      int violations = 0;
      for (int i = 0; i < o.sign_instances; ++i) {
        const GeneratedInstance inst = check_instance(o, 3, cls, i);
        const ConvexProgram& p = inst.program;
        const double h_rescaled = *p.constraint().lipschitz() / std::abs(p.h_at_anchor());
        IgdConfig config;
        config.iterations = o.sign_iterations;
        config.beta = std::min(1e-3, 0.9 / (p.objective().lipschitz() * h_rescaled));
        config.trace = TraceLevel::kSummary;
        const RunTrace t = run_igd(p, config);
        worst = std::max(worst, t.report.max_sign_quantity);
        if (t.report.lemma1_violated) ++violations;
      }
      ok = ok && violations == 0;
      detail << problem_class_name(cls) << ": max c^T(g-x0)=" << fmt(worst)
             << " violations=" << violations << "; ";
    }
    return ok;
  });
}

CheckResult check_convergence_bound(const VerifyOptions& o) {
  return run_check(4, "convergence bound", 60.0, o, [&](std::ostream& detail) {
    bool ok = true;
    double worst_ratio = 0.0;
    for (int i = 0; i < o.bound_instances; ++i) {
      const GeneratedInstance inst = check_instance(o, 4, ProblemClass::kNorm, i);
      const ConvexProgram& p = inst.program;
      const double l = p.objective().lipschitz();
      const double h0 = *p.constraint().lipschitz() / std::abs(p.h_at_anchor());
      const double r = *p.domain_bound();
      const int k = o.bound_iterations;
      if (static_cast<double>(k) < auto_beta_min_iterations(h0, r)) {
        detail << "instance " << i << ": K below threshold; ";
        ok = false;
        continue;
      }
      IgdConfig config;
      config.iterations = k;
      config.trace = TraceLevel::kSummary;
      const RunTrace t = run_igd(p, config);
      const double gap = t.averaged_objective - *p.reference_optimum();
      const double bound = convergence_bound(l, h0, r, k);
      worst_ratio = std::max(worst_ratio, gap / bound);
      if (!(gap <= bound + 1e-9)) {
        ok = false;
        detail << "instance " << i << ": gap " << fmt(gap) << " > bound " << fmt(bound) << "; ";
      }
    }
    detail << "max gap/bound=" << fmt(worst_ratio) << " over " << o.bound_instances
           << " instances";
    return ok;
  });
}

CheckResult check_demo_contrast(const VerifyOptions& o) {
  return run_check(5, "projection derivative contrast", 5.0, o, [&](std::ostream& detail) {
    const DemoReport d = run_fig1_demo();
    const bool converged = d.composite_gap <= 1e-3 * d.initial_gap;
    const bool stalled = d.naive_gap >= 10.0 * d.composite_gap;
    const bool exited = d.first_exit.has_value();
    detail << "initial gap=" << fmt(d.initial_gap) << " composite gap=" << fmt(d.composite_gap)
           << " naive gap=" << fmt(d.naive_gap) << " first exit="
           << (exited ? std::to_string(*d.first_exit) : "none")
           << " identical before exit=" << (d.identical_before_exit ? "yes" : "no");
    return converged && stalled && exited && d.identical_before_exit;
  });
}

int first_tracking_violation(const Curve& igd, const Curve& pgd, double factor, double floor) {
  const std::size_t n = std::min(igd.points.size(), pgd.points.size());
  for (std::size_t k = 0; k < n; ++k) {
    const double ref = pgd.points[k].median;
    if (ref < floor) break;
    if (igd.points[k].median > factor * ref) return static_cast<int>(k);
  }
  return -1;
}

CheckResult check_benchmark_ordering(const VerifyOptions& o) {
  return run_check(6, "benchmark ordering", 900.0, o, [&](std::ostream& detail) {
    int wins = 0;
    int cells = 0;
    bool tracking = false;
    for (ProblemClass cls : kBenchmarkClasses) {
      SweepConfig config;
      config.problem.cls = cls;
      config.instances = o.benchmark_instances;
      config.iterations = o.benchmark_iterations;
      config.seed = o.seed;
      config.threads = o.threads;
      if (cls == ProblemClass::kNorm) config.algorithms.push_back(Algorithm::kPgd);
      const BenchmarkReport report = run_sweep(config);
      detail << problem_class_name(cls) << ":";
      for (double beta : config.betas) {
        const double igd = report.curve(Algorithm::kIgd, beta).terminal_median();
        const double sub = report.curve(Algorithm::kSubgd, beta).terminal_median();
        ++cells;
        const bool win = igd <= sub;
        if (win) ++wins;
        detail << " b=" << fmt(beta) << (win ? " W" : " L") << "(" << fmt(igd) << "/" << fmt(sub)
               << ")";
      }
      if (!report.dropped.empty()) detail << " dropped=" << report.dropped.size();
      if (cls == ProblemClass::kNorm) {
        const int v = first_tracking_violation(report.curve(Algorithm::kIgd, 1e-3),
                                               report.curve(Algorithm::kPgd, 1e-3), 2.0, 1e-2);
        tracking = v < 0;
        detail << " pgd-tracking@1e-3=" << (tracking ? "ok" : "broken at k=" + std::to_string(v));
      }
      detail << "; ";
    }
    detail << "IGD <= SubGD in " << wins << "/" << cells << " cells";
    return wins >= 15 && tracking;
  });
}

CheckResult check_oracle_consistency(const VerifyOptions& o) {
  return run_check(7, "oracle consistency", 0.0, o, [&](std::ostream& detail) {
    bool ok = true;
    OracleOptions oracle;
    oracle.iterations = o.oracle_iterations;
    for (int i = 0; i < o.oracle_instances; ++i) {
      const GeneratedInstance lin = check_instance(o, 7, ProblemClass::kLin, i);
      const double f_x0 = lin.program.objective().value(lin.program.anchor());
      const double v_lin = estimate_reference(lin, oracle).value;
      const bool lin_ok = std::abs(v_lin) <= 1e-5 * (1.0 + std::abs(f_x0));
      const GeneratedInstance norm = check_instance(o, 7, ProblemClass::kNorm, i);
      const double v_norm = estimate_reference(norm, oracle).value;
      const bool norm_ok = std::abs(v_norm + 1.0) <= 1e-5;
      ok = ok && lin_ok && norm_ok;
      detail << "lin " << i << ": " << fmt(v_lin) << (lin_ok ? "" : " FAIL") << "; norm " << i
             << ": " << fmt(v_norm + 1.0) << " off -1" << (norm_ok ? "" : " FAIL") << "; ";
    }
    const double w = lambert_w1();
    for (std::size_t d : {std::size_t{2}, std::size_t{5}}) {
      const GeneratedInstance exp = gen_exp(d, check_seed(o, 7, ProblemClass::kExp, 0));
      const Vector zero(d);
      Vector s;
      const double h0 = exp.program.constraint().evaluate(zero, s);
      double grad_max = 0.0;
      for (double v : s) grad_max = std::max(grad_max, std::abs(v));
      const double expect = static_cast<double>(d) * (0.5 * w * w + w - 1.0);
      const bool exp_ok = grad_max <= 1e-12 && std::abs(h0 - expect) <= 1e-10;
      ok = ok && exp_ok;
      detail << "exp d=" << d << ": |grad h(0)|=" << fmt(grad_max)
             << " h(0) err=" << fmt(std::abs(h0 - expect)) << (exp_ok ? "" : " FAIL") << "; ";
    }
    detail << "W(1)=" << fmt(w);
    return ok;
  });
}

CheckResult check_determinism(const VerifyOptions& o) {
  return run_check(8, "determinism", 0.0, o, [&](std::ostream& detail) {
    bool ok = true;
    for (ProblemClass cls : kBenchmarkClasses) {
      SweepConfig config;
      config.problem.cls = cls;
      config.instances = o.determinism_instances;
      config.iterations = o.determinism_iterations;
      config.oracle_iterations = o.determinism_oracle_iterations;
      config.seed = o.seed;
      std::string first;
      for (int threads : {1, 2}) {
        config.threads = threads;
        const BenchmarkReport report = run_sweep(config);
        std::ostringstream csv;
        write_curves_csv(report, csv);
        write_terminal_csv(report, csv);
        if (threads == 1) {
          first = csv.str();
        } else if (csv.str() != first) {
          ok = false;
          detail << problem_class_name(cls) << " differs; ";
        }
      }
    }
    detail << (ok ? "curves and terminal CSV identical across repeated sweeps (1 and 2 threads)"
                  : "byte mismatch");
    return ok;
  });
}

CheckResult check_equality_elimination(const VerifyOptions& o) {
  return run_check(9, "equality elimination", 0.0, o, [&](std::ostream& detail) {
    double worst_residual = 0.0;
    double worst_linearity = 0.0;
    bool objective_constant = true;
    for (int t = 0; t < o.equality_trials; ++t) {
      Rng rng(derive_seed(o.seed, 9, static_cast<std::uint64_t>(t)));
      const std::size_t n = 5;
      const std::size_t m = 1 + static_cast<std::size_t>(t % 3);
      const Matrix a = sample_normal_matrix(m, n, rng);
      const Vector x0 = sample_normal(n, rng);
      const Vector b = a * x0;
      const double radius = norm2(x0) + 1.0;
      ConstraintFunction ball(
          [radius](const Vector& x, Vector* s) {
            const double nx = norm2(x);
            if (s) *s = nx > 0.0 ? (1.0 / nx) * x : Vector(x.size());
            return nx - radius;
          },
          1.0);
      const Vector c = sample_unit_sphere(n, rng);
      const ConvexProgram program(LinearObjective(c), ball, x0, AffineEquality{a, b});
      const ReducedProgram reduced = eliminate_equality(program);
      const Vector c_tilde = transpose_times(reduced.basis, c);
      if (!(reduced.program.objective().c() == c_tilde)) objective_constant = false;

      IgdConfig config;
      config.iterations = o.equality_iterations;
      config.beta = 0.05;
      config.trace = TraceLevel::kFull;
      const RunTrace trace = run_igd(reduced.program, config);
      const double offset = dot(c, x0);
      for (std::size_t k = 0; k < trace.iterates.size(); ++k) {
        for (const Vector* z : {&trace.iterates[k], &trace.projected[k]}) {
          const Vector x = reduced.lift(*z);
          const Vector res = a * x - b;
          for (double r : res) worst_residual = std::max(worst_residual, std::abs(r));
        }
        // The recorded objective is c~^T g(z_k); lifted, it must equal c^T x - c^T x0.
        const double lifted = dot(c, reduced.lift(trace.projected[k])) - offset;
        worst_linearity = std::max(worst_linearity, std::abs(lifted - trace.records[k].objective));
        if (trace.records[k].objective != dot(c_tilde, trace.projected[k])) {
          objective_constant = false;
        }
      }
    }
    detail << "max |Ax-b|=" << fmt(worst_residual) << " max linearity err=" << fmt(worst_linearity)
           << " reduced c constant=" << (objective_constant ? "yes" : "no");
    return worst_residual <= 1e-10 && worst_linearity <= 1e-10 && objective_constant;
  });
}

CheckResult check_gradient_mutation(const VerifyOptions& o) {
  VerifyOptions small = o;
  small.gradient_points = std::min(o.gradient_points, 50);
  small.enforce_time_limits = false;
  const CheckResult mutant = check_composite_gradient(small, flipped_mixing_gradient);
  CheckResult r;
  r.criterion = 0;
  r.name = "gradient check catches a flipped mixing term";
  r.passed = !mutant.passed;
  r.detail = "mutant: " + mutant.detail;
  r.seconds = mutant.seconds;
  return r;
}

std::vector<CheckResult> run_verification(const VerifyOptions& options, const CheckLog& on_result) {
  std::vector<CheckResult> out;
  auto add = [&](CheckResult r) {
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  };
  add(check_projection_feasibility(options));
  add(check_composite_gradient(options));
  add(check_sign_invariant(options));
  add(check_convergence_bound(options));
  add(check_demo_contrast(options));
  if (options.run_benchmark) add(check_benchmark_ordering(options));
  add(check_oracle_consistency(options));
  add(check_determinism(options));
  add(check_equality_elimination(options));
  add(check_gradient_mutation(options));
  return out;
}

}  // namespace igd
