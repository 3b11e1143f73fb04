#include "igd/problems.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <memory>

#include "igd/error.h"
#include "igd/random.h"

namespace igd {

const char* problem_class_name(ProblemClass cls) {
  switch (cls) {
    case ProblemClass::kLin: return "lin";
    case ProblemClass::kSdp: return "sdp";
    case ProblemClass::kSoc: return "soc";
    case ProblemClass::kNorm: return "norm";
    case ProblemClass::kExp: return "exp";
    case ProblemClass::kDemoFig1: return "demo";
  }
  return "unknown";
}

ProblemClass parse_problem_class(const std::string& name) {
  std::string lower = name;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  for (ProblemClass cls : {ProblemClass::kLin, ProblemClass::kSdp, ProblemClass::kSoc,
                           ProblemClass::kNorm, ProblemClass::kExp, ProblemClass::kDemoFig1}) {
    if (lower == problem_class_name(cls)) return cls;
  }
  throw Error(ErrorCode::kInvalidInput, "unknown problem class '" + name + "'");
}

const char* provenance_name(ReferenceProvenance p) {
  switch (p) {
    case ReferenceProvenance::kUnknown: return "unknown";
    case ReferenceProvenance::kAnalytic: return "analytic";
    case ReferenceProvenance::kDerivedOracle: return "derived-oracle";
  }
  return "unknown";
}

ProblemSpec with_defaults(ProblemSpec spec) {
  auto fill = [](std::size_t& field, std::size_t value) {
    if (field == 0) field = value;
  };
  switch (spec.cls) {
    case ProblemClass::kLin:
      fill(spec.dimension, 10);
      fill(spec.components, 10);
      spec.matrix_size = 0;
      break;
    case ProblemClass::kSdp:
      fill(spec.dimension, 10);
      fill(spec.matrix_size, 10);
      spec.components = 1;
      break;
    case ProblemClass::kSoc:
      fill(spec.dimension, 20);
      fill(spec.components, 10);
      spec.matrix_size = 0;
      break;
    case ProblemClass::kNorm:
      fill(spec.dimension, 100);
      spec.components = 1;
      spec.matrix_size = 0;
      break;
    case ProblemClass::kExp:
      fill(spec.dimension, 2);
      spec.components = 1;
      spec.matrix_size = 0;
      break;
    case ProblemClass::kDemoFig1:
      spec.dimension = 2;
      spec.components = 1;
      spec.matrix_size = 0;
      spec.seed = 0;
      break;
  }
  return spec;
}

double lambert_w1() {
  double w = 0.5;
  for (int i = 0; i < 100; ++i) {
    const double ew = std::exp(w);
    const double step = (w * ew - 1.0) / (ew * (w + 1.0));
    w -= step;
    if (std::abs(step) < 1e-16) break;
  }
  return w;
}

namespace {

double spectral_norm_sym(const Matrix& a) {
  const SymEigResult e = sym_eig(a);
  return std::max(std::abs(e.eigenvalues[0]), std::abs(e.eigenvalues[e.eigenvalues.size() - 1]));
}

double spectral_norm(const Matrix& a) {
  return std::sqrt(std::max(0.0, spectral_norm_sym(a.transpose() * a)));
}

ConstraintFunction linear_component(Vector a) {
  const double lip = std::max(norm2(a), std::numeric_limits<double>::min());
  return ConstraintFunction(
      [a = std::move(a)](const Vector& x, Vector* s) {
        if (s) *s = a;
        return dot(a, x);
      },
      lip, ConstraintKind::kSmooth);
}

Matrix slack_matrix(const SdpData& data, const Vector& x) {
  Matrix s = data.c_mat;
  s *= -1.0;
  const std::size_t n = s.rows();
  for (std::size_t i = 0; i < data.a.size(); ++i) {
    const double xi = x[i];
    const auto& vals = data.a[i].values();
    for (std::size_t k = 0; k < n * n; ++k) s(k / n, k % n) += xi * vals[k];
  }
  return s;
}

ConstraintFunction sdp_constraint(std::shared_ptr<const SdpData> data) {
  double sum_sq = 0.0;
  for (const Matrix& ai : data->a) {
    const double n = spectral_norm_sym(ai);
    sum_sq += n * n;
  }
  return ConstraintFunction(
      [data](const Vector& x, Vector* s) {
        const SymEigResult e = sym_eig(slack_matrix(*data, x));
        if (s) {
          // d(-lambda_min)/dx_i = -v^T A_i v for the first returned eigenvector.
          const Vector v = e.eigenvectors.column(0);
          *s = Vector(data->a.size());
          for (std::size_t i = 0; i < data->a.size(); ++i) {
            (*s)[i] = -quadratic_form(data->a[i], v);
          }
        }
        return -e.eigenvalues[0];
      },
      std::sqrt(sum_sq), ConstraintKind::kCustom);
}

ConstraintFunction soc_component(Matrix a, Vector b, Vector z, double d) {
  const double lip = spectral_norm(a) + norm2(z);
  return ConstraintFunction(
      [a = std::move(a), b = std::move(b), z = std::move(z), d](const Vector& x, Vector* s) {
        Vector r = a * x;
        r += b;
        const double rn = norm2(r);
        if (s) {
          if (rn > 0.0) {
            *s = transpose_times(a, (1.0 / rn) * r);
          } else {
            *s = Vector(x.size());
          }
          *s -= z;
        }
        return rn - dot(z, x) - d;
      },
      lip, ConstraintKind::kSmooth);
}

ConstraintFunction norm_constraint() {
  return ConstraintFunction(
      [](const Vector& x, Vector* s) {
        const double n = norm2(x);
        if (s) *s = n > 0.0 ? (1.0 / n) * x : Vector(x.size());
        return n - 1.0;
      },
      1.0, ConstraintKind::kSmooth);
}

ConstraintFunction exp_constraint(Vector b) {
  const double d = static_cast<double>(b.size());
  double min_b = std::numeric_limits<double>::infinity();
  for (double v : b) min_b = std::min(min_b, v);
  const double rho = kExpLipschitzRadius;
  // ||x - b|| + ||exp(x - b)|| on ||x|| <= rho.
  const double lip = rho + norm2(b) + std::sqrt(d) * std::exp(rho - min_b);
  return ConstraintFunction(
      [b = std::move(b), d](const Vector& x, Vector* s) {
        double quad = 0.0;
        double expsum = 0.0;
        if (s) *s = Vector(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
          const double diff = x[i] - b[i];
          const double e = std::exp(diff);
          quad += diff * diff;
          expsum += e;
          if (s) (*s)[i] = diff + e;
        }
        return 0.5 * quad + expsum - d;
      },
      lip, ConstraintKind::kSmooth);
}

ConstraintFunction half_space(Vector a, double offset) {
  const double lip = norm2(a);
  return ConstraintFunction(
      [a = std::move(a), offset](const Vector& x, Vector* s) {
        if (s) *s = a;
        return dot(a, x) - offset;
      },
      lip, ConstraintKind::kSmooth);
}

// Q from a QR factorisation of a normal matrix: Haar-like orthogonal Q.
Matrix random_orthogonal(std::size_t n, Rng& rng) {
  return pivoted_qr(sample_normal_matrix(n, n, rng)).q;
}

Matrix random_positive_definite(std::size_t n, Rng& rng) {
  const Matrix q = random_orthogonal(n, rng);
  Matrix scaled = q;
  for (std::size_t j = 0; j < n; ++j) {
    const double lambda = rng.uniform(0.5, 1.5);
    for (std::size_t i = 0; i < n; ++i) scaled(i, j) *= lambda;
  }
  Matrix out = scaled * q.transpose();
  // Symmetrise away rounding so sym_eig's symmetry check is exact.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (out(i, j) + out(j, i));
      out(i, j) = out(j, i) = avg;
    }
  return out;
}

template <typename Feasible>
Vector sample_ball_until(std::size_t d, Rng& rng, Feasible&& feasible) {
  while (true) {
    Vector x = sample_unit_ball(d, rng);
    if (feasible(x)) return x;
  }
}

}  // namespace

std::optional<EuclideanProjector> GeneratedInstance::euclidean_projector() const {
  if (spec.cls != ProblemClass::kNorm) return std::nullopt;
  return EuclideanProjector([](const Vector& x) {
    const double n = norm2(x);
    return n > 1.0 ? (1.0 / n) * x : x;
  });
}

std::optional<SmoothObjective> GeneratedInstance::demo_objective() const {
  if (spec.cls != ProblemClass::kDemoFig1) return std::nullopt;
  return SmoothObjective([](const Vector& x, Vector* grad) {
    if (grad) *grad = x;
    return 0.5 * dot(x, x);
  });
}

GeneratedInstance assemble_instance(const ProblemSpec& spec, InstanceData data, Vector anchor,
                                    ReferenceOptimum reference, int attempts) {
  std::optional<ConvexProgram> program;
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, LinData>) {
          std::vector<ConstraintFunction> comps;
          for (std::size_t i = 0; i < d.a.rows(); ++i) comps.push_back(linear_component(d.a.row_vector(i)));
          // x* = 0, so ||x0 - x*|| = ||x0||.
          const double r = norm2(anchor);
          program.emplace(LinearObjective(d.c), make_max_aggregate(std::move(comps)), anchor,
                          std::nullopt, r);
        } else if constexpr (std::is_same_v<T, SdpData>) {
          program.emplace(LinearObjective(d.c), sdp_constraint(std::make_shared<const SdpData>(d)),
                          anchor);
        } else if constexpr (std::is_same_v<T, SocData>) {
          std::vector<ConstraintFunction> comps;
          for (std::size_t i = 0; i < d.a.size(); ++i) {
            comps.push_back(soc_component(d.a[i], d.b[i], d.z[i], d.d[i]));
          }
          program.emplace(LinearObjective(d.c), make_max_aggregate(std::move(comps)), anchor);
        } else if constexpr (std::is_same_v<T, NormData>) {
          // ||x0 - x*|| <= ||x0|| + ||x*|| = ||x0|| + 1.
          const double r = norm2(anchor) + 1.0;
          program.emplace(LinearObjective(d.c, 1.0), norm_constraint(), anchor, std::nullopt, r);
        } else if constexpr (std::is_same_v<T, ExpData>) {
          // h <= 0 forces ||x - b||^2 < 2d, so C has diameter below 2 sqrt(2d).
          const double r = 2.0 * std::sqrt(2.0 * static_cast<double>(d.b.size()));
          program.emplace(LinearObjective(d.c), exp_constraint(d.b), anchor, std::nullopt, r);
        } else {
          program.emplace(LinearObjective(Vector(d.a.size())), half_space(d.a, d.offset), anchor);
        }
      },
      data);
  if (reference.value) *program = program->with_reference_optimum(*reference.value);
  return GeneratedInstance{spec, std::move(data), std::move(*program), reference, attempts};
}

GeneratedInstance gen_lin(std::size_t d, std::size_t m, std::uint64_t seed) {
  if (d < 1 || m < 1) throw Error(ErrorCode::kInvalidInput, "lin needs d >= 1 and M >= 1");
  Rng rng(seed);
  LinData data;
  data.c = sample_unit_sphere(d, rng);
  data.a = Matrix(m, d);
  for (std::size_t j = 0; j < d; ++j) data.a(0, j) = -data.c[j];
  for (std::size_t i = 1; i < m; ++i) {
    Vector ai = sample_unit_sphere(d, rng);
    // Keep x = c feasible.
    if (dot(ai, data.c) > 0.0) ai *= -1.0;
    for (std::size_t j = 0; j < d; ++j) data.a(i, j) = ai[j];
  }
  Vector anchor = sample_ball_until(d, rng, [&](const Vector& x) {
    double h = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) h = std::max(h, dot(data.a.row_vector(i), x));
    return h < 0.0;
  });
  ProblemSpec spec{ProblemClass::kLin, d, m, 0, seed};
  return assemble_instance(spec, std::move(data), std::move(anchor),
                           {0.0, ReferenceProvenance::kAnalytic, false});
}

GeneratedInstance gen_sdp(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (n < 2 || m < 1) throw Error(ErrorCode::kInvalidInput, "sdp needs n >= 2 and m >= 1");
  Rng rng(seed);
  SdpData data;
  for (std::size_t i = 0; i < m; ++i) {
    const Matrix b = sample_normal_matrix(n, n, rng);
    Matrix a = b;
    a += b.transpose();
    a *= 0.5;
    data.a.push_back(std::move(a));
  }
  data.x_hat = sample_normal(m, rng);
  data.d_mat = random_positive_definite(n, rng);
  data.z_mat = random_positive_definite(n, rng);

  data.c_mat = Matrix(n, n);
  for (std::size_t i = 0; i < m; ++i) {
    Matrix term = data.a[i];
    term *= data.x_hat[i];
    data.c_mat += term;
  }
  data.c_mat = data.c_mat - data.d_mat;

  // c_i = tr(A_i Z) makes Z dual feasible; normalised to a unit objective.
  Vector c(m);
  for (std::size_t i = 0; i < m; ++i) {
    double tr = 0.0;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t k = 0; k < n; ++k) tr += data.a[i](r, k) * data.z_mat(k, r);
    c[i] = tr;
  }
  data.c = (1.0 / norm2(c)) * c;
  Vector anchor = data.x_hat;
  ProblemSpec spec{ProblemClass::kSdp, m, 1, n, seed};
  return assemble_instance(spec, std::move(data), std::move(anchor), {});
}

GeneratedInstance gen_soc(std::size_t d, std::size_t m, std::uint64_t seed) {
  if (d < 1 || m < 1) throw Error(ErrorCode::kInvalidInput, "soc needs d >= 1 and M >= 1");
  for (int attempt = 0; attempt < kSocMaxAttempts; ++attempt) {
    Rng rng(attempt == 0 ? seed : derive_seed(seed, 0x50c, static_cast<std::uint64_t>(attempt)));
    SocData data;
    data.c = sample_unit_sphere(d, rng);
    data.x0_raw = sample_unit_sphere(d, rng);
    data.d = Vector(m);
    for (std::size_t i = 0; i < m; ++i) {
      data.a.push_back(sample_normal_matrix(d, d, rng));
      data.b.push_back(sample_normal(d, rng));
      data.z.push_back(sample_normal(d, rng));
      Vector r = data.a[i] * data.x0_raw;
      r += data.b[i];
      data.d[i] = norm2(r) - dot(data.z[i], data.x0_raw);
    }

    std::vector<ConstraintFunction> comps;
    for (std::size_t i = 0; i < m; ++i) {
      comps.push_back(soc_component(data.a[i], data.b[i], data.z[i], data.d[i]));
    }
    const ConstraintFunction h = make_max_aggregate(std::move(comps));
    const Vector refined = run_adam(
        [&h](const Vector& x, Vector* g) { return g ? h.evaluate(x, *g) : h.value(x); },
        data.x0_raw);
    if (!(h.value(refined) < 0.0)) continue;

    ProblemSpec spec{ProblemClass::kSoc, d, m, 0, seed};
    return assemble_instance(spec, std::move(data), refined, {}, attempt + 1);
  }
  throw Error(ErrorCode::kGenerationFailure,
              "soc: anchor refinement failed " + std::to_string(kSocMaxAttempts) + " times");
}

GeneratedInstance gen_norm(std::size_t d, std::uint64_t seed) {
  if (d < 1) throw Error(ErrorCode::kInvalidInput, "norm needs d >= 1");
  Rng rng(seed);
  NormData data{sample_unit_sphere(d, rng)};
  Vector anchor = sample_ball_until(d, rng, [](const Vector& x) { return norm2(x) < 1.0; });
  ProblemSpec spec{ProblemClass::kNorm, d, 1, 0, seed};
  return assemble_instance(spec, std::move(data), std::move(anchor),
                           {-1.0, ReferenceProvenance::kAnalytic, false});
}

GeneratedInstance gen_exp(std::size_t d, std::uint64_t seed) {
  if (d < 1) throw Error(ErrorCode::kInvalidInput, "exp needs d >= 1");
  Rng rng(seed);
  ExpData data;
  data.b = Vector(d, lambert_w1());
  data.c = sample_unit_sphere(d, rng);
  const ConstraintFunction h = exp_constraint(data.b);
  Vector anchor = sample_ball_until(d, rng, [&h](const Vector& x) { return h.value(x) < 0.0; });
  ProblemSpec spec{ProblemClass::kExp, d, 1, 0, seed};
  return assemble_instance(spec, std::move(data), std::move(anchor), {});
}

GeneratedInstance gen_demo_fig1() {
  // h(x) = x1 + x2 + 1: the origin (unconstrained optimum) is infeasible and
  // the anchor is off the boundary normal, so the straight GD path from it
  // meets the boundary away from the constrained optimum (-1/2, -1/2).
  DemoData data;
  data.a = Vector{1.0, 1.0};
  data.offset = -1.0;
  data.constrained_optimum = (data.offset / dot(data.a, data.a)) * data.a;
  data.optimum_value = 0.5 * dot(data.constrained_optimum, data.constrained_optimum);
  const double f_star = data.optimum_value;
  ProblemSpec spec = with_defaults({ProblemClass::kDemoFig1, 2, 1, 0, 0});
  return assemble_instance(spec, std::move(data), Vector{-3.0, -0.5},
                           {f_star, ReferenceProvenance::kAnalytic, false});
}

GeneratedInstance generate(ProblemSpec spec) {
  spec = with_defaults(spec);
  switch (spec.cls) {
    case ProblemClass::kLin: return gen_lin(spec.dimension, spec.components, spec.seed);
    case ProblemClass::kSdp: return gen_sdp(spec.matrix_size, spec.dimension, spec.seed);
    case ProblemClass::kSoc: return gen_soc(spec.dimension, spec.components, spec.seed);
    case ProblemClass::kNorm: return gen_norm(spec.dimension, spec.seed);
    case ProblemClass::kExp: return gen_exp(spec.dimension, spec.seed);
    case ProblemClass::kDemoFig1: return gen_demo_fig1();
  }
  throw Error(ErrorCode::kInvalidInput, "unknown problem class");
}

bool is_smooth_point(const GeneratedInstance& instance, const Vector& x, double margin) {
  const ConstraintFunction& h = instance.program.constraint();
  switch (instance.spec.cls) {
    case ProblemClass::kLin:
    case ProblemClass::kSoc: {
      double first = -std::numeric_limits<double>::infinity();
      double second = first;
      for (const ConstraintFunction& comp : h.components()) {
        const double v = comp.value(x);
        if (v > first) {
          second = first;
          first = v;
        } else if (v > second) {
          second = v;
        }
      }
      return first - second >= margin;
    }
    case ProblemClass::kSdp: {
      const auto& data = std::get<SdpData>(instance.data);
      const SymEigResult e = sym_eig(slack_matrix(data, x));
      return e.eigenvalues[1] - e.eigenvalues[0] >= margin;
    }
    case ProblemClass::kNorm:
      return norm2(x) >= margin;
    case ProblemClass::kExp:
    case ProblemClass::kDemoFig1:
      return true;
  }
  return true;
}

namespace {

// A second strictly feasible anchor drawn around the first, with at least
// half of its constraint margin.
Vector secondary_anchor(const GeneratedInstance& instance) {
  const ConvexProgram& program = instance.program;
  Rng rng(derive_seed(instance.spec.seed, 0x0a11c0de,
                      static_cast<std::uint64_t>(instance.spec.cls)));
  const double target = 0.5 * program.h_at_anchor();
  for (int attempt = 0; attempt < 64; ++attempt) {
    const Vector u = sample_unit_ball(program.dimension(), rng);
    double radius = 1.0;
    for (int halving = 0; halving < 40; ++halving, radius *= 0.5) {
      Vector candidate = program.anchor();
      axpy(radius, u, candidate);
      if (program.constraint().value(candidate) <= target) return candidate;
    }
  }
  throw Error(ErrorCode::kGenerationFailure, "could not draw a second anchor");
}

double best_feasible_from(const ConvexProgram& program, const OracleOptions& options) {
  IgdConfig config;
  config.iterations = options.iterations;
  config.beta = options.beta0;
  config.schedule = StepSchedule::kInverseSqrt;
  config.trace = TraceLevel::kSummary;
  const RunTrace trace = run_igd(program, config);
  return *trace.report.best_feasible_objective;
}

}  // namespace

int default_oracle_iterations(ProblemClass cls) {
  return cls == ProblemClass::kSdp ? 200'000 : 1'000'000;
}

OracleResult estimate_reference(const GeneratedInstance& instance, const OracleOptions& options) {
  if (instance.spec.cls == ProblemClass::kDemoFig1) {
    throw Error(ErrorCode::kInvalidInput, "the demo instance has an analytic optimum only");
  }
  const ConvexProgram& program = instance.program;
  const ConvexProgram other(program.objective(), program.constraint(), secondary_anchor(instance));

  OracleResult out;
  out.primary = best_feasible_from(program, options);
  out.secondary = best_feasible_from(other, options);
  out.value = std::min(out.primary, out.secondary);
  out.relative_gap = std::abs(out.primary - out.secondary) / (1.0 + std::abs(out.value));
  out.low_confidence = out.relative_gap > 1e-5;
  if (out.relative_gap > 1e-3) {
    throw Error(ErrorCode::kOracleUnreliable,
                "anchors disagree: " + std::to_string(out.primary) + " vs " +
                    std::to_string(out.secondary));
  }
  return out;
}

double reference_oracle(GeneratedInstance& instance, const OracleOptions& options) {
  if (instance.reference.value) return *instance.reference.value;
  const OracleResult r = estimate_reference(instance, options);
  instance.reference = {r.value, ReferenceProvenance::kDerivedOracle, r.low_confidence};
  instance.program = instance.program.with_reference_optimum(r.value);
  return r.value;
}

}  // namespace igd
