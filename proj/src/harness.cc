#include "igd/harness.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "igd/error.h"
#include "igd/instance_io.h"
#include "igd/random.h"

namespace igd {

Series best_so_far(const RunTrace& trace, std::size_t length) {
  if (trace.records.empty() && trace.report.iterations > 0) {
    throw Error(ErrorCode::kInvalidInput, "best_so_far needs per-iteration records");
  }
  Series out;
  out.reserve(trace.records.size());
  std::optional<double> best;
  const bool feasible_only = trace.algorithm == Algorithm::kSubgd;
  for (const IterationRecord& r : trace.records) {
    if (!feasible_only || r.feasible) {
      if (!best || r.objective < *best) best = r.objective;
    }
    out.push_back(best);
  }
  while (out.size() < length) out.push_back(best);
  return out;
}

double normalize(double value, double f_star, double f_x0) {
  if (!(f_x0 > f_star)) {
    throw Error(ErrorCode::kDegenerateInstance, "f(x0) does not exceed f*; cannot normalize");
  }
  return (value - f_star) / (f_x0 - f_star);
}

Series normalize(const Series& series, double f_star, double f_x0) {
  if (!(f_x0 > f_star)) {
    throw Error(ErrorCode::kDegenerateInstance, "f(x0) does not exceed f*; cannot normalize");
  }
  Series out;
  out.reserve(series.size());
  for (const auto& v : series) {
    out.push_back(v ? std::optional<double>(normalize(*v, f_star, f_x0)) : std::nullopt);
  }
  return out;
}

double quantile(std::vector<double> sample, double p) {
  if (sample.empty()) throw Error(ErrorCode::kInvalidInput, "quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::kInvalidInput, "quantile p outside [0,1]");
  std::sort(sample.begin(), sample.end());
  const double h = p * static_cast<double>(sample.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sample.size() - 1);
  return sample[lo] + (h - static_cast<double>(lo)) * (sample[hi] - sample[lo]);
}

void validate(const SweepConfig& config) {
  if (config.instances < 1) throw Error(ErrorCode::kConfiguration, "instances must be >= 1");
  if (config.iterations < 1) throw Error(ErrorCode::kConfiguration, "iterations must be >= 1");
  if (config.threads < 1) throw Error(ErrorCode::kConfiguration, "threads must be >= 1");
  if (config.betas.empty()) throw Error(ErrorCode::kConfiguration, "no step sizes given");
  if (config.algorithms.empty()) throw Error(ErrorCode::kConfiguration, "no algorithms given");
  for (double b : config.betas) {
    if (!(b > 0.0) || !std::isfinite(b)) {
      throw Error(ErrorCode::kConfiguration, "step sizes must be positive and finite");
    }
  }
  if (config.problem.cls == ProblemClass::kDemoFig1) {
    throw Error(ErrorCode::kConfiguration, "the demo instance is not a sweep class");
  }
  for (Algorithm a : config.algorithms) {
    if (a == Algorithm::kPgd && config.problem.cls != ProblemClass::kNorm) {
      throw Error(ErrorCode::kConfiguration, "pgd is only available on the norm class");
    }
  }
  if (config.oracle_iterations && *config.oracle_iterations < 1) {
    throw Error(ErrorCode::kConfiguration, "oracle iterations must be >= 1");
  }
}

double Curve::terminal_median() const {
  return points.empty() ? 1.0 : points.back().median;
}

const Curve& BenchmarkReport::curve(Algorithm algorithm, double beta) const {
  for (const Curve& c : curves) {
    if (c.algorithm == algorithm && c.beta == beta) return c;
  }
  throw Error(ErrorCode::kInvalidInput, "no curve for this algorithm and step size");
}

std::uint64_t instance_seed(std::uint64_t master, ProblemClass cls, std::size_t index, int sub) {
  const std::uint64_t stream = derive_seed(master, static_cast<std::uint64_t>(cls), index);
  return sub == 0 ? stream : derive_seed(stream, 0xde9e, static_cast<std::uint64_t>(sub));
}

namespace {

constexpr int kMaxDegenerateResamples = 64;

struct InstanceWork {
  std::optional<GeneratedInstance> instance;
  InstanceSummary summary;
  std::vector<Series> normalized;  // one per (algorithm, beta), algorithm-major
  std::vector<TerminalValue> terminal;
  std::string drop_reason;
  std::exception_ptr error;
};

RunTrace run_one(const GeneratedInstance& instance, Algorithm algorithm, double beta, int k) {
  switch (algorithm) {
    case Algorithm::kIgd: {
      IgdConfig config;
      config.iterations = k;
      config.beta = beta;
      config.trace = TraceLevel::kScalars;
      config.on_divergence = DivergencePolicy::kStop;
      return run_igd(instance.program, config);
    }
    case Algorithm::kSubgd:
      return run_subgd(instance.program, beta, k, TraceLevel::kScalars, DivergencePolicy::kStop);
    case Algorithm::kPgd: {
      const auto projector = instance.euclidean_projector();
      if (!projector) throw Error(ErrorCode::kConfiguration, "pgd needs the norm class");
      return run_pgd(instance.program, *projector, beta, k, TraceLevel::kScalars);
    }
  }
  throw Error(ErrorCode::kInvalidInput, "unknown algorithm");
}

void process_instance(const SweepConfig& config, std::size_t index, InstanceWork& work,
                      const SweepLog& log) {
  const ProblemClass cls = config.problem.cls;
  OracleOptions oracle;
  oracle.iterations = config.oracle_iterations.value_or(default_oracle_iterations(cls));
  oracle.beta0 = config.oracle_beta0;

  for (int sub = 0;; ++sub) {
    if (sub > kMaxDegenerateResamples) {
      throw Error(ErrorCode::kDegenerateInstance,
                  "instance " + std::to_string(index) + ": every resample was degenerate");
    }
    ProblemSpec spec = config.problem;
    spec.seed = instance_seed(config.seed, cls, index, sub);
    GeneratedInstance inst = [&] {
      try {
        return generate(spec);
      } catch (const Error& e) {
        throw Error(e.code(), "instance " + std::to_string(index) + ": " + e.what());
      }
    }();

    double gap = 0.0;
    if (!inst.reference.value) {
      try {
        const OracleResult r = estimate_reference(inst, oracle);
        inst.reference = {r.value, ReferenceProvenance::kDerivedOracle, r.low_confidence};
        inst.program = inst.program.with_reference_optimum(r.value);
        gap = r.relative_gap;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kOracleUnreliable) throw;
        work.drop_reason = e.what();
        if (log) log("instance " + std::to_string(index) + " dropped: " + e.what());
        return;
      }
    }
    const double f_star = *inst.reference.value;
    const double f_x0 = inst.program.objective().value(inst.program.anchor());
    if (f_x0 <= f_star + config.degenerate_margin) {
      if (log) log("instance " + std::to_string(index) + " degenerate, resampling");
      continue;
    }

    work.summary.index = index;
    work.summary.seed = spec.seed;
    work.summary.degenerate_resamples = sub;
    work.summary.f_star = f_star;
    work.summary.f_x0 = f_x0;
    work.summary.reference = inst.reference;
    work.summary.oracle_relative_gap = gap;
    work.summary.hash = instance_hash(inst);

    for (Algorithm algorithm : config.algorithms) {
      for (double beta : config.betas) {
        const RunTrace trace = run_one(inst, algorithm, beta, config.iterations);
        const Series raw = best_so_far(trace, static_cast<std::size_t>(config.iterations));
        Series norm = normalize(raw, f_star, f_x0);
        TerminalValue t;
        t.instance = index;
        t.algorithm = algorithm;
        t.beta = beta;
        t.best_raw = raw.back();
        t.best_normalized = norm.back();
        t.averaged_objective = trace.averaged_objective;
        t.lemma1_violated = trace.report.lemma1_violated;
        t.diverged_at = trace.report.diverged_at;
        if (t.diverged_at && log) {
          log("instance " + std::to_string(index) + " " + algorithm_name(algorithm) +
              " beta=" + format_real(beta) + " overflowed at k=" + std::to_string(*t.diverged_at));
        }
        work.terminal.push_back(t);
        work.normalized.push_back(std::move(norm));
      }
    }
    work.instance = std::move(inst);
    return;
  }
}

CurvePoint aggregate(const std::vector<const Series*>& runs, int k) {
  std::vector<double> values;
  values.reserve(runs.size());
  for (const Series* s : runs) {
    if ((*s)[k]) values.push_back(*(*s)[k]);
  }
  CurvePoint p;
  p.iteration = k;
  p.defined_count = values.size();
  if (!values.empty()) {
    p.median = quantile(values, 0.5);
    p.q25 = quantile(values, 0.25);
    p.q75 = quantile(values, 0.75);
  }
  return p;
}

}  // namespace

BenchmarkReport run_sweep(const SweepConfig& input, const SweepLog& log) {
  validate(input);
  const auto start = std::chrono::steady_clock::now();
  SweepConfig config = input;
  const ProblemSpec resolved = with_defaults(config.problem);
  config.problem = resolved;
  config.problem.seed = 0;
  if (!config.oracle_iterations) {
    config.oracle_iterations = default_oracle_iterations(config.problem.cls);
  }

  const std::size_t n = static_cast<std::size_t>(config.instances);
  std::vector<InstanceWork> work(n);
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  SweepLog safe_log;
  if (log) {
    safe_log = [&](const std::string& line) {
      std::lock_guard<std::mutex> lock(log_mutex);
      log(line);
    };
  }
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        process_instance(config, i, work[i], safe_log);
      } catch (...) {
        work[i].error = std::current_exception();
      }
    }
  };
  const int threads = std::min<int>(config.threads, static_cast<int>(n));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  for (InstanceWork& w : work) {
    if (w.error) std::rethrow_exception(w.error);
  }

  BenchmarkReport report;
  for (std::size_t i = 0; i < n; ++i) {
    if (!work[i].instance) {
      report.dropped.push_back("instance " + std::to_string(i) + ": " + work[i].drop_reason);
    }
  }
  if (10 * report.dropped.size() > n) {
    throw Error(ErrorCode::kOracleUnreliable,
                std::to_string(report.dropped.size()) + " of " + std::to_string(n) +
                    " instances dropped by the reference oracle (limit 10%)");
  }

  const std::size_t runs_per_instance = config.algorithms.size() * config.betas.size();
  for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
    for (std::size_t b = 0; b < config.betas.size(); ++b) {
      const std::size_t slot = a * config.betas.size() + b;
      std::vector<const Series*> runs;
      for (const InstanceWork& w : work) {
        if (w.instance) runs.push_back(&w.normalized[slot]);
      }
      Curve curve;
      curve.algorithm = config.algorithms[a];
      curve.beta = config.betas[b];
      if (!runs.empty()) {
        for (int k = 0; k < config.iterations; ++k) curve.points.push_back(aggregate(runs, k));
      }
      report.curves.push_back(std::move(curve));
    }
  }
  for (InstanceWork& w : work) {
    if (!w.instance) continue;
    if (w.terminal.size() != runs_per_instance) {
      throw Error(ErrorCode::kNumerical, "internal: missing runs for an instance");
    }
    report.terminal.insert(report.terminal.end(), w.terminal.begin(), w.terminal.end());
    report.instances.push_back(w.summary);
    report.archive.push_back(std::move(*w.instance));
  }
  report.config = config;
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

DemoReport run_fig1_demo(double beta, int iterations) {
  const GeneratedInstance inst = gen_demo_fig1();
  const SmoothObjective f = *inst.demo_objective();
  const auto& data = std::get<DemoData>(inst.data);

  DemoReport out;
  out.beta = beta;
  out.iterations = iterations;
  out.naive = naive_projected_update(inst.program, f, beta, iterations);
  out.composite = composite_descent(inst.program, f, beta, iterations);
  out.constrained_optimum = data.constrained_optimum;
  out.optimum_value = data.optimum_value;
  out.initial_gap = f(inst.program.anchor(), nullptr) - data.optimum_value;

  auto last_projected = [&](const RunTrace& t) {
    return t.projected.empty() ? inst.program.anchor() : t.projected.back();
  };
  out.naive_gap = std::abs(f(last_projected(out.naive), nullptr) - data.optimum_value);
  out.composite_gap = std::abs(f(last_projected(out.composite), nullptr) - data.optimum_value);

  for (const IterationRecord& r : out.composite.records) {
    if (!r.feasible) {
      out.first_exit = r.k;
      break;
    }
  }
  const std::size_t upto = out.first_exit ? static_cast<std::size_t>(*out.first_exit) + 1
                                          : out.composite.projected.size();
  out.identical_before_exit = out.naive.projected.size() >= upto;
  for (std::size_t k = 0; k < upto && out.identical_before_exit; ++k) {
    out.identical_before_exit = out.naive.projected[k] == out.composite.projected[k];
  }
  return out;
}

}  // namespace igd
