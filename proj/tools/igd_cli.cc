// igd: instance generation, single runs, sweeps, the two-dimensional
// projection demo and the self-check suites.
//
// Exit status: 0 success, 1 usage error, 2 runtime or numerical error,
// 3 verification failure.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "igd/error.h"
#include "igd/harness.h"
#include "igd/instance_io.h"
#include "igd/report_io.h"
#include "igd/verify.h"

namespace {

using namespace igd;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitVerification = 3;

constexpr const char* kOutputEnv = "IGD_OUTPUT_DIR";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

ProblemClass class_arg(const std::string& name) {
  try {
    return parse_problem_class(name);
  } catch (const Error&) {
    throw UsageError("unknown problem class '" + name + "' (expected lin, sdp, soc, norm, exp)");
  }
}

Algorithm algorithm_arg(const std::string& name) {
  try {
    return parse_algorithm(name);
  } catch (const Error&) {
    throw UsageError("unknown algorithm '" + name + "' (expected igd, subgd, pgd)");
  }
}

double real_arg(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw UsageError(key + ": '" + text + "' is not a number");
  }
}

long long int_arg(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw UsageError(key + ": '" + text + "' is not an integer");
  }
}

std::string resolve_out(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(kOutputEnv); env && *env) return env;
  throw UsageError(std::string("--out is required (or set ") + kOutputEnv + ")");
}

void echo(const std::string& key, const std::string& value) {
  std::cout << "config " << key << " = " << value << '\n';
}

std::string join_reals(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_real(v[i]);
  return out;
}

// ---- generate --------------------------------------------------------------

struct GenerateArgs {
  std::string cls;
  std::size_t d = 0, m = 0, n = 0;
  int count = 1;
  std::uint64_t seed = 1;
  std::string out;
  bool force = false;
};

int cmd_generate(const GenerateArgs& a) {
  ProblemSpec spec{class_arg(a.cls), a.d, a.m, a.n, 0};
  if (spec.cls == ProblemClass::kDemoFig1) throw UsageError("use the demo verb for the demo");
  if (a.count < 1) throw UsageError("--count must be >= 1");
  spec = with_defaults(spec);
  const std::string out = resolve_out(a.out);
  echo("verb", "generate");
  echo("class", problem_class_name(spec.cls));
  echo("dimension", std::to_string(spec.dimension));
  echo("components", std::to_string(spec.components));
  echo("matrix_size", std::to_string(spec.matrix_size));
  echo("count", std::to_string(a.count));
  echo("seed", std::to_string(a.seed));
  echo("out", out);

  std::ostringstream manifest;
  manifest << "igd-generate-manifest = 1\n"
           << "class = " << problem_class_name(spec.cls) << "\n"
           << "dimension = " << spec.dimension << "\n"
           << "components = " << spec.components << "\n"
           << "matrix_size = " << spec.matrix_size << "\n"
           << "count = " << a.count << "\n"
           << "seed = " << a.seed << "\n";
  std::vector<std::pair<std::string, std::string>> files;
  for (int i = 0; i < a.count; ++i) {
    ProblemSpec s = spec;
    s.seed = instance_seed(a.seed, spec.cls, static_cast<std::size_t>(i), 0);
    const GeneratedInstance inst = generate(s);
    const std::string name = std::string(problem_class_name(spec.cls)) + "_" + std::to_string(i) + ".txt";
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx",
                  static_cast<unsigned long long>(instance_hash(inst)));
    manifest << "instance = " << name << " seed=" << s.seed << " attempts=" << inst.attempts
             << " hash=" << hash << "\n";
    files.emplace_back((std::filesystem::path(out) / name).string(), serialize_instance(inst));
  }
  const std::string manifest_path =
      (std::filesystem::path(out) / (std::string(problem_class_name(spec.cls)) + "_manifest.txt"))
          .string();
  if (!a.force) {
    for (const auto& f : files) {
      if (std::filesystem::exists(f.first)) {
        throw Error(ErrorCode::kIo, f.first + " exists; pass --force to overwrite");
      }
    }
    if (std::filesystem::exists(manifest_path)) {
      throw Error(ErrorCode::kIo, manifest_path + " exists; pass --force to overwrite");
    }
  }
  for (const auto& f : files) write_text_file(f.first, f.second, true);
  write_text_file(manifest_path, manifest.str(), true);
  std::cout << "wrote " << files.size() << " instances and " << manifest_path << '\n';
  return kExitOk;
}

// ---- solve -----------------------------------------------------------------

struct SolveArgs {
  std::string instance;
  std::string cls;
  std::size_t d = 0, m = 0, n = 0;
  std::uint64_t seed = 1;
  std::string alg = "igd";
  std::string beta = "auto";
  int k = 10'000;
  std::string trace;
  bool force = false;
};

int cmd_solve(const SolveArgs& a) {
  if (a.k < 1) throw UsageError("--K must be >= 1");
  if (a.instance.empty() == a.cls.empty()) {
    throw UsageError("give exactly one of --instance FILE or --class NAME");
  }
  const Algorithm alg = algorithm_arg(a.alg);
  const bool auto_beta = a.beta == "auto";
  const double beta = auto_beta ? 0.0 : real_arg("--beta", a.beta);
  if (!auto_beta && !(beta > 0.0)) throw UsageError("--beta must be positive or 'auto'");
  if (auto_beta && alg != Algorithm::kIgd) throw UsageError("--beta auto is only defined for igd");

  GeneratedInstance inst = [&] {
    if (!a.instance.empty()) return read_instance_file(a.instance);
    ProblemSpec spec{class_arg(a.cls), a.d, a.m, a.n, a.seed};
    return generate(spec);
  }();
  if (alg == Algorithm::kPgd && inst.spec.cls != ProblemClass::kNorm) {
    throw UsageError(std::string("pgd is unsupported on the ") + problem_class_name(inst.spec.cls) +
                     " class (needs a Euclidean projector; norm only)");
  }
  if (inst.spec.cls == ProblemClass::kDemoFig1) throw UsageError("use the demo verb for the demo");

  echo("verb", "solve");
  echo("source", a.instance.empty() ? "generated" : a.instance);
  echo("class", problem_class_name(inst.spec.cls));
  echo("dimension", std::to_string(inst.spec.dimension));
  echo("components", std::to_string(inst.spec.components));
  echo("matrix_size", std::to_string(inst.spec.matrix_size));
  echo("seed", std::to_string(inst.spec.seed));
  echo("algorithm", algorithm_name(alg));
  echo("beta", auto_beta ? "auto" : format_real(beta));
  echo("K", std::to_string(a.k));
  echo("trace", a.trace.empty() ? "none" : a.trace);
  std::cout.flush();

  const ConvexProgram& p = inst.program;
  RunTrace trace;
  std::optional<double> bound;
  switch (alg) {
    case Algorithm::kIgd: {
      IgdConfig config;
      config.iterations = a.k;
      if (!auto_beta) config.beta = beta;
      trace = run_igd(p, config);
      if (auto_beta && p.constraint().lipschitz() && p.domain_bound()) {
        const double h0 = *p.constraint().lipschitz() / std::abs(p.h_at_anchor());
        bound = convergence_bound(p.objective().lipschitz(), h0, *p.domain_bound(), a.k);
      }
      break;
    }
    case Algorithm::kSubgd:
      trace = run_subgd(p, beta, a.k);
      break;
    case Algorithm::kPgd:
      trace = run_pgd(p, *inst.euclidean_projector(), beta, a.k);
      break;
  }

  if (!a.trace.empty()) {
    std::ostringstream csv;
    csv << "k,eta,objective,constraint,alpha,feasible\n";
    for (const IterationRecord& r : trace.records) {
      csv << r.k << ',' << format_real(r.eta) << ',' << format_real(r.objective) << ','
          << format_real(r.constraint) << ',' << format_real(r.alpha) << ',' << (r.feasible ? 1 : 0)
          << '\n';
    }
    write_text_file(a.trace, csv.str(), a.force);
  }

  const auto& best = trace.report.best_feasible_objective;
  std::cout << "result algorithm=" << algorithm_name(alg) << " beta=" << format_real(trace.beta)
            << " K=" << a.k << " averaged_objective=" << format_real(trace.averaged_objective)
            << " best_objective=" << (best ? format_real(*best) : "none")
            << " lemma1_violated=" << (trace.report.lemma1_violated ? "yes" : "no");
  if (p.reference_optimum()) {
    std::cout << " reference=" << format_real(*p.reference_optimum())
              << " gap=" << format_real(trace.averaged_objective - *p.reference_optimum());
  } else {
    std::cout << " reference=unknown";
  }
  if (bound) std::cout << " convergence_bound=" << format_real(*bound);
  std::cout << '\n';
  return kExitOk;
}

// ---- sweep -----------------------------------------------------------------

struct SweepArgs {
  std::string config_file;
  std::string cls, betas, algs, out;
  std::optional<std::size_t> d, m, n;
  std::optional<int> instances, iters, threads, oracle_iters;
  std::optional<std::uint64_t> seed;
  bool paper_scale = false;
  bool force = false;
};

// Flat `key = value` lines; '#' starts a comment.
std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config file " + path);
  static const char* kKeys[] = {"class", "d", "M", "n", "betas", "algs", "instances",
                                "iters", "seed", "threads", "oracle_iters", "out"};
  std::map<std::string, std::string> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(number) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys)) {
      throw UsageError(path + ":" + std::to_string(number) + ": unknown key '" + key + "'");
    }
    out[key] = value;
  }
  return out;
}

int cmd_sweep(SweepArgs a) {
  if (!a.config_file.empty()) {
    // Explicit flags win over the file.
    for (const auto& [key, value] : read_config_file(a.config_file)) {
      if (key == "class" && a.cls.empty()) a.cls = value;
      if (key == "betas" && a.betas.empty()) a.betas = value;
      if (key == "algs" && a.algs.empty()) a.algs = value;
      if (key == "out" && a.out.empty()) a.out = value;
      if (key == "d" && !a.d) a.d = int_arg(key, value);
      if (key == "M" && !a.m) a.m = int_arg(key, value);
      if (key == "n" && !a.n) a.n = int_arg(key, value);
      if (key == "instances" && !a.instances) a.instances = int_arg(key, value);
      if (key == "iters" && !a.iters) a.iters = int_arg(key, value);
      if (key == "threads" && !a.threads) a.threads = int_arg(key, value);
      if (key == "oracle_iters" && !a.oracle_iters) a.oracle_iters = int_arg(key, value);
      if (key == "seed" && !a.seed) a.seed = int_arg(key, value);
    }
  }
  if (a.cls.empty()) throw UsageError("--class is required");
  const std::string out = resolve_out(a.out);

  std::vector<ProblemClass> classes;
  for (const std::string& c : split_list(a.cls)) {
    const ProblemClass cls = class_arg(c);
    if (cls == ProblemClass::kDemoFig1) throw UsageError("the demo is not a sweep class");
    classes.push_back(cls);
  }
  if (classes.empty()) throw UsageError("--class is empty");

  SweepConfig base;
  if (!a.betas.empty()) {
    base.betas.clear();
    for (const std::string& b : split_list(a.betas)) base.betas.push_back(real_arg("--betas", b));
  }
  if (!a.algs.empty()) {
    base.algorithms.clear();
    for (const std::string& s : split_list(a.algs)) base.algorithms.push_back(algorithm_arg(s));
  }
  if (a.paper_scale) base.instances = kPaperScaleInstances;
  if (a.instances) base.instances = *a.instances;
  if (a.iters) base.iterations = *a.iters;
  if (a.seed) base.seed = *a.seed;
  if (a.threads) base.threads = *a.threads;
  if (a.oracle_iters) base.oracle_iterations = *a.oracle_iters;

  std::vector<SweepConfig> configs;
  for (ProblemClass cls : classes) {
    SweepConfig c = base;
    c.problem = with_defaults({cls, a.d.value_or(0), a.m.value_or(0), a.n.value_or(0), 0});
    if (!c.oracle_iterations) c.oracle_iterations = default_oracle_iterations(cls);
    try {
      validate(c);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    configs.push_back(c);
  }

  echo("verb", "sweep");
  for (const SweepConfig& c : configs) {
    const std::string p = std::string(problem_class_name(c.problem.cls)) + ".";
    echo(p + "dimension", std::to_string(c.problem.dimension));
    echo(p + "components", std::to_string(c.problem.components));
    echo(p + "matrix_size", std::to_string(c.problem.matrix_size));
    echo(p + "oracle_iters", std::to_string(*c.oracle_iterations));
  }
  std::string algs;
  for (std::size_t i = 0; i < base.algorithms.size(); ++i) {
    algs += (i ? "," : "") + std::string(algorithm_name(base.algorithms[i]));
  }
  echo("betas", join_reals(base.betas));
  echo("algs", algs);
  echo("instances", std::to_string(base.instances));
  echo("iters", std::to_string(base.iterations));
  echo("seed", std::to_string(base.seed));
  echo("threads", std::to_string(base.threads));
  echo("out", out);
  echo("force", a.force ? "yes" : "no");
  std::cout.flush();

  for (const SweepConfig& c : configs) {
    const BenchmarkReport report =
        run_sweep(c, [](const std::string& line) { std::cerr << "sweep: " << line << '\n'; });
    const ReportFiles files = write_report(report, out, a.force);
    std::cout << "class " << problem_class_name(c.problem.cls) << ": kept "
              << report.instances.size() << ", dropped " << report.dropped.size() << ", wrote "
              << files.curves << '\n';
    for (const Curve& curve : report.curves) {
      std::cout << "  " << algorithm_name(curve.algorithm) << " beta=" << format_real(curve.beta)
                << " terminal_median=" << format_real(curve.terminal_median()) << '\n';
    }
  }
  return kExitOk;
}

// ---- demo ------------------------------------------------------------------

struct DemoArgs {
  double beta = 0.05;
  int k = 2000;
  std::string out;
  bool force = false;
};

int cmd_demo(const DemoArgs& a) {
  if (a.k < 1) throw UsageError("--K must be >= 1");
  if (!(a.beta > 0.0)) throw UsageError("--beta must be positive");
  echo("verb", "demo");
  echo("beta", format_real(a.beta));
  echo("K", std::to_string(a.k));
  echo("out", a.out.empty() ? "none" : a.out);
  const DemoReport d = run_fig1_demo(a.beta, a.k);
  std::cout << "demo constrained_optimum=(" << format_real(d.constrained_optimum[0]) << ","
            << format_real(d.constrained_optimum[1]) << ") initial_gap=" << format_real(d.initial_gap)
            << "\n";
  std::cout << "demo naive_final_gap=" << format_real(d.naive_gap)
            << " composition_final_gap=" << format_real(d.composite_gap) << "\n";
  std::cout << "demo first_exit="
            << (d.first_exit ? std::to_string(*d.first_exit) : std::string("none"))
            << " identical_before_exit=" << (d.identical_before_exit ? "yes" : "no") << "\n";
  if (!a.out.empty()) {
    std::ostringstream csv;
    csv << "update,k,x1,x2,g1,g2,objective\n";
    for (const auto* t : {&d.naive, &d.composite}) {
      const char* name = t == &d.naive ? "naive" : "composition";
      const std::size_t n =
          std::min({t->records.size(), t->iterates.size(), t->projected.size()});
      for (std::size_t k = 0; k < n; ++k) {
        csv << name << ',' << k << ',' << format_real(t->iterates[k][0]) << ','
            << format_real(t->iterates[k][1]) << ',' << format_real(t->projected[k][0]) << ','
            << format_real(t->projected[k][1]) << ',' << format_real(t->records[k].objective)
            << '\n';
      }
    }
    write_text_file(a.out, csv.str(), a.force);
  }
  return kExitOk;
}

// ---- verify ----------------------------------------------------------------

int cmd_verify(const std::string& level, int threads) {
  VerifyOptions o;
  if (level == "fast") {
    o = VerifyOptions::fast();
  } else if (level == "full") {
    o = VerifyOptions::full();
  } else {
    throw UsageError("--level must be fast or full");
  }
  if (threads < 1) throw UsageError("--threads must be >= 1");
  o.threads = threads;
  echo("verb", "verify");
  echo("level", level);
  echo("seed", std::to_string(o.seed));
  echo("threads", std::to_string(o.threads));
  std::cout.flush();
  bool all = true;
  run_verification(o, [&](const CheckResult& r) {
    all = all && r.passed;
    char head[96];
    std::snprintf(head, sizeof head, "%-4s %-2s %-45s %7.1fs", r.passed ? "PASS" : "FAIL",
                  r.criterion ? std::to_string(r.criterion).c_str() : "-", r.name.c_str(),
                  r.seconds);
    std::cout << head << "  " << r.detail << std::endl;
  });
  std::cout << (all ? "all checks passed" : "verification FAILED") << '\n';
  return all ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interpolation-projection gradient descent: generators, runs, sweeps, checks"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Archive generated instances");
  g->add_option("--class", gen.cls, "lin, sdp, soc, norm or exp")->required();
  g->add_option("--d", gen.d, "Dimension (0 = class default)");
  g->add_option("--M", gen.m, "Constraint count for lin/soc");
  g->add_option("--n", gen.n, "Matrix order for sdp");
  g->add_option("--count", gen.count, "Number of instances");
  g->add_option("--seed", gen.seed, "Master seed");
  g->add_option("--out", gen.out, std::string("Output directory (default $") + kOutputEnv + ")");
  g->add_flag("--force", gen.force, "Overwrite existing files");

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Run one optimizer on one instance");
  s->add_option("--instance", solve.instance, "Archived instance file");
  s->add_option("--class", solve.cls, "Generate the instance instead");
  s->add_option("--d", solve.d, "Dimension (0 = class default)");
  s->add_option("--M", solve.m, "Constraint count for lin/soc");
  s->add_option("--n", solve.n, "Matrix order for sdp");
  s->add_option("--seed", solve.seed, "Instance seed");
  s->add_option("--alg", solve.alg, "igd, subgd or pgd");
  s->add_option("--beta", solve.beta, "Step size or 'auto' (igd only)");
  s->add_option("--K", solve.k, "Iterations");
  s->add_option("--trace", solve.trace, "Per-iteration CSV output");
  s->add_flag("--force", solve.force, "Overwrite the trace file");

  SweepArgs sweep;
  auto* w = app.add_subcommand("sweep", "Algorithm x step-size benchmark sweep");
  w->add_option("--config", sweep.config_file, "key = value file; flags override");
  w->add_option("--class", sweep.cls, "Class or comma list");
  w->add_option("--d", sweep.d, "Dimension");
  w->add_option("--M", sweep.m, "Constraint count for lin/soc");
  w->add_option("--n", sweep.n, "Matrix order for sdp");
  w->add_option("--betas", sweep.betas, "Comma-separated step sizes");
  w->add_option("--algs", sweep.algs, "Comma-separated algorithms");
  w->add_option("--instances", sweep.instances, "Instances per class");
  w->add_option("--iters", sweep.iters, "Iterations per run");
  w->add_option("--seed", sweep.seed, "Master seed");
  w->add_option("--threads", sweep.threads, "Worker threads");
  w->add_option("--oracle-iters", sweep.oracle_iters, "Reference oracle iterations");
  w->add_option("--out", sweep.out, std::string("Output directory (default $") + kOutputEnv + ")");
  w->add_flag("--paper-scale", sweep.paper_scale, "100 instances per class");
  w->add_flag("--force", sweep.force, "Overwrite existing reports");

  DemoArgs demo;
  auto* d = app.add_subcommand("demo", "Naive projected update vs. composition on the 2-D demo");
  d->add_option("--beta", demo.beta, "Step size");
  d->add_option("--K", demo.k, "Iterations");
  d->add_option("--out", demo.out, "Trajectory CSV output");
  d->add_flag("--force", demo.force, "Overwrite the trajectory file");

  std::string level = "fast";
  int verify_threads = 1;
  auto* v = app.add_subcommand("verify", "Run the self-check suites");
  v->add_option("--level", level, "fast or full");
  v->add_option("--threads", verify_threads, "Worker threads for the benchmark sweep");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*g) return cmd_generate(gen);
    if (*s) return cmd_solve(solve);
    if (*w) return cmd_sweep(sweep);
    if (*d) return cmd_demo(demo);
    if (*v) return cmd_verify(level, verify_threads);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
