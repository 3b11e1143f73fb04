#include "igd/report_io.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "igd/error.h"
#include "igd/instance_io.h"

namespace igd {

namespace fs = std::filesystem;

void write_curves_csv(const BenchmarkReport& report, std::ostream& out) {
  const char* cls = problem_class_name(report.config.problem.cls);
  out << "class,algorithm,beta,iteration,median,q25,q75,defined_count\n";
  for (const Curve& curve : report.curves) {
    const std::string prefix =
        std::string(cls) + "," + algorithm_name(curve.algorithm) + "," + format_real(curve.beta) + ",";
    for (const CurvePoint& p : curve.points) {
      out << prefix << p.iteration << ',' << format_real(p.median) << ',' << format_real(p.q25)
          << ',' << format_real(p.q75) << ',' << p.defined_count << '\n';
    }
  }
}

void write_terminal_csv(const BenchmarkReport& report, std::ostream& out) {
  const char* cls = problem_class_name(report.config.problem.cls);
  out << "class,algorithm,beta,instance,seed,f_star,f_x0,best_raw,best_normalized,"
         "averaged_objective,lemma1_violated,diverged_at\n";
  std::size_t row = 0;
  const std::size_t per_instance = report.config.algorithms.size() * report.config.betas.size();
  for (const TerminalValue& t : report.terminal) {
    const InstanceSummary& s = report.instances[row++ / per_instance];
    out << cls << ',' << algorithm_name(t.algorithm) << ',' << format_real(t.beta) << ','
        << t.instance << ',' << s.seed << ',' << format_real(s.f_star) << ','
        << format_real(s.f_x0) << ',' << (t.best_raw ? format_real(*t.best_raw) : "nan") << ','
        << (t.best_normalized ? format_real(*t.best_normalized) : "nan") << ','
        << format_real(t.averaged_objective) << ',' << (t.lemma1_violated ? 1 : 0) << ',';
    if (t.diverged_at) out << *t.diverged_at;
    out << '\n';
  }
}

void write_manifest(const BenchmarkReport& report, std::ostream& out) {
  const SweepConfig& c = report.config;
  out << "igd-sweep-manifest = 1\n";
  out << "class = " << problem_class_name(c.problem.cls) << '\n';
  out << "dimension = " << c.problem.dimension << '\n';
  out << "components = " << c.problem.components << '\n';
  out << "matrix_size = " << c.problem.matrix_size << '\n';
  out << "instances = " << c.instances << '\n';
  out << "iterations = " << c.iterations << '\n';
  out << "betas = ";
  for (std::size_t i = 0; i < c.betas.size(); ++i) out << (i ? "," : "") << format_real(c.betas[i]);
  out << '\n';
  out << "algorithms = ";
  for (std::size_t i = 0; i < c.algorithms.size(); ++i) {
    out << (i ? "," : "") << algorithm_name(c.algorithms[i]);
  }
  out << '\n';
  out << "seed = " << c.seed << '\n';
  out << "threads = " << c.threads << '\n';
  out << "oracle_iterations = " << c.oracle_iterations.value_or(0) << '\n';
  out << "oracle_beta0 = " << format_real(c.oracle_beta0) << '\n';
  out << "quantiles = q25,median,q75 (linear interpolation over defined values)\n";
  out << "undefined_plot_value = 1\n";
  out << "kept = " << report.instances.size() << '\n';
  out << "dropped = " << report.dropped.size() << '\n';
  for (const std::string& d : report.dropped) out << "dropped_reason = " << d << '\n';
  for (const InstanceSummary& s : report.instances) {
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(s.hash));
    out << "instance = " << s.index << " seed=" << s.seed << " resamples=" << s.degenerate_resamples
        << " f_star=" << format_real(s.f_star) << " provenance=" << provenance_name(s.reference.provenance)
        << " low_confidence=" << (s.reference.low_confidence ? 1 : 0)
        << " oracle_gap=" << format_real(s.oracle_relative_gap) << " f_x0=" << format_real(s.f_x0)
        << " hash=" << hash << '\n';
  }
  out << "wall_seconds = " << format_real(report.wall_seconds) << '\n';
}

void write_text_file(const std::string& path, const std::string& content, bool force) {
  const fs::path p(path);
  if (!force && fs::exists(p)) {
    throw Error(ErrorCode::kIo, path + " exists; pass --force to overwrite");
  }
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << content;
  out.close();
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path);
}

ReportFiles write_report(const BenchmarkReport& report, const std::string& dir, bool force) {
  const std::string cls = problem_class_name(report.config.problem.cls);
  const fs::path base(dir);
  ReportFiles files;
  files.curves = (base / (cls + "_curves.csv")).string();
  files.terminal = (base / (cls + "_terminal.csv")).string();
  files.manifest = (base / (cls + "_manifest.txt")).string();
  for (const InstanceSummary& s : report.instances) {
    files.instances.push_back(
        (base / "instances" / (cls + "_" + std::to_string(s.index) + ".txt")).string());
  }
  // Check every target first so a refused overwrite leaves nothing half-written.
  if (!force) {
    std::vector<std::string> all{files.curves, files.terminal, files.manifest};
    all.insert(all.end(), files.instances.begin(), files.instances.end());
    for (const std::string& p : all) {
      if (fs::exists(p)) throw Error(ErrorCode::kIo, p + " exists; pass --force to overwrite");
    }
  }
  std::ostringstream curves, terminal, manifest;
  write_curves_csv(report, curves);
  write_terminal_csv(report, terminal);
  write_manifest(report, manifest);
  write_text_file(files.curves, curves.str(), true);
  write_text_file(files.terminal, terminal.str(), true);
  write_text_file(files.manifest, manifest.str(), true);
  for (std::size_t i = 0; i < report.archive.size(); ++i) {
    write_text_file(files.instances[i], serialize_instance(report.archive[i]), true);
  }
  return files;
}

}  // namespace igd
