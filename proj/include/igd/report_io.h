#ifndef IGD_REPORT_IO_H_
#define IGD_REPORT_IO_H_

#include <ostream>
#include <string>
#include <vector>

#include "igd/harness.h"

namespace igd {

// Header: class,algorithm,beta,iteration,median,q25,q75,defined_count.
// Iterations with no defined value carry 1.0 in all three quantiles and a
// defined_count of 0.
void write_curves_csv(const BenchmarkReport& report, std::ostream& out);

// One row per (instance, algorithm, beta). An undefined best value (SubGD
// never feasible) is written as "nan"; diverged_at is empty unless the run
// overflowed.
void write_terminal_csv(const BenchmarkReport& report, std::ostream& out);

// Plain-text `key = value` manifest: configuration, per-instance seeds,
// references and oracle gaps, drop list, wall time.
void write_manifest(const BenchmarkReport& report, std::ostream& out);

struct ReportFiles {
  std::string curves;
  std::string terminal;
  std::string manifest;
  std::vector<std::string> instances;
};

// Writes <class>_curves.csv, <class>_terminal.csv, <class>_manifest.txt and
// instances/<class>_<index>.txt under `dir`, creating directories. Throws
// kIo if a target exists and `force` is false.
ReportFiles write_report(const BenchmarkReport& report, const std::string& dir, bool force);

// Single-writer file output with the same overwrite rule.
void write_text_file(const std::string& path, const std::string& content, bool force);

}  // namespace igd

#endif  // IGD_REPORT_IO_H_
