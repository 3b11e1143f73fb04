#ifndef IGD_HARNESS_H_
#define IGD_HARNESS_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "igd/optimizers.h"
#include "igd/problems.h"

namespace igd {

// Iteration-indexed values; nullopt marks "no feasible point yet" (SubGD).
using Series = std::vector<std::optional<double>>;

// Running minimum of the recorded objective. IGD/PGD records are always
// feasible; SubGD records count only once h(x_k) <= 0. A run that stopped
// early is held at its last value up to `length` entries.
Series best_so_far(const RunTrace& trace, std::size_t length = 0);

// (v - f_star) / (f_x0 - f_star) elementwise, undefined entries kept
// undefined. Throws kDegenerateInstance unless f_x0 > f_star.
Series normalize(const Series& series, double f_star, double f_x0);
double normalize(double value, double f_star, double f_x0);

// Linearly interpolated quantile (R type 7) of an unsorted sample.
// Throws kInvalidInput on an empty sample or p outside [0, 1].
double quantile(std::vector<double> sample, double p);

struct SweepConfig {
  ProblemSpec problem;  // class and dimensions; seed ignored
  int instances = 20;
  int iterations = 10'000;
  std::vector<double> betas{1e-4, 1e-3, 1e-2, 1e-1};
  std::vector<Algorithm> algorithms{Algorithm::kIgd, Algorithm::kSubgd};
  std::uint64_t seed = 1;
  int threads = 1;
  std::optional<int> oracle_iterations;  // nullopt: default_oracle_iterations(class)
  double oracle_beta0 = OracleOptions{}.beta0;
  // Instances whose f(x0) is within this of f* are regenerated.
  double degenerate_margin = 1e-9;
};

inline constexpr int kPaperScaleInstances = 100;

// Throws kConfiguration on empty grids, non-positive counts, or PGD on a
// class other than Norm.
void validate(const SweepConfig& config);

struct CurvePoint {
  int iteration = 0;
  double median = 1.0;
  double q25 = 1.0;
  double q75 = 1.0;
  std::size_t defined_count = 0;
};

struct Curve {
  Algorithm algorithm = Algorithm::kIgd;
  double beta = 0.0;
  std::vector<CurvePoint> points;  // one per iteration

  // Median at the final iteration.
  double terminal_median() const;
};

struct TerminalValue {
  std::size_t instance = 0;
  Algorithm algorithm = Algorithm::kIgd;
  double beta = 0.0;
  std::optional<double> best_raw;         // best-so-far objective at iteration K - 1
  std::optional<double> best_normalized;
  double averaged_objective = 0.0;
  bool lemma1_violated = false;
  std::optional<int> diverged_at;  // overflow under the sweep's stop policy
};

struct InstanceSummary {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  int degenerate_resamples = 0;
  double f_star = 0.0;
  double f_x0 = 0.0;
  ReferenceOptimum reference;
  double oracle_relative_gap = 0.0;
  std::uint64_t hash = 0;
};

struct BenchmarkReport {
  SweepConfig config;  // problem dimensions resolved
  std::vector<Curve> curves;  // algorithm-major, betas in config order
  std::vector<TerminalValue> terminal;
  std::vector<InstanceSummary> instances;  // kept instances, index order
  std::vector<GeneratedInstance> archive;  // parallel to `instances`
  std::vector<std::string> dropped;        // reason per dropped index
  double wall_seconds = 0.0;

  const Curve& curve(Algorithm algorithm, double beta) const;
};

// Seed of instance `index`, resample `sub` (0 for the first draw).
std::uint64_t instance_seed(std::uint64_t master, ProblemClass cls, std::size_t index, int sub);

using SweepLog = std::function<void(const std::string&)>;

// Generates each instance once, resolves its reference optimum, runs every
// (algorithm, beta) on it and aggregates normalized best-so-far quartiles.
// Oracle-unreliable instances are dropped; more than 10% dropped throws
// kOracleUnreliable. Output is independent of `threads`.
BenchmarkReport run_sweep(const SweepConfig& config, const SweepLog& log = {});

struct DemoReport {
  double beta = 0.0;
  int iterations = 0;
  RunTrace naive;
  RunTrace composite;
  Vector constrained_optimum;
  double optimum_value = 0.0;
  double initial_gap = 0.0;    // f(x0) - f*
  double naive_gap = 0.0;      // |f - f*| at the last projected iterate
  double composite_gap = 0.0;
  std::optional<int> first_exit;  // first k with x_k outside C (composition run)
  bool identical_before_exit = false;  // projected points agree for k <= first_exit
};

// Both updates on the two-dimensional demo instance with matched beta and K.
DemoReport run_fig1_demo(double beta = 0.05, int iterations = 2000);

}  // namespace igd

#endif  // IGD_HARNESS_H_
