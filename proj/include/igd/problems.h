#ifndef IGD_PROBLEMS_H_
#define IGD_PROBLEMS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "igd/linalg.h"
#include "igd/optimizers.h"
#include "igd/problem.h"

namespace igd {

enum class ProblemClass { kLin, kSdp, kSoc, kNorm, kExp, kDemoFig1 };

const char* problem_class_name(ProblemClass cls);
// "lin", "sdp", "soc", "norm", "exp", "demo" (case-insensitive).
ProblemClass parse_problem_class(const std::string& name);

// The five benchmark classes, in reporting order.
inline constexpr ProblemClass kBenchmarkClasses[] = {
    ProblemClass::kLin, ProblemClass::kSdp, ProblemClass::kSoc, ProblemClass::kNorm,
    ProblemClass::kExp};

struct ProblemSpec {
  ProblemClass cls = ProblemClass::kNorm;
  std::size_t dimension = 0;    // 0 selects the class default
  std::size_t components = 0;   // M for Lin/SOC; 0 selects the class default
  std::size_t matrix_size = 0;  // SDP matrix order n; 0 selects the default
  std::uint64_t seed = 0;
};

// Defaults: Lin d=10 M=10, SDP m=10 n=10, SOC d=20 M=10, Norm d=100, Exp d=2.
ProblemSpec with_defaults(ProblemSpec spec);

// Problem data per class, enough to rebuild the program bit-exactly.
struct LinData {
  Vector c;
  Matrix a;  // row i is a_i
};
struct SdpData {
  Vector c;
  std::vector<Matrix> a;  // A_i = (B_i + B_i^T) / 2
  Matrix c_mat;           // C = sum x_hat_i A_i - D
  Vector x_hat;           // Slater point, used as the anchor
  Matrix d_mat;           // positive definite slack at x_hat
  Matrix z_mat;           // positive definite dual certificate, c_i ~ tr(A_i Z)
};
struct SocData {
  Vector c;
  std::vector<Matrix> a;
  std::vector<Vector> b;
  std::vector<Vector> z;
  Vector d;
  Vector x0_raw;  // every constraint active here
};
struct NormData {
  Vector c;
};
struct ExpData {
  Vector c;
  Vector b;  // every entry W(1)
};
struct DemoData {
  Vector a;                // constraint a^T x <= offset
  double offset = 0.0;
  Vector constrained_optimum;
  double optimum_value = 0.0;
};

using InstanceData = std::variant<LinData, SdpData, SocData, NormData, ExpData, DemoData>;

enum class ReferenceProvenance { kUnknown, kAnalytic, kDerivedOracle };
const char* provenance_name(ReferenceProvenance p);

struct ReferenceOptimum {
  std::optional<double> value;
  ReferenceProvenance provenance = ReferenceProvenance::kUnknown;
  bool low_confidence = false;
};

struct GeneratedInstance {
  ProblemSpec spec;  // with defaults resolved
  InstanceData data;
  ConvexProgram program;
  ReferenceOptimum reference;
  int attempts = 1;  // generation attempts consumed (SOC refinement retries)

  // Orthogonal projector onto C; Norm only.
  std::optional<EuclideanProjector> euclidean_projector() const;
  // 0.5 ||x||^2; demo instance only.
  std::optional<SmoothObjective> demo_objective() const;
};

// Rebuilds the program from class data and anchor; used by the generators
// and by the instance reader.
GeneratedInstance assemble_instance(const ProblemSpec& spec, InstanceData data, Vector anchor,
                                    ReferenceOptimum reference, int attempts = 1);

GeneratedInstance gen_lin(std::size_t d, std::size_t m, std::uint64_t seed);
GeneratedInstance gen_sdp(std::size_t n, std::size_t m, std::uint64_t seed);
// Throws kGenerationFailure after 16 failed anchor refinements.
GeneratedInstance gen_soc(std::size_t d, std::size_t m, std::uint64_t seed);
GeneratedInstance gen_norm(std::size_t d, std::uint64_t seed);
GeneratedInstance gen_exp(std::size_t d, std::uint64_t seed);
GeneratedInstance gen_demo_fig1();

GeneratedInstance generate(ProblemSpec spec);

// W(1) by Newton iteration on w e^w = 1.
double lambert_w1();

// Radius of the ball around the origin on which the Exp-class Lipschitz
// bound is computed.
inline constexpr double kExpLipschitzRadius = 3.0;

inline constexpr int kSocMaxAttempts = 16;

// True when h is differentiable at x with the given margin: a unique
// maximising component by at least `margin` (Lin, SOC), a simple smallest
// eigenvalue separated by `margin` (SDP), x away from the origin (Norm).
bool is_smooth_point(const GeneratedInstance& instance, const Vector& x, double margin);

struct OracleOptions {
  int iterations = 1'000'000;
  double beta0 = 0.03;  // beta_k = beta0 / sqrt(k + 1)
};

// Iteration budget used by sweeps: 2e5 for SDP, whose eigen-decomposition
// per evaluation dominates the cost, 1e6 elsewhere.
int default_oracle_iterations(ProblemClass cls);

struct OracleResult {
  double value = 0.0;            // best of the two anchors
  double primary = 0.0;          // best feasible value from the instance anchor
  double secondary = 0.0;        // from the independent anchor
  double relative_gap = 0.0;     // |primary - secondary| / (1 + |value|)
  bool low_confidence = false;   // relative_gap > 1e-5
};

// Long-horizon decaying-step IGD from the instance anchor and from a second,
// independently drawn strictly feasible anchor; keeps the best feasible
// value. Throws kOracleUnreliable when the two disagree beyond 1e-3.
OracleResult estimate_reference(const GeneratedInstance& instance,
                                const OracleOptions& options = {});

// estimate_reference() with the result cached in `instance.reference`;
// returns the cached value on repeated calls. Analytic references are
// returned untouched.
double reference_oracle(GeneratedInstance& instance, const OracleOptions& options = {});

}  // namespace igd

#endif  // IGD_PROBLEMS_H_
