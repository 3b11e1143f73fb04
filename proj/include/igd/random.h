#ifndef IGD_RANDOM_H_
#define IGD_RANDOM_H_

#include <cstdint>
#include <optional>
#include <random>

#include "igd/linalg.h"

namespace igd {

// Seeded generator used everywhere randomness is needed.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. The real-valued distributions are implemented here rather than
// taken from <random> because the standard leaves their algorithms to the
// library vendor:
//   uniform(): top 53 bits of one engine draw, scaled to [0, 1).
//   normal():  Marsaglia polar method; the second variate of each accepted
//              pair is cached and returned by the next call.
// A generator is single-owner; concurrent work uses separately seeded ones.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();

 private:
  std::mt19937_64 engine_;
  std::optional<double> cached_normal_;
};

// SplitMix64 finaliser over (seed, a, b); used to give every problem
// instance and sub-attempt its own independent stream.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

// Uniform on the unit hypersphere S^{d-1} via Gaussian normalisation.
Vector sample_unit_sphere(std::size_t d, Rng& rng);
// Uniform in the unit ball: sphere sample scaled by u^{1/d}.
Vector sample_unit_ball(std::size_t d, Rng& rng);
// d i.i.d. standard normal entries.
Vector sample_normal(std::size_t d, Rng& rng);
Matrix sample_normal_matrix(std::size_t rows, std::size_t cols, Rng& rng);

}  // namespace igd

#endif  // IGD_RANDOM_H_
