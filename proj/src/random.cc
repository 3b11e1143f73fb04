#include "igd/random.h"

#include <cmath>

#include "igd/error.h"

namespace igd {

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (cached_normal_) {
    const double v = *cached_normal_;
    cached_normal_.reset();
    return v;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  cached_normal_ = v * factor;
  return u * factor;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void require_dimension(std::size_t d) {
  if (d == 0) throw Error(ErrorCode::kInvalidInput, "sampling dimension must be >= 1");
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ b);
}

Vector sample_normal(std::size_t d, Rng& rng) {
  require_dimension(d);
  Vector out(d);
  for (double& v : out) v = rng.normal();
  return out;
}

Matrix sample_normal_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) out(i, j) = rng.normal();
  return out;
}

Vector sample_unit_sphere(std::size_t d, Rng& rng) {
  require_dimension(d);
  while (true) {
    Vector g = sample_normal(d, rng);
    const double n = norm2(g);
    if (n > 0.0) return (1.0 / n) * std::move(g);
  }
}

Vector sample_unit_ball(std::size_t d, Rng& rng) {
  Vector dir = sample_unit_sphere(d, rng);
  const double radius = std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
  return radius * std::move(dir);
}

}  // namespace igd
