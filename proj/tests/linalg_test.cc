#include "igd/linalg.h"

#include <cmath>
#include <functional>

#include "gtest/gtest.h"
#include "igd/error.h"
#include "igd/random.h"

namespace igd {
namespace {

void expect_error(ErrorCode code, const std::function<void()>& body) {
  try {
    body();
    ADD_FAILURE() << "expected " << error_code_name(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

Matrix random_symmetric(std::size_t n, Rng& rng) {
  const Matrix b = sample_normal_matrix(n, n, rng);
  Matrix a = b;
  a += b.transpose();
  a *= 0.5;
  return a;
}

Matrix reconstruct(const SymEigResult& e) {
  const std::size_t n = e.eigenvalues.size();
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        out(i, j) += e.eigenvectors(i, k) * e.eigenvalues[k] * e.eigenvectors(j, k);
  return out;
}

TEST(VectorTest, Arithmetic) {
  Vector a{1, 2, 3};
  const Vector b{4, 5, 6};
  EXPECT_DOUBLE_EQ(dot(a, b), 32.0);
  EXPECT_DOUBLE_EQ(norm2(Vector{3, 4}), 5.0);
  axpy(2.0, b, a);
  EXPECT_EQ(a, (Vector{9, 12, 15}));
  EXPECT_EQ(a - b, (Vector{5, 7, 9}));
  EXPECT_EQ(0.5 * (Vector{2, 4}), (Vector{1, 2}));
}

TEST(MatrixTest, ProductsAndTranspose) {
  const Matrix a{{1, 2}, {3, 4}, {5, 6}};
  EXPECT_EQ(a * (Vector{1, 1}), (Vector{3, 7, 11}));
  EXPECT_EQ(transpose_times(a, Vector{1, 0, 1}), (Vector{6, 8}));
  EXPECT_EQ(a.transpose()(1, 2), 6.0);
  EXPECT_DOUBLE_EQ(quadratic_form(Matrix{{2, 1}, {1, 2}}, Vector{1, -1}), 2.0);
}

TEST(SymEigTest, Identity) {
  const SymEigResult e = sym_eig(Matrix::identity(3));
  for (double v : e.eigenvalues) EXPECT_NEAR(v, 1.0, 1e-14);
}

TEST(SymEigTest, DiagonalGivesPermutedIdentityColumns) {
  const Matrix a{{-2, 0, 0}, {0, 0, 0}, {0, 0, 5}};
  const SymEigResult e = sym_eig(a);
  EXPECT_EQ(e.eigenvalues, (Vector{-2, 0, 5}));
  for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(std::abs(e.eigenvectors(j, j)), 1.0, 1e-14);
}

TEST(SymEigTest, TwoByTwo) {
  const SymEigResult e = sym_eig(Matrix{{2, 1}, {1, 2}});
  EXPECT_NEAR(e.eigenvalues[0], 1.0, 1e-14);
  EXPECT_NEAR(e.eigenvalues[1], 3.0, 1e-14);
}

TEST(SymEigTest, RejectsBadInput) {
  expect_error(ErrorCode::kInvalidInput, [] { sym_eig(Matrix(2, 3)); });
  expect_error(ErrorCode::kInvalidInput, [] { sym_eig(Matrix{{1, 2}, {0, 1}}); });
}

TEST(SymEigTest, RandomReconstructionAndOrthonormality) {
  Rng rng(11);
  for (std::size_t n = 1; n <= 20; ++n) {
    const Matrix a = random_symmetric(n, rng);
    const SymEigResult e = sym_eig(a);
    const double scale = frobenius_norm(a);
    EXPECT_LE(frobenius_norm(reconstruct(e) - a), 1e-8 * scale) << "n=" << n;
    for (std::size_t k = 1; k < n; ++k) EXPECT_LE(e.eigenvalues[k - 1], e.eigenvalues[k]);
    const Matrix gram = e.eigenvectors.transpose() * e.eigenvectors;
    EXPECT_LE(frobenius_norm(gram - Matrix::identity(n)), 1e-10) << "n=" << n;
    for (std::size_t j = 0; j < n; ++j) {
      const Vector v = e.eigenvectors.column(j);
      EXPECT_LE(norm2(a * v - e.eigenvalues[j] * v), 1e-8 * scale);
    }
  }
}

TEST(NullSpaceTest, SingleEquation) {
  const Matrix f = null_space_basis(Matrix{{1, 1}});
  ASSERT_EQ(f.rows(), 2u);
  ASSERT_EQ(f.cols(), 1u);
  EXPECT_NEAR(std::abs(f(0, 0)), 1 / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(f(0, 0), -f(1, 0), 1e-14);
}

TEST(NullSpaceTest, TrivialAndFullKernels) {
  EXPECT_EQ(null_space_basis(Matrix::identity(2)).cols(), 0u);
  const Matrix f = null_space_basis(Matrix(1, 3));
  ASSERT_EQ(f.cols(), 3u);
  EXPECT_LE(frobenius_norm(f.transpose() * f - Matrix::identity(3)), 1e-12);
}

TEST(NullSpaceTest, RandomRankDeficient) {
  Rng rng(5);
  for (std::size_t rows = 1; rows <= 5; ++rows) {
    for (std::size_t rank = 1; rank <= rows; ++rank) {
      const Matrix a = sample_normal_matrix(rows, rank, rng) * sample_normal_matrix(rank, 8, rng);
      const Matrix f = null_space_basis(a);
      EXPECT_EQ(f.cols(), 8 - rank);
      EXPECT_LE(frobenius_norm(a * f), 1e-10);
      EXPECT_LE(frobenius_norm(f.transpose() * f - Matrix::identity(f.cols())), 1e-10);
    }
  }
}

TEST(ParticularSolutionTest, Examples) {
  EXPECT_EQ(particular_solution(Matrix::identity(2), Vector{2, 3}), (Vector{2, 3}));
  const Vector x = particular_solution(Matrix{{1, 1}}, Vector{2});
  EXPECT_NEAR(x[0], 1.0, 1e-14);
  EXPECT_NEAR(x[1], 1.0, 1e-14);
  expect_error(ErrorCode::kInfeasibleEquality,
               [] { particular_solution(Matrix{{0, 0}}, Vector{1}); });
}

TEST(ParticularSolutionTest, RandomSystemsAreSolved) {
  Rng rng(9);
  for (int t = 0; t < 20; ++t) {
    const Matrix a = sample_normal_matrix(3, 7, rng);
    const Vector b = sample_normal(3, rng);
    const Vector x = particular_solution(a, b);
    EXPECT_LE(norm2(a * x - b), 1e-10 * (1 + norm2(b)));
    // Minimum norm: no component along the kernel.
    EXPECT_LE(norm2(transpose_times(null_space_basis(a), x)), 1e-10);
  }
}

}  // namespace
}  // namespace igd
