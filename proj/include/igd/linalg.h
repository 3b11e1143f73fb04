#ifndef IGD_LINALG_H_
#define IGD_LINALG_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace igd {

// Dense real vector. Entries are expected to stay finite; the optimizers and
// the projection check this at their boundaries and raise kNumerical or
// kInvalidInput instead of propagating NaN/Inf.
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t size, double value = 0.0) : data_(size, value) {}
  Vector(std::initializer_list<double> values) : data_(values) {}
  explicit Vector(std::vector<double> values) : data_(std::move(values)) {}

  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::span<double> span() { return data_; }
  std::span<const double> span() const { return data_; }
  const std::vector<double>& values() const { return data_; }

  auto begin() { return data_.begin(); }
  auto end() { return data_.end(); }
  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

  bool all_finite() const;

  Vector& operator+=(const Vector& other);
  Vector& operator-=(const Vector& other);
  Vector& operator*=(double scale);

  friend bool operator==(const Vector&, const Vector&) = default;

 private:
  std::vector<double> data_;
};

Vector operator+(Vector a, const Vector& b);
Vector operator-(Vector a, const Vector& b);
Vector operator*(double s, Vector a);
Vector operator*(Vector a, double s);

double dot(const Vector& a, const Vector& b);
double norm2(const Vector& a);
// y += alpha * x
void axpy(double alpha, const Vector& x, Vector& y);

// Row-major dense matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double value = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, value) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  Vector row_vector(std::size_t i) const;
  Vector column(std::size_t j) const;
  const std::vector<double>& values() const { return data_; }

  Matrix transpose() const;
  bool all_finite() const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator*=(double scale);

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Vector operator*(const Matrix& a, const Vector& x);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
// a^T x without forming the transpose.
Vector transpose_times(const Matrix& a, const Vector& x);
double frobenius_norm(const Matrix& a);
// v^T A v
double quadratic_form(const Matrix& a, const Vector& v);

struct SymEigResult {
  Vector eigenvalues;   // ascending
  Matrix eigenvectors;  // column j pairs with eigenvalues[j]
};

// Cyclic Jacobi rotations. Sweeps until the off-diagonal Frobenius norm drops
// below 1e-12 * ||A||_F. Throws kInvalidInput on non-square input or when
// |A - A^T| exceeds 1e-12 * max(1, ||A||_F) anywhere.
SymEigResult sym_eig(const Matrix& a);

// Householder QR with column pivoting: A P = Q R, Q square orthogonal.
struct PivotedQr {
  Matrix q;                        // rows x rows
  Matrix r;                        // rows x cols, upper trapezoidal
  std::vector<std::size_t> perm;   // column j of A P is column perm[j] of A
  std::size_t rank = 0;            // |R_jj| > 1e-10 * |R_00|
};
PivotedQr pivoted_qr(const Matrix& a);

// Orthonormal basis of ker(A), one basis vector per column. The returned
// matrix has A.cols() rows and A.cols() - rank(A) columns.
Matrix null_space_basis(const Matrix& a);

// Minimum-norm x with Ax = b. Throws kInfeasibleEquality when the residual
// exceeds 1e-10 * (1 + ||b||).
Vector particular_solution(const Matrix& a, const Vector& b);

}  // namespace igd

#endif  // IGD_LINALG_H_
