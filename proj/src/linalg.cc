#include "igd/linalg.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "igd/error.h"

namespace igd {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput: return "invalid-input";
    case ErrorCode::kInvalidAnchor: return "invalid-anchor";
    case ErrorCode::kInfeasibleEquality: return "infeasible-equality";
    case ErrorCode::kContractViolation: return "contract-violation";
    case ErrorCode::kConfiguration: return "configuration";
    case ErrorCode::kNumerical: return "numerical";
    case ErrorCode::kGenerationFailure: return "generation-failure";
    case ErrorCode::kOracleUnreliable: return "oracle-unreliable";
    case ErrorCode::kDegenerateInstance: return "degenerate-instance";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

namespace {

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw Error(ErrorCode::kInvalidInput,
                std::string(what) + ": size mismatch " + std::to_string(a) +
                    " vs " + std::to_string(b));
  }
}

}  // namespace

bool Vector::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

Vector& Vector::operator+=(const Vector& other) {
  require_same_size(size(), other.size(), "vector +=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Vector& Vector::operator-=(const Vector& other) {
  require_same_size(size(), other.size(), "vector -=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Vector& Vector::operator*=(double scale) {
  for (double& v : data_) v *= scale;
  return *this;
}

Vector operator+(Vector a, const Vector& b) { return a += b; }
Vector operator-(Vector a, const Vector& b) { return a -= b; }
Vector operator*(double s, Vector a) { return a *= s; }
Vector operator*(Vector a, double s) { return a *= s; }

double dot(const Vector& a, const Vector& b) {
  require_same_size(a.size(), b.size(), "dot");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double norm2(const Vector& a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, const Vector& x, Vector& y) {
  require_same_size(x.size(), y.size(), "axpy");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  if (data_.size() != rows_ * cols_) {
    throw Error(ErrorCode::kInvalidInput, "matrix data does not match shape");
  }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) {
      throw Error(ErrorCode::kInvalidInput, "ragged matrix initializer");
    }
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Vector Matrix::row_vector(std::size_t i) const {
  auto r = row(i);
  return Vector(std::vector<double>(r.begin(), r.end()));
}

Vector Matrix::column(std::size_t j) const {
  Vector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool Matrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

Matrix& Matrix::operator+=(const Matrix& other) {
  require_same_size(rows_, other.rows_, "matrix += rows");
  require_same_size(cols_, other.cols_, "matrix += cols");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Matrix& Matrix::operator*=(double scale) {
  for (double& v : data_) v *= scale;
  return *this;
}

Vector operator*(const Matrix& a, const Vector& x) {
  require_same_size(a.cols(), x.size(), "matrix-vector product");
  Vector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double sum = 0.0;
    auto r = a.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) sum += r[j] * x[j];
    y[i] = sum;
  }
  return y;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  require_same_size(a.cols(), b.rows(), "matrix product");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  Matrix c = a;
  Matrix neg = b;
  neg *= -1.0;
  return c += neg;
}

Vector transpose_times(const Matrix& a, const Vector& x) {
  require_same_size(a.rows(), x.size(), "transpose product");
  Vector y(a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double xi = x[i];
    auto r = a.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) y[j] += r[j] * xi;
  }
  return y;
}

double frobenius_norm(const Matrix& a) {
  double sum = 0.0;
  for (double v : a.values()) sum += v * v;
  return std::sqrt(sum);
}

double quadratic_form(const Matrix& a, const Vector& v) {
  return dot(v, a * v);
}

SymEigResult sym_eig(const Matrix& input) {
  const std::size_t n = input.rows();
  if (input.cols() != n) {
    throw Error(ErrorCode::kInvalidInput, "sym_eig: matrix is not square");
  }
  const double scale = frobenius_norm(input);
  const double sym_tol = 1e-12 * std::max(1.0, scale);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(input(i, j) - input(j, i)) > sym_tol) {
        throw Error(ErrorCode::kInvalidInput, "sym_eig: matrix is not symmetric");
      }

  std::vector<double> a(input.values());
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
  auto vt = [&](std::size_t i, std::size_t j) -> double& { return v[i * n + j]; };

  const double off_tol = 1e-12 * scale;
  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += at(p, q) * at(p, q);
    if (std::sqrt(2.0 * off) <= off_tol) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double app = at(p, p);
        const double aqq = at(q, q);
        // Negligible after the first few sweeps: drop instead of rotating.
        const double g = 100.0 * std::abs(apq);
        if (sweep > 3 && std::abs(app) + g == std::abs(app) &&
            std::abs(aqq) + g == std::abs(aqq)) {
          at(p, q) = at(q, p) = 0.0;
          continue;
        }
        const double theta = 0.5 * (aqq - app) / apq;
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        at(p, p) = app - t * apq;
        at(q, q) = aqq + t * apq;
        at(p, q) = at(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = at(r, p);
          const double arq = at(r, q);
          const double new_rp = arp - s * (arq + tau * arp);
          const double new_rq = arq + s * (arp - tau * arq);
          at(r, p) = at(p, r) = new_rp;
          at(r, q) = at(q, r) = new_rq;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const double vrp = vt(r, p);
          const double vrq = vt(r, q);
          vt(r, p) = vrp - s * (vrq + tau * vrp);
          vt(r, q) = vrq + s * (vrp - tau * vrq);
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a[i * n + i] < a[j * n + j];
  });

  SymEigResult result{Vector(n), Matrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    result.eigenvalues[k] = a[src * n + src];
    for (std::size_t r = 0; r < n; ++r) result.eigenvectors(r, k) = v[r * n + src];
  }
  return result;
}

PivotedQr pivoted_qr(const Matrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  PivotedQr out{Matrix::identity(m), a, std::vector<std::size_t>(n), 0};
  std::iota(out.perm.begin(), out.perm.end(), 0);
  Matrix& r = out.r;
  Matrix& q = out.q;

  const std::size_t steps = std::min(m, n);
  std::vector<double> v(m);
  for (std::size_t k = 0; k < steps; ++k) {
    // Pivot: the remaining column with the largest trailing norm.
    std::size_t best = k;
    double best_norm = -1.0;
    for (std::size_t j = k; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < m; ++i) s += r(i, j) * r(i, j);
      if (s > best_norm) {
        best_norm = s;
        best = j;
      }
    }
    if (best != k) {
      for (std::size_t i = 0; i < m; ++i) std::swap(r(i, k), r(i, best));
      std::swap(out.perm[k], out.perm[best]);
    }

    const double xnorm = std::sqrt(best_norm);
    if (xnorm == 0.0) break;
    const double alpha = r(k, k) > 0.0 ? -xnorm : xnorm;
    double vnorm2 = 0.0;
    for (std::size_t i = k; i < m; ++i) {
      v[i] = r(i, k);
      if (i == k) v[i] -= alpha;
      vnorm2 += v[i] * v[i];
    }
    if (vnorm2 == 0.0) continue;
    const double inv = 1.0 / std::sqrt(vnorm2);
    for (std::size_t i = k; i < m; ++i) v[i] *= inv;

    for (std::size_t j = k; j < n; ++j) {
      double proj = 0.0;
      for (std::size_t i = k; i < m; ++i) proj += v[i] * r(i, j);
      proj *= 2.0;
      for (std::size_t i = k; i < m; ++i) r(i, j) -= proj * v[i];
    }
    for (std::size_t i = 0; i < m; ++i) {
      double proj = 0.0;
      for (std::size_t l = k; l < m; ++l) proj += q(i, l) * v[l];
      proj *= 2.0;
      for (std::size_t l = k; l < m; ++l) q(i, l) -= proj * v[l];
    }
    r(k, k) = alpha;
    for (std::size_t i = k + 1; i < m; ++i) r(i, k) = 0.0;
  }

  if (steps > 0) {
    const double lead = std::abs(r(0, 0));
    if (lead > 0.0) {
      const double tol = 1e-10 * lead;
      while (out.rank < steps && std::abs(r(out.rank, out.rank)) > tol) ++out.rank;
    }
  }
  return out;
}

Matrix null_space_basis(const Matrix& a) {
  const std::size_t n = a.cols();
  const PivotedQr qr = pivoted_qr(a.transpose());
  const std::size_t k = qr.rank;
  Matrix basis(n, n - k);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = k; j < n; ++j) basis(i, j - k) = qr.q(i, j);
  return basis;
}

Vector particular_solution(const Matrix& a, const Vector& b) {
  require_same_size(a.rows(), b.size(), "particular_solution");
  const std::size_t n = a.cols();
  const PivotedQr qr = pivoted_qr(a.transpose());
  const std::size_t k = qr.rank;

  // P^T A = R^T Q^T; solve the leading k rows of R^T y = P^T b by forward
  // substitution and take x = Q_k y, the minimum-norm candidate.
  Vector y(k);
  for (std::size_t i = 0; i < k; ++i) {
    double s = b[qr.perm[i]];
    for (std::size_t j = 0; j < i; ++j) s -= qr.r(j, i) * y[j];
    y[i] = s / qr.r(i, i);
  }
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < k; ++j) s += qr.q(i, j) * y[j];
    x[i] = s;
  }

  const double residual = norm2(a * x - b);
  if (!(residual <= 1e-10 * (1.0 + norm2(b)))) {
    throw Error(ErrorCode::kInfeasibleEquality,
                "Ax = b is inconsistent (residual " + std::to_string(residual) + ")");
  }
  return x;
}

}  // namespace igd
