#include "fdal/dense.hpp"

#include <algorithm>
#include <cmath>

#include "fdal/kernels.hpp"

namespace fdal {

DenseMatrix DenseMatrix::identity(int n) {
  DenseMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::from_sparse(const SparseMatrix &a) {
  DenseMatrix m(a.rows, a.cols);
  for (int i = 0; i < a.rows; ++i)
    for (long k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
      m(i, a.col_idx[k]) += a.values[k];
  return m;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols, rows);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
  return t;
}

DenseMatrix DenseMatrix::multiply(const DenseMatrix &other) const {
  if (cols != other.rows) throw DimensionMismatch("DenseMatrix::multiply shape mismatch");
  DenseMatrix c(rows, other.cols);
  kernels::gemm(rows, cols, other.cols, data.data(), other.data.data(), c.data.data());
  return c;
}

std::vector<double> DenseMatrix::multiply(const std::vector<double> &x) const {
  if ((int)x.size() != cols) throw DimensionMismatch("DenseMatrix::multiply x mismatch");
  std::vector<double> y(rows);
  kernels::gemv(rows, cols, data.data(), x.data(), y.data());
  return y;
}

DenseMatrix DenseMatrix::add(const DenseMatrix &other, double alpha) const {
  if (rows != other.rows || cols != other.cols)
    throw DimensionMismatch("DenseMatrix::add shape mismatch");
  DenseMatrix c = *this;
  for (std::size_t k = 0; k < data.size(); ++k) c.data[k] += alpha * other.data[k];
  return c;
}

DenseMatrix DenseMatrix::scaled(double alpha) const {
  DenseMatrix c = *this;
  for (auto &v : c.data) v *= alpha;
  return c;
}

double DenseMatrix::norm_max() const {
  double m = 0.0;
  for (double v : data) m = std::max(m, std::abs(v));
  return m;
}

double DenseMatrix::norm_frobenius() const {
  double s = 0.0;
  for (double v : data) s += v * v;
  return std::sqrt(s);
}

bool DenseMatrix::is_symmetric(double rel_tol) const {
  if (rows != cols) return false;
  const double scale = norm_max();
  for (int i = 0; i < rows; ++i)
    for (int j = i + 1; j < cols; ++j)
      if (std::abs((*this)(i, j) - (*this)(j, i)) > rel_tol * scale) return false;
  return true;
}

void DenseMatrix::symmetrize() {
  for (int i = 0; i < rows; ++i)
    for (int j = i + 1; j < cols; ++j) {
      double v = 0.5 * ((*this)(i, j) + (*this)(j, i));
      (*this)(i, j) = v;
      (*this)(j, i) = v;
    }
}

LuFactorization::LuFactorization(DenseMatrix m) : lu_(std::move(m)) {
  if (lu_.rows != lu_.cols) throw DimensionMismatch("LU requires a square matrix");
  const int n = lu_.rows;
  piv_.resize(n);
  const double pivot_floor = 1e-14 * lu_.norm_max();
  double *a = lu_.data.data();
  for (int k = 0; k < n; ++k) {
    int p = k;
    double best = std::abs(a[(std::size_t)k * n + k]);
    for (int i = k + 1; i < n; ++i) {
      double v = std::abs(a[(std::size_t)i * n + k]);
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (best < pivot_floor || best == 0.0)
      throw SingularMatrix("LU pivot below threshold at column " + std::to_string(k));
    piv_[k] = p;
    if (p != k) {
      for (int j = 0; j < n; ++j)
        std::swap(a[(std::size_t)k * n + j], a[(std::size_t)p * n + j]);
      sign_ = -sign_;
    }
    const double inv = 1.0 / a[(std::size_t)k * n + k];
    for (int i = k + 1; i < n; ++i) a[(std::size_t)i * n + k] *= inv;
    if (k + 1 < n) {
      // trailing update A[i][j] -= L[i][k] * U[k][j], one fixed k at a time
      std::vector<double> colk(n);
      for (int i = k + 1; i < n; ++i) colk[i] = a[(std::size_t)i * n + k];
      kernels::rank1_update(a, n, k + 1, n, k + 1, n, colk.data(), a + (std::size_t)k * n);
    }
  }
}

std::vector<double> LuFactorization::solve(const std::vector<double> &b) const {
  const int n = lu_.rows;
  if ((int)b.size() != n) throw DimensionMismatch("LU solve rhs mismatch");
  std::vector<double> x = b;
  for (int k = 0; k < n; ++k)
    if (piv_[k] != k) std::swap(x[k], x[piv_[k]]);
  const double *a = lu_.data.data();
  for (int i = 1; i < n; ++i) {
    double s = x[i];
    for (int j = 0; j < i; ++j) s -= a[(std::size_t)i * n + j] * x[j];
    x[i] = s;
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = x[i];
    for (int j = i + 1; j < n; ++j) s -= a[(std::size_t)i * n + j] * x[j];
    x[i] = s / a[(std::size_t)i * n + i];
  }
  return x;
}

DenseMatrix LuFactorization::solve(const DenseMatrix &b) const {
  const int n = lu_.rows;
  if (b.rows != n) throw DimensionMismatch("LU solve rhs mismatch");
  // Work on the transpose so each RHS column is contiguous.
  DenseMatrix bt = b.transpose();
#pragma omp parallel for schedule(static)
  for (int c = 0; c < bt.rows; ++c) {
    std::vector<double> col(bt.data.begin() + (std::size_t)c * n,
                            bt.data.begin() + (std::size_t)(c + 1) * n);
    col = solve(col);
    std::copy(col.begin(), col.end(), bt.data.begin() + (std::size_t)c * n);
  }
  return bt.transpose();
}

double LuFactorization::determinant() const {
  double d = sign_;
  for (int i = 0; i < lu_.rows; ++i) d *= lu_(i, i);
  return d;
}

CholeskyFactorization::CholeskyFactorization(DenseMatrix m) : l_(std::move(m)) {
  if (l_.rows != l_.cols) throw DimensionMismatch("Cholesky requires a square matrix");
  const int n = l_.rows;
  double *a = l_.data.data();
  for (int k = 0; k < n; ++k) {
    double d = a[(std::size_t)k * n + k];
    if (!(d > 0.0)) throw NotSPD("Cholesky failed at row " + std::to_string(k));
    d = std::sqrt(d);
    a[(std::size_t)k * n + k] = d;
    const double inv = 1.0 / d;
    for (int i = k + 1; i < n; ++i) a[(std::size_t)i * n + k] *= inv;
    if (k + 1 < n) {
      std::vector<double> colk(n);
      for (int i = k + 1; i < n; ++i) colk[i] = a[(std::size_t)i * n + k];
      // only the lower triangle is referenced afterwards
      for (int i = k + 1; i < n; ++i) {
        double *ai = a + (std::size_t)i * n;
        const double ci = colk[i];
        for (int j = k + 1; j <= i; ++j) ai[j] -= ci * colk[j];
      }
    }
  }
  // zero the strictly upper part so factor() is a clean L
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) a[(std::size_t)i * n + j] = 0.0;
}

std::vector<double> CholeskyFactorization::solve_lower(const std::vector<double> &b) const {
  const int n = l_.rows;
  std::vector<double> x = b;
  const double *a = l_.data.data();
  for (int i = 0; i < n; ++i) {
    double s = x[i];
    for (int j = 0; j < i; ++j) s -= a[(std::size_t)i * n + j] * x[j];
    x[i] = s / a[(std::size_t)i * n + i];
  }
  return x;
}

std::vector<double> CholeskyFactorization::solve_lower_transpose(
    const std::vector<double> &b) const {
  const int n = l_.rows;
  std::vector<double> x = b;
  const double *a = l_.data.data();
  for (int i = n - 1; i >= 0; --i) {
    double s = x[i];
    for (int j = i + 1; j < n; ++j) s -= a[(std::size_t)j * n + i] * x[j];
    x[i] = s / a[(std::size_t)i * n + i];
  }
  return x;
}

std::vector<double> CholeskyFactorization::solve(const std::vector<double> &b) const {
  if ((int)b.size() != l_.rows) throw DimensionMismatch("Cholesky solve rhs mismatch");
  return solve_lower_transpose(solve_lower(b));
}

}  // namespace fdal
