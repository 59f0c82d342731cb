#ifndef FDAL_DENSE_HPP
#define FDAL_DENSE_HPP

#include <vector>

#include "fdal/errors.hpp"
#include "fdal/sparse.hpp"

namespace fdal {

/// Row-major dense matrix.
class DenseMatrix {
 public:
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(int r, int c, double fill = 0.0)
      : rows(r), cols(c), data((std::size_t)r * c, fill) {}

  double &operator()(int i, int j) { return data[(std::size_t)i * cols + j]; }
  double operator()(int i, int j) const { return data[(std::size_t)i * cols + j]; }

  static DenseMatrix identity(int n);
  static DenseMatrix from_sparse(const SparseMatrix &a);

  DenseMatrix transpose() const;
  DenseMatrix multiply(const DenseMatrix &other) const;
  std::vector<double> multiply(const std::vector<double> &x) const;
  DenseMatrix add(const DenseMatrix &other, double alpha = 1.0) const;
  DenseMatrix scaled(double alpha) const;

  double norm_max() const;
  double norm_frobenius() const;
  bool is_symmetric(double rel_tol) const;
  void symmetrize();  // (A + A^T)/2 in place
};

/// Partial-pivoted LU factorization handle.
class LuFactorization {
 public:
  explicit LuFactorization(DenseMatrix m);

  std::vector<double> solve(const std::vector<double> &b) const;
  /// Solve with a matrix right-hand side (column-wise).
  DenseMatrix solve(const DenseMatrix &b) const;
  double determinant() const;
  int size() const { return lu_.rows; }

 private:
  DenseMatrix lu_;
  std::vector<int> piv_;
  int sign_ = 1;
};

/// Cholesky factorization (lower triangular) of an SPD matrix.
class CholeskyFactorization {
 public:
  explicit CholeskyFactorization(DenseMatrix m);

  std::vector<double> solve(const std::vector<double> &b) const;
  /// Forward substitution only: solve L y = b.
  std::vector<double> solve_lower(const std::vector<double> &b) const;
  /// Back substitution only: solve L^T y = b.
  std::vector<double> solve_lower_transpose(const std::vector<double> &b) const;
  const DenseMatrix &factor() const { return l_; }
  int size() const { return l_.rows; }

 private:
  DenseMatrix l_;
};

}  // namespace fdal

#endif
