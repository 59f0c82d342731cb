#ifndef FDAL_SPARSE_HPP
#define FDAL_SPARSE_HPP

#include <vector>

#include "fdal/errors.hpp"

namespace fdal {

/// Compressed sparse row matrix. After finalize() column indices are strictly
/// increasing within each row and explicit zeros are dropped.
class SparseMatrix {
 public:
  int rows = 0;
  int cols = 0;
  std::vector<long> row_ptr;     // size rows+1
  std::vector<int> col_idx;      // size nnz
  std::vector<double> values;    // size nnz

  SparseMatrix() = default;
  SparseMatrix(int r, int c) : rows(r), cols(c), row_ptr(r + 1, 0) {}

  long nnz() const { return row_ptr.empty() ? 0 : row_ptr.back(); }

  static SparseMatrix identity(int n);

  /// Build from coordinate triplets; duplicates are summed in sorted order
  /// (deterministic for a fixed triplet multiset), zeros dropped.
  static SparseMatrix from_triplets(int rows, int cols,
                                    const std::vector<int> &ti,
                                    const std::vector<int> &tj,
                                    const std::vector<double> &tv);

  std::vector<double> multiply(const std::vector<double> &x) const;          // A x
  std::vector<double> multiply_transpose(const std::vector<double> &x) const;  // A^T x

  SparseMatrix transpose() const;
  SparseMatrix scaled(double alpha) const;

  /// this + alpha * other (same shape).
  SparseMatrix add(const SparseMatrix &other, double alpha = 1.0) const;

  /// General CSR product this * other.
  SparseMatrix multiply(const SparseMatrix &other) const;

  /// Right-scale columns by d: A * diag(d).
  SparseMatrix scale_columns(const std::vector<double> &d) const;

  std::vector<double> diagonal() const;
  double entry(int i, int j) const;  // 0 if not stored
  double norm_max() const;

  /// Drops explicit zeros below |v| <= tol and re-sorts rows.
  void compress(double tol = 0.0);

  bool is_symmetric(double tol) const;
};

/// y = A x into a preallocated vector.
void spmv(const SparseMatrix &A, const std::vector<double> &x, std::vector<double> &y);

/// spmv convenience wrapper returning a fresh vector.
std::vector<double> spmv(const SparseMatrix &A, const std::vector<double> &x);

/// Ct * diag(d)^{-1} * C as CSR. d must be strictly positive.
SparseMatrix sparse_triple_diag(const SparseMatrix &Ct, const std::vector<double> &d,
                                const SparseMatrix &C);

}  // namespace fdal

#endif
