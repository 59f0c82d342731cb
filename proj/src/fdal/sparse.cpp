#include "fdal/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fdal/kernels.hpp"

namespace fdal {

SparseMatrix SparseMatrix::identity(int n) {
  SparseMatrix a(n, n);
  a.col_idx.resize(n);
  a.values.assign(n, 1.0);
  for (int i = 0; i < n; ++i) {
    a.row_ptr[i + 1] = i + 1;
    a.col_idx[i] = i;
  }
  return a;
}

SparseMatrix SparseMatrix::from_triplets(int rows, int cols, const std::vector<int> &ti,
                                         const std::vector<int> &tj,
                                         const std::vector<double> &tv) {
  SparseMatrix a(rows, cols);
  const std::size_t nt = ti.size();
  std::vector<long> count(rows + 1, 0);
  for (std::size_t k = 0; k < nt; ++k) count[ti[k] + 1]++;
  for (int i = 0; i < rows; ++i) count[i + 1] += count[i];
  std::vector<int> cj(nt);
  std::vector<double> cv(nt);
  {
    std::vector<long> next(count.begin(), count.end() - 1);
    for (std::size_t k = 0; k < nt; ++k) {
      long p = next[ti[k]]++;
      cj[p] = tj[k];
      cv[p] = tv[k];
    }
  }
  // Sort each row by column (stable so duplicate accumulation order is the
  // insertion order) and combine duplicates.
  a.row_ptr[0] = 0;
  for (int i = 0; i < rows; ++i) {
    long b = count[i], e = count[i + 1];
    std::vector<long> perm(e - b);
    std::iota(perm.begin(), perm.end(), b);
    std::stable_sort(perm.begin(), perm.end(),
                     [&](long x, long y) { return cj[x] < cj[y]; });
    int last_col = -1;
    for (long p : perm) {
      if (cj[p] == last_col) {
        a.values.back() += cv[p];
      } else {
        a.col_idx.push_back(cj[p]);
        a.values.push_back(cv[p]);
        last_col = cj[p];
      }
    }
    a.row_ptr[i + 1] = (long)a.col_idx.size();
  }
  a.compress();
  return a;
}

void SparseMatrix::compress(double tol) {
  long w = 0;
  long start = 0;
  for (int i = 0; i < rows; ++i) {
    long end = row_ptr[i + 1];
    for (long k = start; k < end; ++k) {
      if (std::abs(values[k]) > tol || (tol == 0.0 && values[k] != 0.0)) {
        col_idx[w] = col_idx[k];
        values[w] = values[k];
        ++w;
      }
    }
    start = end;
    row_ptr[i + 1] = w;
  }
  col_idx.resize(w);
  values.resize(w);
}

void spmv(const SparseMatrix &A, const std::vector<double> &x, std::vector<double> &y) {
  if ((int)x.size() != A.cols) throw DimensionMismatch("spmv: x size mismatch");
  y.resize(A.rows);
  kernels::spmv(A.rows, A.row_ptr.data(), A.col_idx.data(), A.values.data(), x.data(),
                y.data());
}

std::vector<double> spmv(const SparseMatrix &A, const std::vector<double> &x) {
  std::vector<double> y;
  spmv(A, x, y);
  return y;
}

std::vector<double> SparseMatrix::multiply(const std::vector<double> &x) const {
  return fdal::spmv(*this, x);
}

std::vector<double> SparseMatrix::multiply_transpose(const std::vector<double> &x) const {
  if ((int)x.size() != rows) throw DimensionMismatch("multiply_transpose: x size mismatch");
  std::vector<double> y(cols, 0.0);
  for (int i = 0; i < rows; ++i)
    for (long k = row_ptr[i]; k < row_ptr[i + 1]; ++k) y[col_idx[k]] += values[k] * x[i];
  return y;
}

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix t(cols, rows);
  t.col_idx.resize(nnz());
  t.values.resize(nnz());
  std::vector<long> count(cols + 1, 0);
  for (long k = 0; k < nnz(); ++k) count[col_idx[k] + 1]++;
  for (int j = 0; j < cols; ++j) count[j + 1] += count[j];
  t.row_ptr.assign(count.begin(), count.end());
  std::vector<long> next(count.begin(), count.end() - 1);
  for (int i = 0; i < rows; ++i)
    for (long k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
      long p = next[col_idx[k]]++;
      t.col_idx[p] = i;
      t.values[p] = values[k];
    }
  return t;
}

SparseMatrix SparseMatrix::scaled(double alpha) const {
  SparseMatrix a = *this;
  for (auto &v : a.values) v *= alpha;
  return a;
}

SparseMatrix SparseMatrix::add(const SparseMatrix &other, double alpha) const {
  if (rows != other.rows || cols != other.cols)
    throw DimensionMismatch("SparseMatrix::add shape mismatch");
  SparseMatrix r(rows, cols);
  for (int i = 0; i < rows; ++i) {
    long ka = row_ptr[i], ea = row_ptr[i + 1];
    long kb = other.row_ptr[i], eb = other.row_ptr[i + 1];
    while (ka < ea || kb < eb) {
      int ca = ka < ea ? col_idx[ka] : cols;
      int cb = kb < eb ? other.col_idx[kb] : cols;
      if (ca < cb) {
        r.col_idx.push_back(ca);
        r.values.push_back(values[ka++]);
      } else if (cb < ca) {
        r.col_idx.push_back(cb);
        r.values.push_back(alpha * other.values[kb++]);
      } else {
        r.col_idx.push_back(ca);
        r.values.push_back(values[ka++] + alpha * other.values[kb++]);
      }
    }
    r.row_ptr[i + 1] = (long)r.col_idx.size();
  }
  return r;
}

SparseMatrix SparseMatrix::multiply(const SparseMatrix &other) const {
  if (cols != other.rows) throw DimensionMismatch("SparseMatrix::multiply shape mismatch");
  SparseMatrix r(rows, other.cols);
  std::vector<double> acc(other.cols, 0.0);
  std::vector<int> marker(other.cols, -1);
  std::vector<int> cols_in_row;
  for (int i = 0; i < rows; ++i) {
    cols_in_row.clear();
    for (long k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
      const int p = col_idx[k];
      const double v = values[k];
      for (long kb = other.row_ptr[p]; kb < other.row_ptr[p + 1]; ++kb) {
        int j = other.col_idx[kb];
        if (marker[j] != i) {
          marker[j] = i;
          acc[j] = 0.0;
          cols_in_row.push_back(j);
        }
        acc[j] += v * other.values[kb];
      }
    }
    std::sort(cols_in_row.begin(), cols_in_row.end());
    for (int j : cols_in_row) {
      r.col_idx.push_back(j);
      r.values.push_back(acc[j]);
    }
    r.row_ptr[i + 1] = (long)r.col_idx.size();
  }
  return r;
}

SparseMatrix SparseMatrix::scale_columns(const std::vector<double> &d) const {
  if ((int)d.size() != cols) throw DimensionMismatch("scale_columns size mismatch");
  SparseMatrix a = *this;
  for (long k = 0; k < a.nnz(); ++k) a.values[k] *= d[a.col_idx[k]];
  return a;
}

std::vector<double> SparseMatrix::diagonal() const {
  std::vector<double> d(std::min(rows, cols), 0.0);
  for (int i = 0; i < (int)d.size(); ++i)
    for (long k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
      if (col_idx[k] == i) d[i] = values[k];
  return d;
}

double SparseMatrix::entry(int i, int j) const {
  for (long k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
    if (col_idx[k] == j) return values[k];
  return 0.0;
}

double SparseMatrix::norm_max() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

bool SparseMatrix::is_symmetric(double tol) const {
  if (rows != cols) return false;
  SparseMatrix t = transpose();
  SparseMatrix d = add(t, -1.0);
  return d.norm_max() <= tol;
}

SparseMatrix sparse_triple_diag(const SparseMatrix &Ct, const std::vector<double> &d,
                                const SparseMatrix &C) {
  if (Ct.cols != (int)d.size() || (int)d.size() != C.rows)
    throw DimensionMismatch("sparse_triple_diag: inner dimensions must match");
  std::vector<double> dinv(d.size());
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (!(d[k] > 0.0)) throw NotSPD("sparse_triple_diag: nonpositive diagonal entry");
    dinv[k] = 1.0 / d[k];
  }
  return Ct.scale_columns(dinv).multiply(C);
}

}  // namespace fdal
