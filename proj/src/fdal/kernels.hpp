#ifndef FDAL_KERNELS_HPP
#define FDAL_KERNELS_HPP

#include <cstddef>
#include <vector>

namespace fdal {
namespace kernels {

// Data-parallel inner kernels. Each kernel ships in two flavors: the OpenMP
// one used by the library and a *_serial reference kept for testing and for
// the kernel benchmark. Both flavors accumulate every output element in the
// same order, so results are bit-identical regardless of thread count.

int max_threads();
void set_threads(int k);

// y = A x for CSR (row_ptr/col_idx/values), one row per output element.
void spmv(int rows, const long *row_ptr, const int *col_idx, const double *values,
          const double *x, double *y);
void spmv_serial(int rows, const long *row_ptr, const int *col_idx, const double *values,
                 const double *x, double *y);

// C = A * B, row-major dense, C is m x n, A is m x k, B is k x n.
void gemm(int m, int k, int n, const double *a, const double *b, double *c);
void gemm_serial(int m, int k, int n, const double *a, const double *b, double *c);

// y = A x, row-major dense m x n.
void gemv(int m, int n, const double *a, const double *x, double *y);
void gemv_serial(int m, int n, const double *a, const double *x, double *y);

// Trailing-submatrix update of right-looking LU/Cholesky:
//   A[i][j] -= col[i] * row[j]  for i in [i0,i1), j in [j0,j1)
// with A row-major and leading dimension lda. Parallel over i.
void rank1_update(double *a, int lda, int i0, int i1, int j0, int j1,
                  const double *col, const double *row);
void rank1_update_serial(double *a, int lda, int i0, int i1, int j0, int j1,
                         const double *col, const double *row);

}  // namespace kernels

// Small serial vector helpers shared across the library.
inline double dot(const std::vector<double> &x, const std::vector<double> &y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double nrm2(const std::vector<double> &x);
double nrm_inf(const std::vector<double> &x);

inline void axpy(double alpha, const std::vector<double> &x, std::vector<double> &y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline void scal(double alpha, std::vector<double> &x) {
  for (auto &v : x) v *= alpha;
}

}  // namespace fdal

#endif
