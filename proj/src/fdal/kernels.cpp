#include "fdal/kernels.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fdal {
namespace kernels {

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_threads(int k) {
#ifdef _OPENMP
  if (k > 0) omp_set_num_threads(k);
#else
  (void)k;
#endif
}

void spmv_serial(int rows, const long *row_ptr, const int *col_idx, const double *values,
                 const double *x, double *y) {
  for (int i = 0; i < rows; ++i) {
    double s = 0.0;
    for (long k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += values[k] * x[col_idx[k]];
    y[i] = s;
  }
}

void spmv(int rows, const long *row_ptr, const int *col_idx, const double *values,
          const double *x, double *y) {
#pragma omp parallel for schedule(static)
  for (int i = 0; i < rows; ++i) {
    double s = 0.0;
    for (long k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += values[k] * x[col_idx[k]];
    y[i] = s;
  }
}

void gemm_serial(int m, int k, int n, const double *a, const double *b, double *c) {
  for (int i = 0; i < m; ++i) {
    double *ci = c + (std::size_t)i * n;
    for (int j = 0; j < n; ++j) ci[j] = 0.0;
    const double *ai = a + (std::size_t)i * k;
    for (int p = 0; p < k; ++p) {
      const double aip = ai[p];
      const double *bp = b + (std::size_t)p * n;
      for (int j = 0; j < n; ++j) ci[j] += aip * bp[j];
    }
  }
}

void gemm(int m, int k, int n, const double *a, const double *b, double *c) {
#pragma omp parallel for schedule(static)
  for (int i = 0; i < m; ++i) {
    double *ci = c + (std::size_t)i * n;
    for (int j = 0; j < n; ++j) ci[j] = 0.0;
    const double *ai = a + (std::size_t)i * k;
    for (int p = 0; p < k; ++p) {
      const double aip = ai[p];
      const double *bp = b + (std::size_t)p * n;
      for (int j = 0; j < n; ++j) ci[j] += aip * bp[j];
    }
  }
}

void gemv_serial(int m, int n, const double *a, const double *x, double *y) {
  for (int i = 0; i < m; ++i) {
    const double *ai = a + (std::size_t)i * n;
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += ai[j] * x[j];
    y[i] = s;
  }
}

void gemv(int m, int n, const double *a, const double *x, double *y) {
#pragma omp parallel for schedule(static)
  for (int i = 0; i < m; ++i) {
    const double *ai = a + (std::size_t)i * n;
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += ai[j] * x[j];
    y[i] = s;
  }
}

void rank1_update_serial(double *a, int lda, int i0, int i1, int j0, int j1,
                         const double *col, const double *row) {
  for (int i = i0; i < i1; ++i) {
    double *ai = a + (std::size_t)i * lda;
    const double ci = col[i];
    for (int j = j0; j < j1; ++j) ai[j] -= ci * row[j];
  }
}

void rank1_update(double *a, int lda, int i0, int i1, int j0, int j1,
                  const double *col, const double *row) {
#pragma omp parallel for schedule(static)
  for (int i = i0; i < i1; ++i) {
    double *ai = a + (std::size_t)i * lda;
    const double ci = col[i];
    for (int j = j0; j < j1; ++j) ai[j] -= ci * row[j];
  }
}

}  // namespace kernels

double nrm2(const std::vector<double> &x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double nrm_inf(const std::vector<double> &x) {
  double s = 0.0;
  for (double v : x) s = std::max(s, std::abs(v));
  return s;
}

}  // namespace fdal
