#include <doctest.h>

#include <random>

#include "fdal/kernels.hpp"
#include "fdal/sparse.hpp"

using namespace fdal;

namespace {

SparseMatrix random_sparse(int rows, int cols, double density, std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::uniform_real_distribution<double> pick(0.0, 1.0);
  std::vector<int> ti, tj;
  std::vector<double> tv;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      if (pick(rng) < density) {
        ti.push_back(i);
        tj.push_back(j);
        tv.push_back(val(rng));
      }
  return SparseMatrix::from_triplets(rows, cols, ti, tj, tv);
}

}  // namespace

TEST_SUITE_BEGIN("kernels");

TEST_CASE("omp kernels match their serial references bit for bit") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);

  SUBCASE("spmv") {
    SparseMatrix a = random_sparse(83, 61, 0.15, rng);
    std::vector<double> x(61), y1(83), y2(83);
    for (auto &v : x) v = dist(rng);
    kernels::spmv_serial(a.rows, a.row_ptr.data(), a.col_idx.data(), a.values.data(), x.data(),
                         y1.data());
    kernels::spmv(a.rows, a.row_ptr.data(), a.col_idx.data(), a.values.data(), x.data(),
                  y2.data());
    for (int i = 0; i < 83; ++i) CHECK(y1[i] == y2[i]);
  }

  SUBCASE("gemm and gemv") {
    const int m = 37, k = 29, n = 41;
    std::vector<double> a(m * k), b(k * n), c1(m * n), c2(m * n);
    for (auto &v : a) v = dist(rng);
    for (auto &v : b) v = dist(rng);
    kernels::gemm_serial(m, k, n, a.data(), b.data(), c1.data());
    kernels::gemm(m, k, n, a.data(), b.data(), c2.data());
    for (int i = 0; i < m * n; ++i) CHECK(c1[i] == c2[i]);

    std::vector<double> x(k), y1(m), y2(m);
    for (auto &v : x) v = dist(rng);
    kernels::gemv_serial(m, k, a.data(), x.data(), y1.data());
    kernels::gemv(m, k, a.data(), x.data(), y2.data());
    for (int i = 0; i < m; ++i) CHECK(y1[i] == y2[i]);
  }

  SUBCASE("rank1_update") {
    const int n = 50;
    std::vector<double> a1(n * n), a2, col(n), row(n);
    for (auto &v : a1) v = dist(rng);
    a2 = a1;
    for (auto &v : col) v = dist(rng);
    for (auto &v : row) v = dist(rng);
    kernels::rank1_update_serial(a1.data(), n, 3, n, 5, n, col.data(), row.data());
    kernels::rank1_update(a2.data(), n, 3, n, 5, n, col.data(), row.data());
    for (int i = 0; i < n * n; ++i) CHECK(a1[i] == a2[i]);
  }
}

TEST_CASE("spmv is deterministic across repeated runs") {
  std::mt19937_64 rng(11);
  SparseMatrix a = random_sparse(200, 200, 0.05, rng);
  std::vector<double> x(200);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (auto &v : x) v = dist(rng);
  const std::vector<double> y1 = spmv(a, x);
  const std::vector<double> y2 = spmv(a, x);
  for (int i = 0; i < 200; ++i) CHECK(y1[i] == y2[i]);
}

TEST_SUITE_END();
