// Compares the OpenMP kernels against their serial reference implementations:
// same inputs, timed, and checked for bit-identical output.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "fdal/dense.hpp"
#include "fdal/kernels.hpp"
#include "fdal/mesh.hpp"
#include "fdal/assembly.hpp"

using namespace fdal;

namespace {

double now() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

template <typename F>
double time_best_of(int reps, F fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const double t0 = now();
    fn();
    best = std::min(best, now() - t0);
  }
  return best;
}

bool bit_equal(const std::vector<double> &a, const std::vector<double> &b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

}  // namespace

int main(int argc, char **argv) {
  int threads = 0;
  if (argc > 1) threads = std::atoi(argv[1]);
  if (threads > 0) kernels::set_threads(threads);
  std::printf("threads: %d\n", kernels::max_threads());
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);

  // spmv on a 2D Laplacian-like stencil
  {
    const int n = 512;
    Mesh mesh = build_box_mesh({0, 0}, {1, 1}, n);
    FeSpace space = make_space(std::make_shared<Mesh>(mesh), true);
    SparseMatrix a = assemble_stiffness(space, 1.0, true);
    std::vector<double> x(a.cols), y1(a.rows), y2(a.rows);
    for (auto &v : x) v = dist(rng);
    const double ts = time_best_of(3, [&] {
      kernels::spmv_serial(a.rows, a.row_ptr.data(), a.col_idx.data(), a.values.data(),
                           x.data(), y1.data());
    });
    const double tp = time_best_of(3, [&] {
      kernels::spmv(a.rows, a.row_ptr.data(), a.col_idx.data(), a.values.data(), x.data(),
                    y2.data());
    });
    std::printf("spmv      n=%-8d serial %8.3f ms   omp %8.3f ms   speedup %5.2fx   %s\n",
                a.rows, ts * 1e3, tp * 1e3, ts / tp, bit_equal(y1, y2) ? "bit-equal" : "MISMATCH");
  }

  // dense gemm
  {
    const int n = 384;
    std::vector<double> a(n * n), b(n * n), c1(n * n), c2(n * n);
    for (auto &v : a) v = dist(rng);
    for (auto &v : b) v = dist(rng);
    const double ts = time_best_of(3, [&] {
      kernels::gemm_serial(n, n, n, a.data(), b.data(), c1.data());
    });
    const double tp =
        time_best_of(3, [&] { kernels::gemm(n, n, n, a.data(), b.data(), c2.data()); });
    std::printf("gemm      n=%-8d serial %8.3f ms   omp %8.3f ms   speedup %5.2fx   %s\n", n,
                ts * 1e3, tp * 1e3, ts / tp, bit_equal(c1, c2) ? "bit-equal" : "MISMATCH");
  }

  // rank-1 trailing update (the LU inner kernel)
  {
    const int n = 1024;
    std::vector<double> a1(n * n), a2(n * n), col(n), row(n);
    for (auto &v : a1) v = dist(rng);
    a2 = a1;
    for (auto &v : col) v = dist(rng);
    for (auto &v : row) v = dist(rng);
    const double ts = time_best_of(3, [&] {
      kernels::rank1_update_serial(a1.data(), n, 1, n, 1, n, col.data(), row.data());
    });
    const double tp = time_best_of(3, [&] {
      kernels::rank1_update(a2.data(), n, 1, n, 1, n, col.data(), row.data());
    });
    std::printf("rank1     n=%-8d serial %8.3f ms   omp %8.3f ms   speedup %5.2fx   %s\n", n,
                ts * 1e3, tp * 1e3, ts / tp, bit_equal(a1, a2) ? "bit-equal" : "MISMATCH");
  }

  return 0;
}
