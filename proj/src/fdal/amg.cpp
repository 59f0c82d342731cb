#include "fdal/amg.hpp"

#include <cmath>

#include "fdal/kernels.hpp"

namespace fdal {

namespace {

// Vanek-style greedy aggregation over the strength graph
// |a_ij| > theta * sqrt(a_ii * a_jj). Returns aggregate id per node.
std::vector<int> aggregate(const SparseMatrix &a, double theta, int &n_agg) {
  const int n = a.rows;
  std::vector<double> diag = a.diagonal();
  auto strong = [&](int i, long k) {
    const int j = a.col_idx[k];
    if (j == i) return false;
    const double v = std::abs(a.values[k]);
    return v > theta * std::sqrt(std::abs(diag[i] * diag[j]));
  };

  std::vector<int> agg(n, -1);
  n_agg = 0;
  // pass 1: roots whose strong neighborhood is fully unaggregated
  for (int i = 0; i < n; ++i) {
    if (agg[i] >= 0) continue;
    bool free_nbhd = true;
    for (long k = a.row_ptr[i]; k < a.row_ptr[i + 1] && free_nbhd; ++k)
      if (strong(i, k) && agg[a.col_idx[k]] >= 0) free_nbhd = false;
    if (!free_nbhd) continue;
    const int id = n_agg++;
    agg[i] = id;
    for (long k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
      if (strong(i, k)) agg[a.col_idx[k]] = id;
  }
  // pass 2: attach leftovers to the strongest aggregated neighbor
  std::vector<int> agg2 = agg;
  for (int i = 0; i < n; ++i) {
    if (agg[i] >= 0) continue;
    double best = 0.0;
    int best_id = -1;
    for (long k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
      const int j = a.col_idx[k];
      if (j == i || agg[j] < 0) continue;
      if (!strong(i, k)) continue;
      const double v = std::abs(a.values[k]);
      if (v > best || (v == best && agg[j] < best_id)) {
        best = v;
        best_id = agg[j];
      }
    }
    if (best_id >= 0) agg2[i] = best_id;
  }
  agg = agg2;
  // pass 3: whatever is left becomes singleton aggregates
  for (int i = 0; i < n; ++i)
    if (agg[i] < 0) agg[i] = n_agg++;
  return agg;
}

double estimate_rho_dinv_a(const SparseMatrix &a, const std::vector<double> &diag) {
  const int n = a.rows;
  std::vector<double> v(n, 1.0), w(n);
  double rho = 1.0;
  for (int it = 0; it < 10; ++it) {
    spmv(a, v, w);
    for (int i = 0; i < n; ++i) w[i] /= diag[i];
    const double nw = nrm2(w);
    if (nw == 0.0) break;
    rho = nw / nrm2(v);
    v = w;
    scal(1.0 / nw, v);
  }
  return std::max(rho, 1e-12);
}

void gauss_seidel_sweep(const SparseMatrix &a, const std::vector<double> &diag,
                        const std::vector<double> &b, std::vector<double> &x, bool forward) {
  const int n = a.rows;
  if (forward) {
    for (int i = 0; i < n; ++i) {
      double s = b[i];
      for (long k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
        if (a.col_idx[k] != i) s -= a.values[k] * x[a.col_idx[k]];
      x[i] = s / diag[i];
    }
  } else {
    for (int i = n - 1; i >= 0; --i) {
      double s = b[i];
      for (long k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
        if (a.col_idx[k] != i) s -= a.values[k] * x[a.col_idx[k]];
      x[i] = s / diag[i];
    }
  }
}

}  // namespace

AmgHierarchy amg_setup(const SparseMatrix &a, AmgOptions opts) {
  AmgHierarchy h;
  h.opts = opts;
  SparseMatrix cur = a;
  for (int lev = 0; lev < opts.max_levels; ++lev) {
    AmgHierarchy::Level level;
    level.a = cur;
    level.diag = level.a.diagonal();
    for (double d : level.diag)
      if (!(d > 0.0)) throw NotSPD("amg_setup: nonpositive diagonal entry");
    const int n = level.a.rows;
    if (n <= opts.coarse_cap) {
      h.levels.push_back(std::move(level));
      break;
    }

    int n_agg = 0;
    std::vector<int> agg = aggregate(level.a, opts.strength_threshold, n_agg);
    if (n_agg >= n) {  // aggregation stalled; stop coarsening here
      h.levels.push_back(std::move(level));
      break;
    }
    // tentative prolongation: unit column per aggregate, normalized
    std::vector<int> agg_size(n_agg, 0);
    for (int i = 0; i < n; ++i) agg_size[agg[i]]++;
    std::vector<int> ti(n), tj(n);
    std::vector<double> tv(n);
    for (int i = 0; i < n; ++i) {
      ti[i] = i;
      tj[i] = agg[i];
      tv[i] = 1.0 / std::sqrt((double)agg_size[agg[i]]);
    }
    SparseMatrix p_tent = SparseMatrix::from_triplets(n, n_agg, ti, tj, tv);

    // one damped-Jacobi smoothing step: P = (I - omega/rho D^{-1} A) P_tent
    const double rho = estimate_rho_dinv_a(level.a, level.diag);
    const double omega = opts.jacobi_omega / rho;
    SparseMatrix ap = level.a.multiply(p_tent);
    for (int i = 0; i < n; ++i)
      for (long k = ap.row_ptr[i]; k < ap.row_ptr[i + 1]; ++k)
        ap.values[k] *= omega / level.diag[i];
    level.p = p_tent.add(ap, -1.0);
    level.p.compress(0.0);

    SparseMatrix coarse = level.p.transpose().multiply(level.a.multiply(level.p));
    // spot-check the Galerkin property (P^T A P == coarse) on a fixed vector
    {
      std::vector<double> v(coarse.rows);
      for (int i = 0; i < coarse.rows; ++i) v[i] = 1.0 + 0.5 * std::sin(1.0 + i);
      std::vector<double> y1 = level.p.multiply_transpose(level.a.multiply(level.p.multiply(v)));
      std::vector<double> y2 = coarse.multiply(v);
      double diff = 0.0, scale = 0.0;
      for (int i = 0; i < coarse.rows; ++i) {
        diff = std::max(diff, std::abs(y1[i] - y2[i]));
        scale = std::max(scale, std::abs(y2[i]));
      }
      if (diff > 1e-12 * std::max(scale, 1.0))
        throw NoConvergence("amg_setup: Galerkin product check failed");
    }
    h.levels.push_back(std::move(level));
    cur = std::move(coarse);
  }
  h.coarse_lu = std::make_unique<LuFactorization>(DenseMatrix::from_sparse(h.levels.back().a));
  return h;
}

namespace {

void vcycle_level(const AmgHierarchy &h, std::size_t lev, const std::vector<double> &r,
                  std::vector<double> &z) {
  const auto &level = h.levels[lev];
  if (lev + 1 == h.levels.size()) {
    z = h.coarse_lu->solve(r);
    return;
  }
  const int n = level.a.rows;
  z.assign(n, 0.0);
  for (int s = 0; s < h.opts.presweeps; ++s) {
    gauss_seidel_sweep(level.a, level.diag, r, z, true);
    gauss_seidel_sweep(level.a, level.diag, r, z, false);
  }
  std::vector<double> az = level.a.multiply(z);
  std::vector<double> res(n);
  for (int i = 0; i < n; ++i) res[i] = r[i] - az[i];
  std::vector<double> rc = level.p.multiply_transpose(res);
  std::vector<double> zc;
  vcycle_level(h, lev + 1, rc, zc);
  std::vector<double> corr = level.p.multiply(zc);
  for (int i = 0; i < n; ++i) z[i] += corr[i];
  for (int s = 0; s < h.opts.postsweeps; ++s) {
    gauss_seidel_sweep(level.a, level.diag, r, z, true);
    gauss_seidel_sweep(level.a, level.diag, r, z, false);
  }
}

}  // namespace

void amg_vcycle(const AmgHierarchy &h, const std::vector<double> &r, std::vector<double> &z) {
  vcycle_level(h, 0, r, z);
}

}  // namespace fdal
