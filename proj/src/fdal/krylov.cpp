#include "fdal/krylov.hpp"

#include <chrono>
#include <cmath>

#include "fdal/kernels.hpp"

namespace fdal {

namespace {
double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}
}  // namespace

std::pair<std::vector<double>, SolveReport> cg(int n, const LinOp &op,
                                               const std::vector<double> &b, const LinOp &prec,
                                               double rtol, int maxit) {
  const auto t0 = std::chrono::steady_clock::now();
  SolveReport rep;
  std::vector<double> x(n, 0.0);
  const double bnorm = nrm2(b);
  if (bnorm == 0.0) {
    rep.converged = true;
    rep.residual_history.push_back(0.0);
    rep.wall_time = seconds_since(t0);
    return {x, rep};
  }
  std::vector<double> r = b;
  std::vector<double> z(n), q(n);
  if (prec)
    prec(r, z);
  else
    z = r;
  std::vector<double> p = z;
  double rz = dot(r, z);
  for (int it = 0; it < maxit; ++it) {
    op(p, q);
    const double pq = dot(p, q);
    if (pq <= 0.0)
      throw IndefiniteOperator("cg: nonpositive curvature p^T A p = " + std::to_string(pq));
    const double alpha = rz / pq;
    axpy(alpha, p, x);
    axpy(-alpha, q, r);
    const double rel = nrm2(r) / bnorm;
    rep.residual_history.push_back(rel);
    rep.iterations = it + 1;
    if (rel <= rtol) {
      rep.converged = true;
      break;
    }
    if (prec)
      prec(r, z);
    else
      z = r;
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  // recompute the true residual for the final iterate
  op(x, q);
  double tr = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = b[i] - q[i];
    tr += d * d;
  }
  rep.true_relative_residual = std::sqrt(tr) / bnorm;
  if (!rep.residual_history.empty()) rep.residual_history.back() = rep.true_relative_residual;
  rep.wall_time = seconds_since(t0);
  return {x, rep};
}

std::pair<std::vector<double>, SolveReport> fgmres(int n, const LinOp &op,
                                                   const std::vector<double> &b,
                                                   const LinOp &right_prec, int restart,
                                                   double rtol, double atol, int maxit) {
  const auto t0 = std::chrono::steady_clock::now();
  SolveReport rep;
  std::vector<double> x(n, 0.0);
  const double bnorm = nrm2(b);
  if (bnorm == 0.0) {
    rep.converged = true;
    rep.residual_history.push_back(0.0);
    rep.wall_time = seconds_since(t0);
    return {x, rep};
  }
  const double target = std::max(rtol * bnorm, atol);

  std::vector<std::vector<double>> v(restart + 1), z(restart);
  std::vector<double> h((std::size_t)(restart + 1) * restart, 0.0);
  auto H = [&](int i, int j) -> double & { return h[(std::size_t)i * restart + j]; };
  std::vector<double> cs(restart), sn(restart), gvec(restart + 1);
  std::vector<double> w(n), r(n);

  int total_it = 0;
  bool done = false;
  while (!done && total_it < maxit) {
    // residual of the current iterate
    op(x, w);
    for (int i = 0; i < n; ++i) r[i] = b[i] - w[i];
    double beta = nrm2(r);
    if (beta <= target) {
      rep.converged = true;
      break;
    }
    v[0] = r;
    scal(1.0 / beta, v[0]);
    std::fill(gvec.begin(), gvec.end(), 0.0);
    gvec[0] = beta;
    std::fill(h.begin(), h.end(), 0.0);

    int j = 0;
    for (; j < restart && total_it < maxit; ++j, ++total_it) {
      z[j].assign(n, 0.0);
      if (right_prec)
        right_prec(v[j], z[j]);
      else
        z[j] = v[j];
      op(z[j], w);
      // modified Gram-Schmidt
      for (int i = 0; i <= j; ++i) {
        const double hij = dot(w, v[i]);
        H(i, j) = hij;
        axpy(-hij, v[i], w);
      }
      const double hj1 = nrm2(w);
      H(j + 1, j) = hj1;
      if (hj1 < 1e-300) {
        // possible lucky breakdown: accept if the projected residual is small
        for (int i = 0; i < j; ++i) {
          const double t1 = cs[i] * H(i, j) + sn[i] * H(i + 1, j);
          const double t2 = -sn[i] * H(i, j) + cs[i] * H(i + 1, j);
          H(i, j) = t1;
          H(i + 1, j) = t2;
        }
        if (std::abs(gvec[j]) > target)
          throw Breakdown("fgmres: Arnoldi normalization coefficient below 1e-300");
        ++j;
        ++total_it;
        break;
      }
      v[j + 1] = w;
      scal(1.0 / hj1, v[j + 1]);
      // apply previous Givens rotations to the new column
      for (int i = 0; i < j; ++i) {
        const double t1 = cs[i] * H(i, j) + sn[i] * H(i + 1, j);
        const double t2 = -sn[i] * H(i, j) + cs[i] * H(i + 1, j);
        H(i, j) = t1;
        H(i + 1, j) = t2;
      }
      const double denom = std::hypot(H(j, j), H(j + 1, j));
      cs[j] = H(j, j) / denom;
      sn[j] = H(j + 1, j) / denom;
      H(j, j) = denom;
      H(j + 1, j) = 0.0;
      gvec[j + 1] = -sn[j] * gvec[j];
      gvec[j] = cs[j] * gvec[j];
      rep.residual_history.push_back(std::abs(gvec[j + 1]) / bnorm);
      if (std::abs(gvec[j + 1]) <= target) {
        ++j;
        ++total_it;
        break;
      }
    }
    // solve the small triangular system and update x with the stored Z basis
    std::vector<double> y(j, 0.0);
    for (int i = j - 1; i >= 0; --i) {
      double s = gvec[i];
      for (int k = i + 1; k < j; ++k) s -= H(i, k) * y[k];
      y[i] = s / H(i, i);
    }
    for (int i = 0; i < j; ++i) axpy(y[i], z[i], x);

    op(x, w);
    double tr = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d = b[i] - w[i];
      tr += d * d;
    }
    const double true_res = std::sqrt(tr);
    if (true_res <= target) {
      rep.converged = true;
      done = true;
    }
    rep.true_relative_residual = true_res / bnorm;
  }
  rep.iterations = total_it;
  {
    op(x, w);
    double tr = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d = b[i] - w[i];
      tr += d * d;
    }
    rep.true_relative_residual = std::sqrt(tr) / bnorm;
    if (rep.true_relative_residual <= std::max(rtol, atol / bnorm)) rep.converged = true;
    rep.residual_history.push_back(rep.true_relative_residual);
  }
  rep.wall_time = seconds_since(t0);
  return {x, rep};
}

}  // namespace fdal
