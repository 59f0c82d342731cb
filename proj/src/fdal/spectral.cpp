#include "fdal/spectral.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "fdal/kernels.hpp"

namespace fdal {

double SpectrumReport::fraction_within(double delta) const {
  if (eigenvalues.empty()) return 0.0;
  int c = 0;
  for (const Complex &l : eigenvalues)
    if (std::abs(l - Complex(1.0, 0.0)) < delta) ++c;
  return (double)c / (double)eigenvalues.size();
}

namespace {

// Dense mirror of a saddle system plus augmentation data; every spectral-lab
// operation works on this desk-scale representation with exact solves.
struct DenseCtx {
  const SaddleSystem &sys;
  int n, m, ell;
  DenseMatrix Ad, A2d, Cd, C2d, Md;
  WMode mode = WMode::exact_msquared;
  double gamma1 = 0.0, gamma2 = 0.0;
  std::unique_ptr<CholeskyFactorization> mchol;
  std::vector<double> wdiag;

  DenseCtx(const SaddleSystem &s, double g1, double g2, WMode wm)
      : sys(s), n(s.n), m(s.m), ell(s.ell) {
    Ad = DenseMatrix::from_sparse(s.A);
    A2d = DenseMatrix::from_sparse(s.A2);
    Cd = DenseMatrix::from_sparse(s.C);
    C2d = DenseMatrix::from_sparse(s.C2);
    Md = DenseMatrix::from_sparse(s.M);
    gamma1 = g1;
    gamma2 = g2;
    mode = wm;
    if (mode == WMode::exact_msquared) {
      mchol = std::make_unique<CholeskyFactorization>(Md);
    } else {
      wdiag.assign(ell, 0.0);
      for (int k = 0; k < ell; ++k)
        for (long p = s.M.row_ptr[k]; p < s.M.row_ptr[k + 1]; ++p)
          wdiag[k] += s.M.values[p] * s.M.values[p];
    }
  }

  // W^{-1} X for an ell x k dense block
  DenseMatrix w_inv(const DenseMatrix &x) const {
    DenseMatrix r = x;
    if (mode == WMode::diag) {
      for (int i = 0; i < r.rows; ++i)
        for (int j = 0; j < r.cols; ++j) r(i, j) /= wdiag[i];
      return r;
    }
    std::vector<double> col(ell);
    for (int j = 0; j < r.cols; ++j) {
      for (int i = 0; i < ell; ++i) col[i] = r(i, j);
      col = mchol->solve(mchol->solve(col));
      for (int i = 0; i < ell; ++i) r(i, j) = col[i];
    }
    return r;
  }

  std::vector<double> w_inv(const std::vector<double> &x) const {
    if (mode == WMode::diag) {
      std::vector<double> r(x.size());
      for (int i = 0; i < ell; ++i) r[i] = x[i] / wdiag[i];
      return r;
    }
    return mchol->solve(mchol->solve(x));
  }

  // dense B = [C, -C2], ell x (n+m)
  DenseMatrix b_dense() const {
    DenseMatrix b(ell, n + m);
    for (int i = 0; i < ell; ++i) {
      for (int j = 0; j < n; ++j) b(i, j) = Cd(i, j);
      for (int j = 0; j < m; ++j) b(i, n + j) = -C2d(i, j);
    }
    return b;
  }

  // the four augmented blocks
  void augmented_blocks(DenseMatrix &a11, DenseMatrix &a12, DenseMatrix &a21,
                        DenseMatrix &a22) const {
    const DenseMatrix winv_c = w_inv(Cd);
    const DenseMatrix winv_c2 = w_inv(C2d);
    const DenseMatrix ct = Cd.transpose();
    const DenseMatrix c2t = C2d.transpose();
    a11 = Ad.add(ct.multiply(winv_c), gamma1);
    a12 = ct.multiply(winv_c2).scaled(-gamma1);
    a21 = c2t.multiply(winv_c).scaled(-gamma2);
    a22 = A2d.add(c2t.multiply(winv_c2), gamma2);
  }

  // full (n+m+ell)^2 augmented matrix
  DenseMatrix augmented_full() const {
    DenseMatrix a11, a12, a21, a22;
    augmented_blocks(a11, a12, a21, a22);
    const int total = n + m + ell;
    DenseMatrix t(total, total);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) t(i, j) = a11(i, j);
      for (int j = 0; j < m; ++j) t(i, n + j) = a12(i, j);
      for (int j = 0; j < ell; ++j) t(i, n + m + j) = Cd(j, i);
    }
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) t(n + i, j) = a21(i, j);
      for (int j = 0; j < m; ++j) t(n + i, n + j) = a22(i, j);
      for (int j = 0; j < ell; ++j) t(n + i, n + m + j) = -C2d(j, i);
    }
    for (int i = 0; i < ell; ++i) {
      for (int j = 0; j < n; ++j) t(n + m + i, j) = Cd(i, j);
      for (int j = 0; j < m; ++j) t(n + m + i, n + j) = -C2d(i, j);
    }
    return t;
  }
};

SpectrumReport report_from_eigs(std::vector<Complex> eigs, double tol_one) {
  SpectrumReport rep;
  rep.tol_one = tol_one;
  rep.eigenvalues = std::move(eigs);
  rep.eta = 1.0;
  bool have_eta = false;
  for (const Complex &l : rep.eigenvalues) {
    rep.max_imag = std::max(rep.max_imag, std::abs(l.imag()));
    if (std::abs(l - Complex(1.0, 0.0)) <= tol_one) rep.count_at_one++;
    if (l.real() < 1.0 - tol_one) {
      rep.eta = have_eta ? std::min(rep.eta, l.real()) : l.real();
      have_eta = true;
    }
  }
  return rep;
}

// T = P_gamma^{-1} * A_aug for the ideal AL preconditioner, dense.
DenseMatrix ideal_preconditioned_dense(const DenseCtx &ctx) {
  const int n = ctx.n, m = ctx.m, ell = ctx.ell;
  const int total = n + m + ell;
  DenseMatrix a_aug = ctx.augmented_full();

  // A_gamma from the augmented blocks
  DenseMatrix a11, a12, a21, a22;
  ctx.augmented_blocks(a11, a12, a21, a22);
  DenseMatrix ag(n + m, n + m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) ag(i, j) = a11(i, j);
    for (int j = 0; j < m; ++j) ag(i, n + j) = a12(i, j);
  }
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) ag(n + i, j) = a21(i, j);
    for (int j = 0; j < m; ++j) ag(n + i, n + j) = a22(i, j);
  }
  LuFactorization lu(std::move(ag));

  // columns of A_aug split into top and lambda parts
  DenseMatrix rl(ell, total), rtop(n + m, total);
  for (int j = 0; j < total; ++j) {
    for (int i = 0; i < n + m; ++i) rtop(i, j) = a_aug(i, j);
    for (int i = 0; i < ell; ++i) rl(i, j) = a_aug(n + m + i, j);
  }
  DenseMatrix yl = ctx.w_inv(rl).scaled(ctx.gamma1);
  // rtop += B^T yl
  const DenseMatrix bd = ctx.b_dense();
  DenseMatrix bt_yl = bd.transpose().multiply(yl);
  rtop = rtop.add(bt_yl, 1.0);
  DenseMatrix ztop = lu.solve(rtop);

  DenseMatrix t(total, total);
  for (int j = 0; j < total; ++j) {
    for (int i = 0; i < n + m; ++i) t(i, j) = ztop(i, j);
    for (int i = 0; i < ell; ++i) t(n + m + i, j) = -yl(i, j);
  }
  return t;
}

// T = A_aug * Ptilde^{-1} for the modified AL preconditioner, dense.
DenseMatrix mal_preconditioned_dense(const DenseCtx &ctx) {
  const int n = ctx.n, m = ctx.m, ell = ctx.ell;
  const int total = n + m + ell;
  DenseMatrix a11, a12, a21, a22;
  ctx.augmented_blocks(a11, a12, a21, a22);
  LuFactorization lu11(a11);
  LuFactorization lu22(a22);

  // Z = Ptilde^{-1} I, built block-row by block-row (back substitution)
  DenseMatrix zl(ell, total), z2(m, total), z1(n, total);
  {
    // z_lambda = -gamma1 W^{-1} r_lambda
    DenseMatrix rl(ell, total);
    for (int i = 0; i < ell; ++i) rl(i, n + m + i) = 1.0;
    zl = ctx.w_inv(rl).scaled(-ctx.gamma1);
    // A22 z2 = r2 + C2^T z_lambda
    DenseMatrix r2(m, total);
    for (int i = 0; i < m; ++i) r2(i, n + i) = 1.0;
    r2 = r2.add(ctx.C2d.transpose().multiply(zl), 1.0);
    z2 = lu22.solve(r2);
    // A11 z1 = r1 - A12 z2 - C^T z_lambda
    DenseMatrix r1(n, total);
    for (int i = 0; i < n; ++i) r1(i, i) = 1.0;
    r1 = r1.add(a12.multiply(z2), -1.0);
    r1 = r1.add(ctx.Cd.transpose().multiply(zl), -1.0);
    z1 = lu11.solve(r1);
  }
  DenseMatrix z(total, total);
  for (int j = 0; j < total; ++j) {
    for (int i = 0; i < n; ++i) z(i, j) = z1(i, j);
    for (int i = 0; i < m; ++i) z(n + i, j) = z2(i, j);
    for (int i = 0; i < ell; ++i) z(n + m + i, j) = zl(i, j);
  }
  return ctx.augmented_full().multiply(z);
}

void check_size_guard(const SaddleSystem &sys) {
  if (sys.total_size() > 2000)
    throw ConfigError("spectral lab size guard exceeded: n+m+ell = " +
                      std::to_string(sys.total_size()) + " > 2000");
}

}  // namespace

SpectrumReport preconditioned_spectrum(const SaddleSystem &sys, Variant variant, double gamma1,
                                       double gamma2, WMode w_mode, double tol_one) {
  check_size_guard(sys);
  DenseCtx ctx(sys, gamma1, gamma2, w_mode);
  DenseMatrix t;
  switch (variant) {
    case Variant::none:
      t = ctx.augmented_full();
      break;
    case Variant::ideal_al:
      if (gamma1 != gamma2) throw ConfigError("ideal AL spectrum requires gamma1 == gamma2");
      t = ideal_preconditioned_dense(ctx);
      break;
    case Variant::mal_diag:
      t = mal_preconditioned_dense(ctx);
      break;
    default:
      throw ConfigError("preconditioned_spectrum: unsupported variant " + to_string(variant));
  }
  SpectrumReport rep = report_from_eigs(nonsym_eig(t).eigenvalues, tol_one);
  rep.gamma1 = gamma1;
  rep.gamma2 = gamma2;
  rep.beta = sys.beta;
  rep.beta2 = sys.beta2;
  rep.n = sys.n;
  rep.m = sys.m;
  rep.ell = sys.ell;
  return rep;
}

double eta_formula_check(const SaddleSystem &sys, double gamma, double tol_one) {
  check_size_guard(sys);
  DenseCtx ctx(sys, gamma, gamma, WMode::exact_msquared);
  const int n = sys.n, m = sys.m;
  DenseMatrix t = ideal_preconditioned_dense(ctx);
  HessenbergData hd = hessenberg_reduce(t, true);
  const std::vector<Complex> eigs = hessenberg_eigenvalues(hd.h);

  const DenseMatrix bd = ctx.b_dense();
  double max_dev = 0.0;
  for (const Complex &lambda : eigs) {
    if (std::abs(lambda - Complex(1.0, 0.0)) <= tol_one) continue;  // unit eigenvalues excluded
    const std::vector<Complex> xc = hessenberg_eigenvector(hd, lambda);
    // rotate the (theoretically real) eigenvector onto the real axis
    int imax = 0;
    double best = 0.0;
    for (int i = 0; i < (int)xc.size(); ++i)
      if (std::abs(xc[i]) > best) {
        best = std::abs(xc[i]);
        imax = i;
      }
    const Complex phase = xc[imax] / std::abs(xc[imax]);
    std::vector<double> x(n + m);
    for (int i = 0; i < n + m; ++i) x[i] = (xc[i] / phase).real();

    std::vector<double> bx(sys.ell, 0.0);
    for (int k = 0; k < sys.ell; ++k) {
      double s = 0.0;
      for (int j = 0; j < n + m; ++j) s += bd(k, j) * x[j];
      bx[k] = s;
    }
    const std::vector<double> wbx = ctx.w_inv(bx);
    const double quad_b = dot(bx, wbx);
    // x^T Atilde x from the sparse blocks
    const std::vector<double> x1(x.begin(), x.begin() + n);
    const std::vector<double> x2(x.begin() + n, x.end());
    const double quad_a = dot(x1, sys.A.multiply(x1)) + dot(x2, sys.A2.multiply(x2));
    const double lambda_hat = gamma * quad_b / (quad_a + gamma * quad_b);
    max_dev = std::max(max_dev, std::abs(lambda.real() - lambda_hat));
  }
  return max_dev;
}

std::pair<double, double> spectral_equivalence_check(const SparseMatrix &mass, double h,
                                                     int samples, std::uint64_t seed) {
  CholeskyFactorization chol(DenseMatrix::from_sparse(mass));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int s = 0; s < samples; ++s) {
    std::vector<double> w(mass.rows);
    for (auto &v : w) v = dist(rng);
    const std::vector<double> minv_w = chol.solve(w);
    const double num = dot(minv_w, minv_w);              // w^T M^{-2} w
    const double den = dot(w, minv_w) / (h * h);         // w^T h^{-2} M^{-1} w
    const double ratio = num / den;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  return {lo, hi};
}

InfSupReport infsup_sigma1(const SaddleSystem &sys, double h2) {
  check_size_guard(sys);
  DenseCtx ctx(sys, 0.0, 0.0, WMode::exact_msquared);
  const int n = sys.n, m = sys.m, ell = sys.ell;
  const DenseMatrix bd = ctx.b_dense();
  // K = (h2^2 M)^{-1} B
  DenseMatrix k(ell, n + m);
  {
    std::vector<double> col(ell);
    for (int j = 0; j < n + m; ++j) {
      for (int i = 0; i < ell; ++i) col[i] = bd(i, j);
      col = ctx.mchol->solve(col);
      for (int i = 0; i < ell; ++i) k(i, j) = col[i] / (h2 * h2);
    }
  }
  DenseMatrix q = bd.transpose().multiply(k);
  q.symmetrize();
  DenseMatrix nmat(n + m, n + m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) nmat(i, j) = ctx.Ad(i, j);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) nmat(n + i, n + j) = ctx.A2d(i, j) + ctx.Md(i, j);

  const EigenResult res = gen_sym_eig(q, nmat, false);  // ascending
  InfSupReport rep;
  const double tol = 1e-10;
  for (const Complex &l : res.eigenvalues) {
    if (l.real() <= tol)
      rep.zero_count++;
    else if (rep.sigma1 == 0.0)
      rep.sigma1 = l.real();
  }
  rep.theta_bar_sq = rep.sigma1;
  return rep;
}

double verify_smw_identity(const SaddleSystem &sys, double gamma1, WMode w_mode) {
  check_size_guard(sys);
  if (gamma1 == 0.0) return 0.0;  // both sides vanish identically
  DenseCtx ctx(sys, gamma1, 0.0, w_mode);
  const int ell = sys.ell;

  // W^{-1} acting from the right: Y W^{-1} = (W^{-1} Y^T)^T
  auto right_w_inv = [&](const DenseMatrix &y) {
    return ctx.w_inv(y.transpose()).transpose();
  };

  const DenseMatrix ct = ctx.Cd.transpose();
  DenseMatrix a11 = ctx.Ad.add(ct.multiply(ctx.w_inv(ctx.Cd)), gamma1);
  DenseMatrix lhs;
  {
    LuFactorization lu11(std::move(a11));
    lhs = right_w_inv(ctx.Cd.multiply(lu11.solve(ct))).scaled(gamma1);
  }
  DenseMatrix rhs;
  {
    LuFactorization lua(ctx.Ad);
    DenseMatrix kmat = right_w_inv(ctx.Cd.multiply(lua.solve(ct))).scaled(gamma1);
    DenseMatrix ipk = DenseMatrix::identity(ell).add(kmat, 1.0);
    LuFactorization lu(std::move(ipk));
    rhs = DenseMatrix::identity(ell).add(lu.solve(DenseMatrix::identity(ell)), -1.0);
  }
  const double scale = std::max({lhs.norm_frobenius(), rhs.norm_frobenius(), 1e-300});
  return lhs.add(rhs, -1.0).norm_frobenius() / scale;
}

namespace {

struct MalBlocks {
  DenseMatrix d, e, f, g;  // D: m x ell, E: ell x m, F: ell x ell, G: ell x ell
};

MalBlocks build_mal_blocks(const DenseCtx &ctx) {
  const int ell = ctx.ell;
  MalBlocks blk;
  LuFactorization lua(ctx.Ad);
  const DenseMatrix ct = ctx.Cd.transpose();
  // F = (I + gamma1 C A^{-1} C^T W^{-1})^{-1}
  DenseMatrix k0 = ctx.Cd.multiply(lua.solve(ct));  // C A^{-1} C^T
  DenseMatrix kw = ctx.w_inv(k0.transpose()).transpose().scaled(ctx.gamma1);
  {
    DenseMatrix ipk = DenseMatrix::identity(ell).add(kw, 1.0);
    LuFactorization lu(std::move(ipk));
    blk.f = lu.solve(DenseMatrix::identity(ell));
  }
  // C2^T W^{-1} = (W^{-1} C2)^T
  const DenseMatrix wc2 = ctx.w_inv(ctx.C2d);
  const DenseMatrix c2t_winv = wc2.transpose();  // m x ell
  // D = gamma2 C2^T W^{-1} (I - F)
  blk.d = c2t_winv.multiply(DenseMatrix::identity(ell).add(blk.f, -1.0)).scaled(ctx.gamma2);
  // A22 = A2 + gamma2 C2^T W^{-1} C2
  DenseMatrix a22 = ctx.A2d.add(ctx.C2d.transpose().multiply(wc2), ctx.gamma2);
  LuFactorization lu22(std::move(a22));
  // E = C2 A22^{-1} = (A22^{-1} C2^T)^T (A22 symmetric)
  blk.e = lu22.solve(ctx.C2d.transpose()).transpose();
  // G = I - gamma1 E C2^T W^{-1}
  blk.g = DenseMatrix::identity(ell).add(blk.e.multiply(c2t_winv), -ctx.gamma1);
  return blk;
}

}  // namespace

SpectrumReport mal_block_spectrum(const SaddleSystem &sys, double gamma1, double gamma2,
                                  double tol_one) {
  check_size_guard(sys);
  DenseCtx ctx(sys, gamma1, gamma2, WMode::exact_msquared);
  const MalBlocks blk = build_mal_blocks(ctx);
  const int m = sys.m, ell = sys.ell;
  DenseMatrix t(m + ell, m + ell);
  const DenseMatrix de = blk.d.multiply(blk.e);
  const DenseMatrix dg = blk.d.multiply(blk.g);
  const DenseMatrix fe = blk.f.multiply(blk.e);
  const DenseMatrix fg = blk.f.multiply(blk.g);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) t(i, j) = (i == j ? 1.0 : 0.0) - de(i, j);
    for (int j = 0; j < ell; ++j) t(i, m + j) = -dg(i, j);
  }
  for (int i = 0; i < ell; ++i) {
    for (int j = 0; j < m; ++j) t(m + i, j) = -fe(i, j);
    for (int j = 0; j < ell; ++j) t(m + i, m + j) = (i == j ? 1.0 : 0.0) - fg(i, j);
  }
  SpectrumReport rep = report_from_eigs(nonsym_eig(t).eigenvalues, tol_one);
  rep.gamma1 = gamma1;
  rep.gamma2 = gamma2;
  rep.beta = sys.beta;
  rep.beta2 = sys.beta2;
  rep.n = sys.n;
  rep.m = sys.m;
  rep.ell = sys.ell;
  return rep;
}

std::vector<Complex> mal_edgf_eigenvalues(const SaddleSystem &sys, double gamma1,
                                          double gamma2) {
  check_size_guard(sys);
  DenseCtx ctx(sys, gamma1, gamma2, WMode::exact_msquared);
  const MalBlocks blk = build_mal_blocks(ctx);
  const DenseMatrix edgf = blk.e.multiply(blk.d).add(blk.g.multiply(blk.f), 1.0);
  return nonsym_eig(edgf).eigenvalues;
}

std::vector<double> limit_spectrum_la2(const SaddleSystem &sys) {
  check_size_guard(sys);
  DenseCtx ctx(sys, 0.0, 0.0, WMode::exact_msquared);
  const int ell = sys.ell;
  LuFactorization lua(ctx.Ad);
  DenseMatrix s0 = ctx.Cd.multiply(lua.solve(ctx.Cd.transpose()));  // C A^{-1} C^T
  // L = M^{-1} S0 M^{-1}, kept explicitly symmetric
  auto m_inv = [&](const DenseMatrix &x) {
    DenseMatrix r = x;
    std::vector<double> col(ell);
    for (int j = 0; j < r.cols; ++j) {
      for (int i = 0; i < ell; ++i) col[i] = r(i, j);
      col = ctx.mchol->solve(col);
      for (int i = 0; i < ell; ++i) r(i, j) = col[i];
    }
    return r;
  };
  DenseMatrix l = m_inv(m_inv(s0).transpose());
  l.symmetrize();
  // L^{1/2} through the spectral decomposition
  EigenResult le = sym_eig(l, true);
  DenseMatrix lh(ell, ell);
  for (int k = 0; k < ell; ++k) {
    const double lam = std::max(le.eigenvalues[k].real(), 0.0);
    const double sq = std::sqrt(lam);
    for (int i = 0; i < ell; ++i)
      for (int j = 0; j < ell; ++j)
        lh(i, j) += sq * le.vec(i, k).real() * le.vec(j, k).real();
  }
  DenseMatrix s = lh.multiply(ctx.A2d.multiply(lh));
  s.symmetrize();
  EigenResult se = sym_eig(s, false);
  std::vector<double> out(ell);
  for (int k = 0; k < ell; ++k) out[k] = -se.eigenvalues[ell - 1 - k].real();
  return out;  // ascending (most negative first)
}

double matched_set_distance(const std::vector<Complex> &a, const std::vector<Complex> &b) {
  if (a.size() != b.size())
    throw DimensionMismatch("matched_set_distance requires equal multiset sizes");
  const int n = (int)a.size();
  if (n == 0) return 0.0;
  // Hungarian algorithm with potentials, O(n^3)
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  auto cost = [&](int i, int j) { return std::abs(a[i] - b[j]); };
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = 0;
      double delta = inf;
      for (int j = 1; j <= n; ++j)
        if (!used[j]) {
          const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
          if (cur < minv[j]) {
            minv[j] = cur;
            way[j] = j0;
          }
          if (minv[j] < delta) {
            delta = minv[j];
            j1 = j;
          }
        }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  double total = 0.0;
  for (int j = 1; j <= n; ++j) total += cost(p[j] - 1, j - 1);
  return total / n;
}

}  // namespace fdal
