#include "fdal/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fdal/kernels.hpp"

namespace fdal {

namespace {

double off_diagonal_frobenius(const DenseMatrix &a) {
  double s = 0.0;
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace

EigenResult sym_eig(const DenseMatrix &m, bool with_vectors) {
  const int n = m.rows;
  if (m.rows != m.cols) throw DimensionMismatch("sym_eig requires a square matrix");
  const double scale = m.norm_max();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(m(i, j) - m(j, i)) > 1e-12 * std::max(scale, 1e-300))
        throw NotSPD("sym_eig: input asymmetry beyond tolerance");

  DenseMatrix a = m;
  a.symmetrize();
  DenseMatrix v = DenseMatrix::identity(n);
  const double target = 1e-13 * std::max(a.norm_frobenius(), 1e-300);

  const int max_sweeps = 60;
  int sweep = 0;
  while (off_diagonal_frobenius(a) > target) {
    if (++sweep > max_sweeps) throw NoConvergence("sym_eig: Jacobi sweeps exhausted");
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double app = a(p, p), aqq = a(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // rows p and q
        for (int k = 0; k < n; ++k) {
          const double akp = a(p, k), akq = a(q, k);
          a(p, k) = c * akp - s * akq;
          a(q, k) = s * akp + c * akq;
        }
        // columns p and q
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        if (with_vectors) {
          for (int k = 0; k < n; ++k) {
            const double vkp = v(k, p), vkq = v(k, q);
            v(k, p) = c * vkp - s * vkq;
            v(k, q) = s * vkp + c * vkq;
          }
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) { return a(x, x) < a(y, y); });

  EigenResult r;
  r.n = n;
  r.eigenvalues.resize(n);
  r.converged.assign(n, 1);
  if (with_vectors) r.vectors.resize((std::size_t)n * n);
  for (int j = 0; j < n; ++j) {
    r.eigenvalues[j] = Complex(a(order[j], order[j]), 0.0);
    if (with_vectors)
      for (int i = 0; i < n; ++i)
        r.vectors[(std::size_t)j * n + i] = Complex(v(i, order[j]), 0.0);
  }
  return r;
}

EigenResult gen_sym_eig(const DenseMatrix &q, const DenseMatrix &n_mat, bool with_vectors) {
  const int n = q.rows;
  if (q.rows != q.cols || n_mat.rows != n_mat.cols || q.rows != n_mat.rows)
    throw DimensionMismatch("gen_sym_eig shape mismatch");
  CholeskyFactorization chol(n_mat);  // throws NotSPD on failure

  // S = L^{-1} Q L^{-T}, formed column by column.
  DenseMatrix s(n, n);
  std::vector<double> col(n);
  DenseMatrix x(n, n);  // X = L^{-1} Q
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) col[i] = q(i, j);
    col = chol.solve_lower(col);
    for (int i = 0; i < n; ++i) x(i, j) = col[i];
  }
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) col[k] = x(i, k);  // row i of X
    col = chol.solve_lower(col);                   // L^{-1} X^T column
    for (int k = 0; k < n; ++k) s(k, i) = col[k];
  }
  s.symmetrize();

  EigenResult r = sym_eig(s, with_vectors);
  if (with_vectors) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) col[i] = r.vectors[(std::size_t)j * n + i].real();
      col = chol.solve_lower_transpose(col);
      for (int i = 0; i < n; ++i) r.vectors[(std::size_t)j * n + i] = Complex(col[i], 0.0);
    }
  }
  return r;
}

namespace {

// Radix-2 balancing (scaling only, exact in floating point).
std::vector<double> balance_in_place(DenseMatrix &a) {
  const int n = a.rows;
  std::vector<double> d(n, 1.0);
  const double radix = 2.0;
  bool converged = false;
  int guard = 0;
  while (!converged && ++guard < 100) {
    converged = true;
    for (int i = 0; i < n; ++i) {
      double r = 0.0, c = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double f = 1.0;
      const double s = c + r;
      while (c < r / radix) {
        c *= radix;
        r /= radix;
        f *= radix;
      }
      while (c >= r * radix) {
        c /= radix;
        r *= radix;
        f /= radix;
      }
      if ((c + r) < 0.95 * s && f != 1.0) {
        converged = false;
        d[i] *= f;
        const double finv = 1.0 / f;
        for (int j = 0; j < n; ++j) a(i, j) *= finv;
        for (int j = 0; j < n; ++j) a(j, i) *= f;
      }
    }
  }
  return d;
}

}  // namespace

HessenbergData hessenberg_reduce(DenseMatrix m, bool accumulate_q) {
  const int n = m.rows;
  if (m.rows != m.cols) throw DimensionMismatch("hessenberg_reduce: square input required");
  HessenbergData hd;
  hd.bal = balance_in_place(m);
  DenseMatrix &a = m;

  // Householder reflectors stored for accumulation.
  std::vector<std::vector<double>> reflectors;
  reflectors.reserve(std::max(0, n - 2));
  for (int k = 0; k < n - 2; ++k) {
    double alpha = 0.0;
    for (int i = k + 1; i < n; ++i) alpha = std::max(alpha, std::abs(a(i, k)));
    std::vector<double> v(n, 0.0);
    if (alpha > 0.0) {
      double s = 0.0;
      for (int i = k + 1; i < n; ++i) {
        v[i] = a(i, k) / alpha;
        s += v[i] * v[i];
      }
      double mu = std::sqrt(s);
      if (mu != 0.0) {
        if (v[k + 1] < 0.0) mu = -mu;
        v[k + 1] += mu;
        const double norm = std::sqrt(2.0 * mu * v[k + 1]);
        for (int i = k + 1; i < n; ++i) v[i] /= norm;
        // A <- (I - 2vv^T) A
        std::vector<double> w(n, 0.0);
#pragma omp parallel for schedule(static)
        for (int j = 0; j < n; ++j) {
          double t = 0.0;
          for (int i = k + 1; i < n; ++i) t += v[i] * a(i, j);
          w[j] = 2.0 * t;
        }
#pragma omp parallel for schedule(static)
        for (int i = k + 1; i < n; ++i)
          for (int j = 0; j < n; ++j) a(i, j) -= v[i] * w[j];
        // A <- A (I - 2vv^T)
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i) {
          double t = 0.0;
          for (int j = k + 1; j < n; ++j) t += a(i, j) * v[j];
          t *= 2.0;
          for (int j = k + 1; j < n; ++j) a(i, j) -= t * v[j];
        }
        for (int i = k + 2; i < n; ++i) a(i, k) = 0.0;
      }
    }
    reflectors.push_back(std::move(v));
  }

  if (accumulate_q) {
    hd.q = DenseMatrix::identity(n);
    // Q = H_0 H_1 ... applied from the right-most reflector backwards.
    for (int k = n - 3; k >= 0; --k) {
      const std::vector<double> &v = reflectors[k];
#pragma omp parallel for schedule(static)
      for (int j = 0; j < n; ++j) {
        double t = 0.0;
        for (int i = k + 1; i < n; ++i) t += v[i] * hd.q(i, j);
        t *= 2.0;
        for (int i = k + 1; i < n; ++i) hd.q(i, j) -= t * v[i];
      }
    }
  }
  hd.h = std::move(m);
  return hd;
}

namespace {

// Francis double-shift QR on a Hessenberg matrix; eigenvalues only.
// Classic hqr scheme. Subdiagonal entries are declared negligible against
// 1e-13*||H||_inf (plus the usual local epsilon test).
std::vector<Complex> hessenberg_qr_eigenvalues(DenseMatrix h) {
  const int n = h.rows;
  std::vector<Complex> eig(n);
  if (n == 0) return eig;
  const double eps = std::numeric_limits<double>::epsilon();

  double hnorm = 0.0;
  for (int i = 0; i < n; ++i) {
    double r = 0.0;
    for (int j = std::max(0, i - 1); j < n; ++j) r += std::abs(h(i, j));
    hnorm = std::max(hnorm, r);
  }
  if (hnorm == 0.0) return eig;
  const double tol = 1e-13 * hnorm;

  int en = n - 1;
  double t = 0.0;  // accumulated exceptional shifts
  long total_iter = 0;
  const long max_total = 40L * n;
  int its = 0;
  double p = 0, q = 0, r = 0, s = 0, w = 0, x = 0, y = 0, z = 0;

  while (en >= 0) {
    // look for a single small subdiagonal element
    int l = en;
    while (l > 0) {
      s = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
      if (s == 0.0) s = hnorm;
      if (std::abs(h(l, l - 1)) <= std::max(tol, eps * s)) {
        h(l, l - 1) = 0.0;
        break;
      }
      --l;
    }
    x = h(en, en);
    if (l == en) {
      eig[en] = Complex(x + t, 0.0);
      --en;
      its = 0;
      continue;
    }
    y = h(en - 1, en - 1);
    w = h(en, en - 1) * h(en - 1, en);
    if (l == en - 1) {
      p = 0.5 * (y - x);
      q = p * p + w;
      z = std::sqrt(std::abs(q));
      x += t;
      if (q >= 0.0) {
        z = p + (p >= 0.0 ? z : -z);
        eig[en - 1] = Complex(x + z, 0.0);
        eig[en] = (z != 0.0) ? Complex(x - w / z, 0.0) : eig[en - 1];
      } else {
        eig[en - 1] = Complex(x + p, z);
        eig[en] = Complex(x + p, -z);
      }
      en -= 2;
      its = 0;
      continue;
    }

    if (++total_iter > max_total)
      throw NoConvergence("nonsym_eig: QR sweeps exhausted on block [" + std::to_string(l) +
                          "," + std::to_string(en) + "]");

    if (its == 10 || its == 20) {
      // exceptional shift
      t += x;
      for (int i = l; i <= en; ++i) h(i, i) -= x;
      s = std::abs(h(en, en - 1)) + std::abs(h(en - 1, en - 2));
      x = y = 0.75 * s;
      w = -0.4375 * s * s;
    }
    ++its;

    // look for two consecutive small subdiagonal elements
    int m;
    for (m = en - 2; m >= l; --m) {
      z = h(m, m);
      r = x - z;
      s = y - z;
      p = (r * s - w) / h(m + 1, m) + h(m, m + 1);
      q = h(m + 1, m + 1) - z - r - s;
      r = h(m + 2, m + 1);
      const double sc = std::abs(p) + std::abs(q) + std::abs(r);
      if (sc == 0.0) continue;
      p /= sc;
      q /= sc;
      r /= sc;
      if (m == l) break;
      if (std::abs(h(m, m - 1)) * (std::abs(q) + std::abs(r)) <=
          eps * std::abs(p) *
              (std::abs(h(m - 1, m - 1)) + std::abs(z) + std::abs(h(m + 1, m + 1))))
        break;
    }
    if (m < l) m = l;
    for (int i = m + 2; i <= en; ++i) h(i, i - 2) = 0.0;
    for (int i = m + 3; i <= en; ++i) h(i, i - 3) = 0.0;

    // double QR step on rows l..en and columns m..en
    for (int k = m; k <= en - 1; ++k) {
      const bool notlast = (k != en - 1);
      if (k != m) {
        p = h(k, k - 1);
        q = h(k + 1, k - 1);
        r = notlast ? h(k + 2, k - 1) : 0.0;
        x = std::abs(p) + std::abs(q) + std::abs(r);
        if (x == 0.0) continue;
        p /= x;
        q /= x;
        r /= x;
      }
      s = std::sqrt(p * p + q * q + r * r);
      if (p < 0.0) s = -s;
      if (s == 0.0) continue;
      if (k != m)
        h(k, k - 1) = -s * x;
      else if (l != m)
        h(k, k - 1) = -h(k, k - 1);
      p += s;
      x = p / s;
      y = q / s;
      z = r / s;
      q /= p;
      r /= p;
      // row modification
      for (int j = k; j <= en; ++j) {
        double pp = h(k, j) + q * h(k + 1, j);
        if (notlast) pp += r * h(k + 2, j);
        h(k, j) -= pp * x;
        h(k + 1, j) -= pp * y;
        if (notlast) h(k + 2, j) -= pp * z;
      }
      // column modification
      const int iend = std::min(en, k + 3);
      for (int i = l; i <= iend; ++i) {
        double pp = x * h(i, k) + y * h(i, k + 1);
        if (notlast) pp += z * h(i, k + 2);
        h(i, k) -= pp;
        h(i, k + 1) -= pp * q;
        if (notlast) h(i, k + 2) -= pp * r;
      }
    }
  }
  return eig;
}

// LU with partial pivoting of (H - lambda I) for Hessenberg H, then a couple
// of inverse-iteration solves. O(n^2).
std::vector<Complex> hessenberg_inverse_iteration(const DenseMatrix &h, Complex lambda) {
  const int n = h.rows;
  // band storage: row i has columns [i-1 .. n)
  std::vector<std::vector<Complex>> m(n);
  for (int i = 0; i < n; ++i) {
    m[i].assign(n - std::max(0, i - 1), Complex(0, 0));
    for (int j = std::max(0, i - 1); j < n; ++j)
      m[i][j - std::max(0, i - 1)] = Complex(h(i, j), 0.0) - (i == j ? lambda : Complex(0, 0));
  }
  auto at = [&](int i, int j) -> Complex & { return m[i][j - std::max(0, i - 1)]; };

  double hnorm = std::max(h.norm_max(), 1e-300);
  const double pivot_floor = 1e-290;
  std::vector<int> piv(n - 1 > 0 ? n - 1 : 0);
  std::vector<Complex> lmult(n > 0 ? n - 1 : 0);
  // Hessenberg LU: only one subdiagonal to eliminate per column.
  for (int k = 0; k + 1 < n; ++k) {
    Complex akk = at(k, k);
    Complex sub = at(k + 1, k);
    bool swap = std::abs(sub) > std::abs(akk);
    piv[k] = swap;
    if (swap) {
      for (int j = k; j < n; ++j) std::swap(at(k, j), at(k + 1, j));
      akk = at(k, k);
    }
    if (std::abs(akk) < pivot_floor) {
      at(k, k) = Complex(1e-14 * hnorm, 0.0);
      akk = at(k, k);
    }
    Complex l = at(k + 1, k) / akk;
    lmult[k] = l;
    for (int j = k; j < n; ++j) at(k + 1, j) -= l * at(k, j);
  }
  if (n > 0 && std::abs(at(n - 1, n - 1)) < pivot_floor)
    at(n - 1, n - 1) = Complex(1e-14 * hnorm, 0.0);

  std::vector<Complex> x(n, Complex(1.0, 0.0));
  for (int pass = 0; pass < 2; ++pass) {
    // forward substitution with the stored multipliers
    for (int k = 0; k + 1 < n; ++k) {
      if (piv[k]) std::swap(x[k], x[k + 1]);
      x[k + 1] -= lmult[k] * x[k];
    }
    // back substitution (upper triangular part of the band)
    for (int i = n - 1; i >= 0; --i) {
      Complex s = x[i];
      for (int j = i + 1; j < n; ++j) s -= at(i, j) * x[j];
      x[i] = s / at(i, i);
    }
    double nx = 0.0;
    for (auto &c : x) nx += std::norm(c);
    nx = std::sqrt(nx);
    for (auto &c : x) c /= nx;
  }
  return x;
}

}  // namespace

std::vector<Complex> hessenberg_eigenvalues(const DenseMatrix &h) {
  return hessenberg_qr_eigenvalues(h);
}

std::vector<Complex> hessenberg_eigenvector(const HessenbergData &hd, Complex lambda) {
  const int n = hd.h.rows;
  std::vector<Complex> y = hessenberg_inverse_iteration(hd.h, lambda);
  // back-transform: x = D * (Q * y)
  std::vector<Complex> x(n, Complex(0, 0));
  for (int i = 0; i < n; ++i) {
    Complex s(0, 0);
    for (int j = 0; j < n; ++j) s += hd.q(i, j) * y[j];
    x[i] = s * hd.bal[i];
  }
  double nx = 0.0;
  for (auto &c : x) nx += std::norm(c);
  nx = std::sqrt(nx);
  for (auto &c : x) c /= nx;
  return x;
}

EigenResult nonsym_eig(const DenseMatrix &m, bool with_vectors) {
  const int n = m.rows;
  if (m.rows != m.cols) throw DimensionMismatch("nonsym_eig: square input required");
  if (n > 4000) throw ConfigError("nonsym_eig: size guard exceeded (n > 4000)");

  HessenbergData hd = hessenberg_reduce(m, with_vectors);
  EigenResult r;
  r.n = n;
  r.eigenvalues = hessenberg_qr_eigenvalues(hd.h);
  r.converged.assign(n, 1);

  // sort by (real, imag) for reproducible ordering, keeping conjugate pairs
  // adjacent
  std::sort(r.eigenvalues.begin(), r.eigenvalues.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() > b.imag();
  });

  if (with_vectors) {
    r.vectors.resize((std::size_t)n * n);
    for (int j = 0; j < n; ++j) {
      std::vector<Complex> x = hessenberg_eigenvector(hd, r.eigenvalues[j]);
      std::copy(x.begin(), x.end(), r.vectors.begin() + (std::size_t)j * n);
    }
  }
  return r;
}

}  // namespace fdal
