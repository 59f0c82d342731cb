#include "fdal/quadrature.hpp"

#include <cmath>

#include "fdal/errors.hpp"

namespace fdal {

void gauss_legendre_1d(int order, std::vector<double> &points, std::vector<double> &weights) {
  if (order < 1) throw ConfigError("gauss_legendre_1d: order must be >= 1");
  const int n = order;
  points.resize(n);
  weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Chebyshev initial guess on [-1,1], then Newton on P_n
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      if (n == 1) p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = (n == 1) ? x : p1;
      pp = n * (x * pn - p0) / (x * x - 1.0);
      const double dx = pn / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    // map [-1,1] -> [0,1]; weight scaled so the rule integrates measure 1
    points[i] = 0.5 * (1.0 - x);
    weights[i] = 0.5 * w;
    points[n - 1 - i] = 0.5 * (1.0 + x);
    weights[n - 1 - i] = 0.5 * w;
  }
  if (n % 2 == 1) {
    points[n / 2] = 0.5;
  }
}

QuadratureRule tensor_gauss_rule(int order) {
  std::vector<double> p1, w1;
  gauss_legendre_1d(order, p1, w1);
  QuadratureRule rule;
  rule.points.reserve((std::size_t)order * order);
  rule.weights.reserve((std::size_t)order * order);
  for (int j = 0; j < order; ++j)
    for (int i = 0; i < order; ++i) {
      rule.points.push_back({p1[i], p1[j]});
      rule.weights.push_back(w1[i] * w1[j]);
    }
  return rule;
}

}  // namespace fdal
