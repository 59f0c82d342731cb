#ifndef FDAL_QUADRATURE_HPP
#define FDAL_QUADRATURE_HPP

#include <array>
#include <vector>

namespace fdal {

/// Tensor-product Gauss-Legendre rule on the reference square [0,1]^2.
/// Weights sum to 1 (the reference measure); a rule of `order` points per
/// direction integrates tensor polynomials of degree 2*order-1 exactly.
struct QuadratureRule {
  std::vector<std::array<double, 2>> points;
  std::vector<double> weights;
};

/// 1D Gauss-Legendre nodes/weights on [0,1], computed by Newton iteration on
/// the Legendre polynomial.
void gauss_legendre_1d(int order, std::vector<double> &points, std::vector<double> &weights);

QuadratureRule tensor_gauss_rule(int order);

}  // namespace fdal

#endif
