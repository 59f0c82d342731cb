#ifndef FDAL_KRYLOV_HPP
#define FDAL_KRYLOV_HPP

#include <functional>
#include <vector>

#include "fdal/errors.hpp"

namespace fdal {

/// y = op(x); both vectors preallocated to the operator size.
using LinOp = std::function<void(const std::vector<double> &, std::vector<double> &)>;

struct SolveReport {
  int iterations = 0;
  bool converged = false;
  std::vector<double> residual_history;  // relative; last entry is recomputed
  long inner_iterations_total = 0;
  double inner_iterations_avg = 0.0;
  double wall_time = 0.0;
  double true_relative_residual = 0.0;
};

/// Preconditioned conjugate gradients with zero initial guess. `prec` may be
/// empty (identity). Throws IndefiniteOperator when p^T A p <= 0 shows up.
std::pair<std::vector<double>, SolveReport> cg(int n, const LinOp &op,
                                               const std::vector<double> &b, const LinOp &prec,
                                               double rtol, int maxit);

/// Flexible GMRES with restart and right preconditioning, zero initial guess.
/// The preconditioner may change between applications (the preconditioned
/// Krylov vectors are stored). Stops when ||b - A x|| <= max(rtol*||b||, atol).
std::pair<std::vector<double>, SolveReport> fgmres(int n, const LinOp &op,
                                                   const std::vector<double> &b,
                                                   const LinOp &right_prec, int restart,
                                                   double rtol, double atol, int maxit);

}  // namespace fdal

#endif
