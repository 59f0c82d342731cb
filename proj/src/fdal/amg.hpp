#ifndef FDAL_AMG_HPP
#define FDAL_AMG_HPP

#include <memory>
#include <vector>

#include "fdal/dense.hpp"
#include "fdal/sparse.hpp"

namespace fdal {

struct AmgOptions {
  double strength_threshold = 1e-3;  // aggregation threshold
  int coarse_cap = 200;              // max size of the coarsest level
  int presweeps = 2;                 // symmetric Gauss-Seidel
  int postsweeps = 2;
  double jacobi_omega = 2.0 / 3.0;   // prolongation smoothing, divided by rho(D^{-1}A)
  int max_levels = 25;
};

/// Smoothed-aggregation hierarchy. Each level keeps the Galerkin operator,
/// the smoothed prolongation down to it and the diagonal for Gauss-Seidel;
/// the coarsest level is solved directly.
struct AmgHierarchy {
  struct Level {
    SparseMatrix a;
    SparseMatrix p;  // prolongation from the next-coarser level (empty on coarsest)
    std::vector<double> diag;
  };
  std::vector<Level> levels;
  std::unique_ptr<LuFactorization> coarse_lu;
  AmgOptions opts;

  int finest_size() const { return levels.empty() ? 0 : levels.front().a.rows; }
};

AmgHierarchy amg_setup(const SparseMatrix &a, AmgOptions opts = {});

/// One V-cycle applied to a residual; a fixed symmetric linear operation, so
/// it is a valid CG preconditioner.
void amg_vcycle(const AmgHierarchy &h, const std::vector<double> &r, std::vector<double> &z);

}  // namespace fdal

#endif
