#ifndef FDAL_EXPERIMENT_HPP
#define FDAL_EXPERIMENT_HPP

#include <cstdint>

#include "fdal/augmented.hpp"
#include "fdal/table.hpp"

namespace fdal {

struct ExperimentConfig {
  GeometryKind geometry = GeometryKind::square_in_square;
  std::vector<std::pair<int, int>> refinement_levels;  // (background, immersed)
  double beta = 1.0;
  std::vector<double> beta2_list{10.0, 1e3, 1e7};
  Variant variant = Variant::mal_diag;
  double gamma = 10.0;
  double gamma1 = 10.0, gamma2 = 1e-2;
  double gamma2_fallback = 1e-3;  // reported in parentheses for the smallest beta2
  bool fallback_for_smallest_beta2 = true;
  ForcingKind forcing = ForcingKind::constant;
  BcType bc = BcType::dirichlet_zero;
  double rtol = 1e-10, atol = 1e-10;
  int restart = 30;
  int maxit = 500;
  double inner_rtol = 1e-2;
  int inner_maxit = 200;
  bool exact_inner = false;
  int coupling_quad_order = 3;
  bool failures_fatal = false;
  std::uint64_t seed = 0;
};

struct ExperimentResult {
  ResultTable table;
  ResultTable timings;  // same layout, wall-clock seconds per cell
  bool any_failure = false;
};

/// Run the (level x beta2) sweep for one preconditioner variant. Cells that
/// do not converge within maxit get a dagger marker instead of a count.
ExperimentResult run_experiment(const ExperimentConfig &cfg);

}  // namespace fdal

#endif
