#ifndef FDAL_AUGMENTED_HPP
#define FDAL_AUGMENTED_HPP

#include <memory>

#include "fdal/amg.hpp"
#include "fdal/dense.hpp"
#include "fdal/krylov.hpp"
#include "fdal/problem.hpp"

namespace fdal {

enum class WMode { exact_msquared, diag };
enum class Variant { ideal_al, inexact_al, mal_diag, baseline_triangular, none };

Variant variant_from_string(const std::string &s);
std::string to_string(Variant v);

/// The gamma-augmented operator of the saddle system. In diag mode the four
/// augmented blocks are materialized as CSR (W replaced by diag(M^2) in both
/// the system and the preconditioner); in exact mode W = M^2 is applied
/// through two Cholesky solves and the operator stays implicit.
struct AugmentedSystem {
  const SaddleSystem *sys = nullptr;
  double gamma1 = 0.0, gamma2 = 0.0;
  WMode w_mode = WMode::exact_msquared;
  int n = 0, m = 0, ell = 0;

  // diag mode
  std::vector<double> w_diag;
  SparseMatrix A11, A12, A21, A22;

  // exact mode
  std::shared_ptr<CholeskyFactorization> m_chol;

  int total_size() const { return n + m + ell; }
  std::vector<double> apply_w_inv(const std::vector<double> &r) const;
  /// Full (n+m+ell) x (n+m+ell) augmented operator.
  void apply(const std::vector<double> &x, std::vector<double> &y) const;
  /// The (n+m) augmented block A_gamma (gamma1 rows on top, gamma2 below).
  void apply_block(const std::vector<double> &x, std::vector<double> &y) const;
};

AugmentedSystem augment_system(const SaddleSystem &sys, double gamma1, double gamma2,
                               WMode w_mode);

struct PrecStats {
  long inner_total = 0;          // all inner iterations
  long block1_inner_total = 0;   // inner iterations attributed to the (1,1) block
  long applications = 0;
  bool inner_failure = false;    // some inner solve missed its tolerance
};

class Preconditioner {
 public:
  virtual ~Preconditioner() = default;
  virtual void apply(const std::vector<double> &r, std::vector<double> &z) = 0;
  PrecStats stats;
};

/// Ideal AL preconditioner: exact W = M^2 and a dense LU of the materialized
/// augmented block A_gamma. Requires gamma1 == gamma2.
std::unique_ptr<Preconditioner> make_ideal_al(const AugmentedSystem &aug);

/// Ideal AL with inexact A_gamma inversion: CG at a loose tolerance,
/// preconditioned by one AMG V-cycle on each augmented diagonal block.
/// Requires diag mode.
std::unique_ptr<Preconditioner> make_inexact_al(const AugmentedSystem &aug, double inner_rtol,
                                                int inner_maxit);

/// Modified AL (diag variant): block upper-triangular with Shat = -(1/gamma1) W,
/// the two diagonal blocks solved independently by CG+AMG (or LU when
/// exact_inner is set).
std::unique_ptr<Preconditioner> make_mal(const AugmentedSystem &aug, double inner_rtol,
                                         int inner_maxit, bool exact_inner);

/// Literature baseline: block upper-triangular on the original system,
/// inverting A and the coupled [[A2, -C2^T], [-C2, 0]] block by LU.
std::unique_ptr<Preconditioner> make_baseline_triangular(const SaddleSystem &sys);

struct PreconditionerSpec {
  Variant variant = Variant::mal_diag;
  double gamma = 10.0;                   // ideal / inexact AL
  double gamma1 = 10.0, gamma2 = 1e-2;   // modified AL
  double inner_rtol = 1e-2;
  int inner_maxit = 200;
  bool exact_inner = false;
  double rtol = 1e-10, atol = 1e-10;
  int restart = 30;
  int maxit = 500;
};

struct SolveResult {
  std::vector<double> u, u2, lambda;
  SolveReport report;
  double original_residual_rel = 0.0;   // residual of the unaugmented system
  double constraint_residual_inf = 0.0;
  bool postcondition_ok = false;
};

SolveResult solve_interface_problem(const SaddleSystem &sys, const PreconditionerSpec &spec);
SolveResult solve_interface_problem(const ProblemConfig &cfg, const PreconditionerSpec &spec);

}  // namespace fdal

#endif
