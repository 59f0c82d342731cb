#ifndef FDAL_SPECTRAL_HPP
#define FDAL_SPECTRAL_HPP

#include <cstdint>

#include "fdal/augmented.hpp"
#include "fdal/eigen.hpp"

namespace fdal {

struct SpectrumReport {
  std::vector<Complex> eigenvalues;
  int count_at_one = 0;   // |lambda - 1| <= tol_one
  double eta = 1.0;       // smallest eigenvalue below 1 - tol_one (1.0 if none)
  double max_imag = 0.0;
  double tol_one = 1e-6;
  // metadata
  double gamma1 = 0.0, gamma2 = 0.0, beta = 0.0, beta2 = 0.0;
  int n = 0, m = 0, ell = 0;

  double fraction_within(double delta) const;  // |lambda - 1| < delta
};

/// Spectrum of the (preconditioned) augmented matrix, materialized densely
/// with exact inner solves and handed to the dense eigensolver. For
/// Variant::none the raw augmented spectrum is returned. Guards n+m+ell <= 2000.
SpectrumReport preconditioned_spectrum(const SaddleSystem &sys, Variant variant, double gamma1,
                                       double gamma2, WMode w_mode, double tol_one = 1e-6);

/// Residual of the eigenvalue formula lambda = gamma x'B'W^{-1}Bx / (x'Ax + ...)
/// over all computed nonunit eigenpairs of the ideal preconditioned matrix.
double eta_formula_check(const SaddleSystem &sys, double gamma, double tol_one = 1e-6);

/// Observed spectral-equivalence ratios (w'M^{-2}w) / (w' h^{-2} M^{-1} w)
/// over random vectors; returns (min, max).
std::pair<double, double> spectral_equivalence_check(const SparseMatrix &mass, double h,
                                                     int samples, std::uint64_t seed);

struct InfSupReport {
  double sigma1 = 0.0;        // smallest positive pencil eigenvalue
  int zero_count = 0;         // eigenvalues below tolerance
  double theta_bar_sq = 0.0;  // the computable inf-sup bound (= sigma1)
};

/// Algebraic inf-sup pencil B^T (h2^2 M)^{-1} B v = sigma (Atilde + M2tilde) v.
InfSupReport infsup_sigma1(const SaddleSystem &sys, double h2);

/// Relative Frobenius residual of the Sherman-Morrison style identity
/// gamma1 C A11^{-1} C^T W^{-1} = I - (I + gamma1 C A^{-1} C^T W^{-1})^{-1}.
double verify_smw_identity(const SaddleSystem &sys, double gamma1,
                           WMode w_mode = WMode::exact_msquared);

/// Spectrum of the modified-AL lower block [[I-DE, -DG], [-FE, I-FG]]
/// with exact W = M^2.
SpectrumReport mal_block_spectrum(const SaddleSystem &sys, double gamma1, double gamma2,
                                  double tol_one = 1e-6);

/// Eigenvalues of ED + GF (the nonzero spectrum of the rank-l part).
std::vector<Complex> mal_edgf_eigenvalues(const SaddleSystem &sys, double gamma1,
                                          double gamma2);

/// Predicted limit spectrum: eigenvalues of -L A2 with L = M^{-1}CA^{-1}C^T M^{-1},
/// computed through the symmetrization L^{1/2} A2 L^{1/2}. Ascending.
std::vector<double> limit_spectrum_la2(const SaddleSystem &sys);

/// Optimal-assignment (min-cost matching) mean distance between two
/// equally-sized eigenvalue multisets.
double matched_set_distance(const std::vector<Complex> &a, const std::vector<Complex> &b);

}  // namespace fdal

#endif
