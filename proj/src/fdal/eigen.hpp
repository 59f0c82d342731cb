#ifndef FDAL_EIGEN_HPP
#define FDAL_EIGEN_HPP

#include <complex>
#include <vector>

#include "fdal/dense.hpp"

namespace fdal {

using Complex = std::complex<double>;

struct EigenResult {
  std::vector<Complex> eigenvalues;
  /// Eigenvector j (when requested) occupies vectors[j*n .. (j+1)*n).
  std::vector<Complex> vectors;
  int n = 0;
  std::vector<char> converged;

  bool has_vectors() const { return !vectors.empty(); }
  Complex vec(int i, int j) const { return vectors[(std::size_t)j * n + i]; }
};

/// Eigenvalues/eigenvectors of a symmetric matrix by cyclic Jacobi rotations.
/// Sweeps run until the off-diagonal Frobenius norm drops below 1e-13*||M||.
/// Eigenvalues come out ascending with orthonormal eigenvectors. Throws
/// NotSPD-style asymmetry error if M deviates from symmetry beyond 1e-12
/// relative.
EigenResult sym_eig(const DenseMatrix &m, bool with_vectors = true);

/// Generalized symmetric eigenproblem Q v = lambda N v with Q symmetric PSD
/// and N SPD, reduced via N = L L^T to a standard Jacobi solve.
EigenResult gen_sym_eig(const DenseMatrix &q, const DenseMatrix &n_mat,
                        bool with_vectors = false);

/// Intermediate state of the Hessenberg reduction: balanced H, the
/// accumulated orthogonal Q and the (radix-2) balancing diagonal so that
/// M = D Q H Q^T D^{-1}.
struct HessenbergData {
  DenseMatrix h;
  DenseMatrix q;
  std::vector<double> bal;
};

HessenbergData hessenberg_reduce(DenseMatrix m, bool accumulate_q);

/// Eigenvalues of an (already reduced) Hessenberg matrix by Francis QR.
std::vector<Complex> hessenberg_eigenvalues(const DenseMatrix &h);

/// All eigenvalues of a general square matrix via balancing, Householder
/// Hessenberg reduction and Francis double-shift QR. Complex eigenvalues come
/// out in exact conjugate pairs. Eigenvectors, if requested, are obtained by
/// inverse iteration on the Hessenberg form and back-transformed.
EigenResult nonsym_eig(const DenseMatrix &m, bool with_vectors = false);

/// Inverse-iteration eigenvector of the original matrix for one eigenvalue,
/// reusing a Hessenberg reduction (hd must have been built with
/// accumulate_q = true).
std::vector<Complex> hessenberg_eigenvector(const HessenbergData &hd, Complex lambda);

}  // namespace fdal

#endif
