#ifndef FDAL_PROBLEM_HPP
#define FDAL_PROBLEM_HPP

#include <functional>
#include <memory>
#include <string>

#include "fdal/assembly.hpp"
#include "fdal/sparse.hpp"

namespace fdal {

enum class GeometryKind { unit_square_41, square_in_square, disk_in_square };
enum class BcType { dirichlet_zero, neumann_zero };
enum class ForcingKind { constant, sin_tanh };

GeometryKind geometry_from_string(const std::string &s);
std::string to_string(GeometryKind g);
BcType bc_from_string(const std::string &s);
std::string to_string(BcType b);
ForcingKind forcing_from_string(const std::string &s);
std::string to_string(ForcingKind f);

struct ProblemConfig {
  GeometryKind geometry = GeometryKind::unit_square_41;
  int bg_cells = 32;       // background cells per side
  int immersed_param = 8;  // cells per side (squares) / refinement level (disk)
  double beta = 1.0;
  double beta2 = 100.0;
  ForcingKind forcing = ForcingKind::constant;
  BcType bc = BcType::dirichlet_zero;
  int coupling_quad_order = 3;
};

/// The five blocks and right-hand sides of the 3x3 saddle system, plus the
/// spaces they were assembled from.
struct SaddleSystem {
  SparseMatrix A;    // n x n, SPD after Dirichlet
  SparseMatrix A2;   // m x m, SPSD with kernel span{1}
  SparseMatrix C;    // ell x n
  SparseMatrix C2;   // ell x m (the multiplier mass matrix here)
  SparseMatrix M;    // ell x ell, SPD
  std::vector<double> f;
  std::vector<double> g;
  double beta = 0.0, beta2 = 0.0;
  int n = 0, m = 0, ell = 0;

  FeSpace bg_space, im_space;

  int total_size() const { return n + m + ell; }
  double immersed_h() const { return im_space.mesh->h; }

  /// y = [A 0 C^T; 0 A2 -C2^T; C -C2 0] x.
  void apply_original(const std::vector<double> &x, std::vector<double> &y) const;
  std::vector<double> rhs() const;  // (f; g; 0)
  /// max-norm of C u - C2 u2 for a stacked solution vector.
  double constraint_residual_inf(const std::vector<double> &x) const;
};

std::function<double(double, double)> forcing_f(ForcingKind kind);
std::function<double(double, double)> forcing_f2(ForcingKind kind);

SaddleSystem build_saddle_system(const ProblemConfig &cfg);

}  // namespace fdal

#endif
