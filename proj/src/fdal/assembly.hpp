#ifndef FDAL_ASSEMBLY_HPP
#define FDAL_ASSEMBLY_HPP

#include <functional>
#include <memory>
#include <vector>

#include "fdal/mesh.hpp"
#include "fdal/quadrature.hpp"
#include "fdal/sparse.hpp"

namespace fdal {

/// Q1 Lagrangian space on a quadrilateral mesh; one dof per node. The
/// optional Dirichlet set constrains a subset of the boundary nodes.
struct FeSpace {
  std::shared_ptr<const Mesh> mesh;
  int dof_count = 0;
  std::vector<int> dirichlet;  // ascending, subset of mesh->boundary_nodes

  bool is_constrained(int dof) const;
};

FeSpace make_space(std::shared_ptr<const Mesh> mesh, bool dirichlet_boundary);

/// Q1 shape values at a reference point, node order (0,0),(1,0),(1,1),(0,1).
void q1_shape(double xi, double eta, double n[4]);
void q1_shape_grad(double xi, double eta, double dxi[4], double deta[4]);

/// coefficient * (grad u, grad v) with 2x2 Gauss quadrature. With
/// apply_dirichlet the constrained rows/columns are replaced symmetrically by
/// unit vectors so the matrix keeps size dof_count.
SparseMatrix assemble_stiffness(const FeSpace &space, double coefficient, bool apply_dirichlet);

/// (u, v) mass matrix, 2x2 Gauss quadrature, no constraints.
SparseMatrix assemble_mass(const FeSpace &space);

/// Coupling matrix C[k,i] = (psi_k, phi_i) over the immersed mesh, the
/// background basis evaluated through point location. quad_order x quad_order
/// Gauss points per immersed cell.
SparseMatrix assemble_coupling(const FeSpace &bg_space, const FeSpace &im_space, int quad_order);

/// Load vector (f, phi_i); Dirichlet-constrained entries set to 0.
std::vector<double> assemble_load(const FeSpace &space,
                                  const std::function<double(double, double)> &f);

}  // namespace fdal

#endif
