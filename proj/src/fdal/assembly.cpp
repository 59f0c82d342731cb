#include "fdal/assembly.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace fdal {

bool FeSpace::is_constrained(int dof) const {
  return std::binary_search(dirichlet.begin(), dirichlet.end(), dof);
}

FeSpace make_space(std::shared_ptr<const Mesh> mesh, bool dirichlet_boundary) {
  FeSpace s;
  s.dof_count = mesh->node_count();
  if (dirichlet_boundary) s.dirichlet = mesh->boundary_nodes;
  s.mesh = std::move(mesh);
  return s;
}

void q1_shape(double xi, double eta, double n[4]) {
  n[0] = (1 - xi) * (1 - eta);
  n[1] = xi * (1 - eta);
  n[2] = xi * eta;
  n[3] = (1 - xi) * eta;
}

void q1_shape_grad(double xi, double eta, double dxi[4], double deta[4]) {
  dxi[0] = -(1 - eta);
  dxi[1] = (1 - eta);
  dxi[2] = eta;
  dxi[3] = -eta;
  deta[0] = -(1 - xi);
  deta[1] = -xi;
  deta[2] = xi;
  deta[3] = (1 - xi);
}

namespace {

struct CellGeometry {
  // Jacobian at one quadrature point and physical shape gradients
  double det;
  double gx[4], gy[4];
};

CellGeometry cell_geometry_at(const Mesh &mesh, int c, double xi, double eta) {
  const auto &cl = mesh.cells[c];
  double dxi[4], deta[4];
  q1_shape_grad(xi, eta, dxi, deta);
  double j11 = 0, j12 = 0, j21 = 0, j22 = 0;
  for (int v = 0; v < 4; ++v) {
    const Point2 &p = mesh.nodes[cl[v]];
    j11 += dxi[v] * p[0];
    j21 += dxi[v] * p[1];
    j12 += deta[v] * p[0];
    j22 += deta[v] * p[1];
  }
  CellGeometry g;
  g.det = j11 * j22 - j12 * j21;
  const double inv = 1.0 / g.det;
  // grad_phys = J^{-T} grad_ref
  for (int v = 0; v < 4; ++v) {
    g.gx[v] = inv * (j22 * dxi[v] - j21 * deta[v]);
    g.gy[v] = inv * (-j12 * dxi[v] + j11 * deta[v]);
  }
  return g;
}

// Per-cell local matrices are computed in parallel; the scatter into triplets
// runs serially in cell order so assembly is bit-reproducible.
template <typename LocalFn>
SparseMatrix assemble_cellwise(const FeSpace &space, bool apply_dirichlet, LocalFn local) {
  const Mesh &mesh = *space.mesh;
  const int nc = mesh.cell_count();
  std::vector<std::array<double, 16>> locals(nc);
#pragma omp parallel for schedule(static)
  for (int c = 0; c < nc; ++c) local(c, locals[c]);

  std::vector<int> ti, tj;
  std::vector<double> tv;
  ti.reserve((std::size_t)nc * 16 + space.dirichlet.size());
  tj.reserve(ti.capacity());
  tv.reserve(ti.capacity());
  for (int c = 0; c < nc; ++c) {
    const auto &cl = mesh.cells[c];
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        const int i = cl[a], j = cl[b];
        if (apply_dirichlet && (space.is_constrained(i) || space.is_constrained(j))) continue;
        ti.push_back(i);
        tj.push_back(j);
        tv.push_back(locals[c][a * 4 + b]);
      }
  }
  if (apply_dirichlet)
    for (int i : space.dirichlet) {
      ti.push_back(i);
      tj.push_back(i);
      tv.push_back(1.0);
    }
  return SparseMatrix::from_triplets(space.dof_count, space.dof_count, ti, tj, tv);
}

}  // namespace

SparseMatrix assemble_stiffness(const FeSpace &space, double coefficient, bool apply_dirichlet) {
  const QuadratureRule rule = tensor_gauss_rule(2);
  const Mesh &mesh = *space.mesh;
  return assemble_cellwise(space, apply_dirichlet, [&](int c, std::array<double, 16> &ke) {
    ke.fill(0.0);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const CellGeometry g = cell_geometry_at(mesh, c, rule.points[q][0], rule.points[q][1]);
      const double w = coefficient * rule.weights[q] * g.det;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          ke[a * 4 + b] += w * (g.gx[a] * g.gx[b] + g.gy[a] * g.gy[b]);
    }
  });
}

SparseMatrix assemble_mass(const FeSpace &space) {
  const QuadratureRule rule = tensor_gauss_rule(2);
  const Mesh &mesh = *space.mesh;
  return assemble_cellwise(space, false, [&](int c, std::array<double, 16> &ke) {
    ke.fill(0.0);
    double shp[4];
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      q1_shape(rule.points[q][0], rule.points[q][1], shp);
      const double det = mesh.jacobian_det(c, rule.points[q][0], rule.points[q][1]);
      const double w = rule.weights[q] * det;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) ke[a * 4 + b] += w * shp[a] * shp[b];
    }
  });
}

SparseMatrix assemble_coupling(const FeSpace &bg_space, const FeSpace &im_space, int quad_order) {
  if (quad_order < 2) throw ConfigError("assemble_coupling: quad_order must be >= 2");
  const QuadratureRule rule = tensor_gauss_rule(quad_order);
  const Mesh &bg = *bg_space.mesh;
  const Mesh &im = *im_space.mesh;
  const int nc = im.cell_count();
  const int npq = (int)rule.points.size();

  struct Contribution {
    int k, i;
    double v;
  };
  std::vector<std::vector<Contribution>> per_cell(nc);
#pragma omp parallel for schedule(static)
  for (int c = 0; c < nc; ++c) {
    auto &out = per_cell[c];
    out.reserve((std::size_t)npq * 16);
    double psi[4], phi[4];
    for (int q = 0; q < npq; ++q) {
      const double xi = rule.points[q][0], eta = rule.points[q][1];
      q1_shape(xi, eta, psi);
      const double det = im.jacobian_det(c, xi, eta);
      const double w = rule.weights[q] * det;
      const Point2 x = im.map_to_physical(c, xi, eta);
      const CellLocation loc = locate_point(bg, x);  // PointOutsideMesh propagates
      q1_shape(loc.ref_coords[0], loc.ref_coords[1], phi);
      const auto &bg_cl = bg.cells[loc.cell_index];
      const auto &im_cl = im.cells[c];
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          out.push_back({im_cl[a], bg_cl[b], w * psi[a] * phi[b]});
    }
  }

  std::vector<int> ti, tj;
  std::vector<double> tv;
  for (int c = 0; c < nc; ++c)
    for (const auto &t : per_cell[c]) {
      ti.push_back(t.k);
      tj.push_back(t.i);
      tv.push_back(t.v);
    }
  return SparseMatrix::from_triplets(im_space.dof_count, bg_space.dof_count, ti, tj, tv);
}

std::vector<double> assemble_load(const FeSpace &space,
                                  const std::function<double(double, double)> &f) {
  const QuadratureRule rule = tensor_gauss_rule(2);
  const Mesh &mesh = *space.mesh;
  const int nc = mesh.cell_count();
  std::vector<std::array<double, 4>> locals(nc);
#pragma omp parallel for schedule(static)
  for (int c = 0; c < nc; ++c) {
    auto &le = locals[c];
    le.fill(0.0);
    double shp[4];
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      q1_shape(rule.points[q][0], rule.points[q][1], shp);
      const double det = mesh.jacobian_det(c, rule.points[q][0], rule.points[q][1]);
      const Point2 x = mesh.map_to_physical(c, rule.points[q][0], rule.points[q][1]);
      const double w = rule.weights[q] * det * f(x[0], x[1]);
      for (int a = 0; a < 4; ++a) le[a] += w * shp[a];
    }
  }
  std::vector<double> b(space.dof_count, 0.0);
  for (int c = 0; c < nc; ++c)
    for (int a = 0; a < 4; ++a) b[mesh.cells[c][a]] += locals[c][a];
  for (int i : space.dirichlet) b[i] = 0.0;
  return b;
}

}  // namespace fdal
