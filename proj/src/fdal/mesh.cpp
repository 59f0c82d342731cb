#include "fdal/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

namespace fdal {

namespace {

void finalize_mesh(Mesh &m) {
  // boundary nodes: nodes of edges owned by exactly one cell
  std::map<std::pair<int, int>, int> edge_count;
  for (const auto &c : m.cells)
    for (int e = 0; e < 4; ++e) {
      int a = c[e], b = c[(e + 1) % 4];
      edge_count[{std::min(a, b), std::max(a, b)}]++;
    }
  std::set<int> bset;
  for (const auto &[edge, cnt] : edge_count)
    if (cnt == 1) {
      bset.insert(edge.first);
      bset.insert(edge.second);
    }
  m.boundary_nodes.assign(bset.begin(), bset.end());

  m.h = 0.0;
  m.h_min = 1e300;
  for (int c = 0; c < m.cell_count(); ++c) {
    const double d = m.cell_diameter(c);
    m.h = std::max(m.h, d);
    m.h_min = std::min(m.h_min, d);
    // positive bilinear Jacobian at all four vertices
    static const double corners[4][2] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    for (auto &xy : corners)
      if (!(m.jacobian_det(c, xy[0], xy[1]) > 0.0))
        throw ConfigError("mesh cell " + std::to_string(c) +
                          " has a nonpositive Jacobian");
  }
  if (m.h > 4.0 * m.h_min)
    throw ConfigError("mesh violates quasi-uniformity (max/min diameter > 4)");

  // bounding box + uniform bins for point location
  m.bbox_lo = {1e300, 1e300};
  m.bbox_hi = {-1e300, -1e300};
  for (const auto &p : m.nodes) {
    m.bbox_lo[0] = std::min(m.bbox_lo[0], p[0]);
    m.bbox_lo[1] = std::min(m.bbox_lo[1], p[1]);
    m.bbox_hi[0] = std::max(m.bbox_hi[0], p[0]);
    m.bbox_hi[1] = std::max(m.bbox_hi[1], p[1]);
  }
  if (!m.structured) {
    const int nb = std::max(1, (int)std::sqrt((double)m.cell_count()));
    m.bins_x = nb;
    m.bins_y = nb;
    m.bin_cells.assign((std::size_t)nb * nb, {});
    const double wx = (m.bbox_hi[0] - m.bbox_lo[0]) / nb;
    const double wy = (m.bbox_hi[1] - m.bbox_lo[1]) / nb;
    for (int c = 0; c < m.cell_count(); ++c) {
      double clo_x = 1e300, clo_y = 1e300, chi_x = -1e300, chi_y = -1e300;
      for (int v = 0; v < 4; ++v) {
        const Point2 &p = m.nodes[m.cells[c][v]];
        clo_x = std::min(clo_x, p[0]);
        clo_y = std::min(clo_y, p[1]);
        chi_x = std::max(chi_x, p[0]);
        chi_y = std::max(chi_y, p[1]);
      }
      int ix0 = std::clamp((int)((clo_x - m.bbox_lo[0]) / wx), 0, nb - 1);
      int ix1 = std::clamp((int)((chi_x - m.bbox_lo[0]) / wx), 0, nb - 1);
      int iy0 = std::clamp((int)((clo_y - m.bbox_lo[1]) / wy), 0, nb - 1);
      int iy1 = std::clamp((int)((chi_y - m.bbox_lo[1]) / wy), 0, nb - 1);
      for (int iy = iy0; iy <= iy1; ++iy)
        for (int ix = ix0; ix <= ix1; ++ix)
          m.bin_cells[(std::size_t)iy * nb + ix].push_back(c);
    }
  }
}

}  // namespace

bool Mesh::is_boundary_node(int i) const {
  return std::binary_search(boundary_nodes.begin(), boundary_nodes.end(), i);
}

Point2 Mesh::map_to_physical(int c, double xi, double eta) const {
  const auto &cl = cells[c];
  const double n0 = (1 - xi) * (1 - eta), n1 = xi * (1 - eta), n2 = xi * eta,
               n3 = (1 - xi) * eta;
  return {n0 * nodes[cl[0]][0] + n1 * nodes[cl[1]][0] + n2 * nodes[cl[2]][0] +
              n3 * nodes[cl[3]][0],
          n0 * nodes[cl[0]][1] + n1 * nodes[cl[1]][1] + n2 * nodes[cl[2]][1] +
              n3 * nodes[cl[3]][1]};
}

double Mesh::jacobian_det(int c, double xi, double eta) const {
  const auto &cl = cells[c];
  const Point2 &p0 = nodes[cl[0]], &p1 = nodes[cl[1]], &p2 = nodes[cl[2]],
               &p3 = nodes[cl[3]];
  const double dx_dxi = (1 - eta) * (p1[0] - p0[0]) + eta * (p2[0] - p3[0]);
  const double dy_dxi = (1 - eta) * (p1[1] - p0[1]) + eta * (p2[1] - p3[1]);
  const double dx_deta = (1 - xi) * (p3[0] - p0[0]) + xi * (p2[0] - p1[0]);
  const double dy_deta = (1 - xi) * (p3[1] - p0[1]) + xi * (p2[1] - p1[1]);
  return dx_dxi * dy_deta - dx_deta * dy_dxi;
}

double Mesh::cell_area(int c) const {
  const auto &cl = cells[c];
  double a = 0.0;
  for (int e = 0; e < 4; ++e) {
    const Point2 &p = nodes[cl[e]], &q = nodes[cl[(e + 1) % 4]];
    a += p[0] * q[1] - q[0] * p[1];
  }
  return 0.5 * a;
}

double Mesh::total_area() const {
  double a = 0.0;
  for (int c = 0; c < cell_count(); ++c) a += cell_area(c);
  return a;
}

double Mesh::cell_diameter(int c) const {
  const auto &cl = cells[c];
  double d = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      const double dx = nodes[cl[i]][0] - nodes[cl[j]][0];
      const double dy = nodes[cl[i]][1] - nodes[cl[j]][1];
      d = std::max(d, std::hypot(dx, dy));
    }
  return d;
}

Mesh build_box_mesh(Point2 lo, Point2 hi, int cells_per_side) {
  if (!(lo[0] < hi[0] && lo[1] < hi[1]))
    throw ConfigError("build_box_mesh: lo must be strictly below hi componentwise");
  if (cells_per_side < 1) throw ConfigError("build_box_mesh: cells_per_side must be >= 1");
  Mesh m;
  m.geometry_tag = GeometryTag::box;
  m.structured = true;
  m.lo = lo;
  m.hi = hi;
  m.cells_per_side = cells_per_side;
  const int n = cells_per_side;
  const double dx = (hi[0] - lo[0]) / n, dy = (hi[1] - lo[1]) / n;
  m.nodes.reserve((std::size_t)(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      m.nodes.push_back({lo[0] + i * dx, lo[1] + j * dy});
  m.cells.reserve((std::size_t)n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int a = j * (n + 1) + i;
      m.cells.push_back({a, a + 1, a + n + 2, a + n + 1});
    }
  finalize_mesh(m);
  return m;
}

Mesh build_disk_mesh(Point2 center, double radius, int refinement_level) {
  if (!(radius > 0.0)) throw ConfigError("build_disk_mesh: radius must be positive");
  if (refinement_level < 0) throw ConfigError("build_disk_mesh: level must be >= 0");
  Mesh m;
  m.geometry_tag = GeometryTag::disk;
  m.center = center;
  m.radius = radius;

  const int q = 2 << refinement_level;  // cells per central-square side, >= 2
  const double a = 0.5 * radius / std::sqrt(2.0);  // central square corners at r/2

  // central square grid
  for (int j = 0; j <= q; ++j)
    for (int i = 0; i <= q; ++i)
      m.nodes.push_back({center[0] - a + 2.0 * a * i / q, center[1] - a + 2.0 * a * j / q});
  auto sq_id = [&](int i, int j) { return j * (q + 1) + i; };

  // perimeter of the central square, counterclockwise from corner (a, -a)
  auto inner_point = [&](int s) -> Point2 {
    const int side = s / q, u = s % q;
    const double f = 2.0 * a * u / q;
    switch (side) {
      case 0: return {center[0] + a, center[1] - a + f};           // east
      case 1: return {center[0] + a - f, center[1] + a};           // north
      case 2: return {center[0] - a, center[1] + a - f};           // west
      default: return {center[0] - a + f, center[1] - a};          // south
    }
  };
  auto inner_id = [&](int s) -> int {
    const int side = s / q, u = s % q;
    switch (side) {
      case 0: return sq_id(q, u);
      case 1: return sq_id(q - u, q);
      case 2: return sq_id(0, q - u);
      default: return sq_id(u, 0);
    }
  };

  // transfinite annular ring: layers t = 1..q/2 of 4q nodes each
  const int ring = 4 * q;
  const int layers = q / 2;
  const int ring_base = (int)m.nodes.size();
  for (int t = 1; t <= layers; ++t) {
    const double rho = (double)t / layers;
    for (int s = 0; s < ring; ++s) {
      const Point2 in = inner_point(s);
      const double theta = -0.25 * M_PI + 2.0 * M_PI * s / ring;
      const Point2 out = {center[0] + radius * std::cos(theta),
                          center[1] + radius * std::sin(theta)};
      m.nodes.push_back({(1 - rho) * in[0] + rho * out[0], (1 - rho) * in[1] + rho * out[1]});
    }
  }
  auto ring_id = [&](int t, int s) -> int {
    s = ((s % ring) + ring) % ring;
    if (t == 0) return inner_id(s);
    return ring_base + (t - 1) * ring + s;
  };

  for (int j = 0; j < q; ++j)
    for (int i = 0; i < q; ++i)
      m.cells.push_back({sq_id(i, j), sq_id(i + 1, j), sq_id(i + 1, j + 1), sq_id(i, j + 1)});
  for (int t = 0; t < layers; ++t)
    for (int s = 0; s < ring; ++s)
      m.cells.push_back({ring_id(t, s), ring_id(t + 1, s), ring_id(t + 1, s + 1), ring_id(t, s + 1)});

  finalize_mesh(m);
  return m;
}

Mesh refine_mesh(const Mesh &mesh) {
  if (mesh.structured)
    return build_box_mesh(mesh.lo, mesh.hi, 2 * mesh.cells_per_side);

  Mesh m;
  m.geometry_tag = mesh.geometry_tag;
  m.center = mesh.center;
  m.radius = mesh.radius;
  m.nodes = mesh.nodes;

  std::map<std::pair<int, int>, int> edge_mid;
  auto midpoint_id = [&](int na, int nb) -> int {
    auto key = std::make_pair(std::min(na, nb), std::max(na, nb));
    auto it = edge_mid.find(key);
    if (it != edge_mid.end()) return it->second;
    const int id = (int)m.nodes.size();
    m.nodes.push_back({0.5 * (mesh.nodes[na][0] + mesh.nodes[nb][0]),
                       0.5 * (mesh.nodes[na][1] + mesh.nodes[nb][1])});
    edge_mid.emplace(key, id);
    return id;
  };

  for (const auto &c : mesh.cells) {
    const int m01 = midpoint_id(c[0], c[1]);
    const int m12 = midpoint_id(c[1], c[2]);
    const int m23 = midpoint_id(c[2], c[3]);
    const int m30 = midpoint_id(c[3], c[0]);
    const int o = (int)m.nodes.size();
    m.nodes.push_back({0.25 * (mesh.nodes[c[0]][0] + mesh.nodes[c[1]][0] +
                               mesh.nodes[c[2]][0] + mesh.nodes[c[3]][0]),
                       0.25 * (mesh.nodes[c[0]][1] + mesh.nodes[c[1]][1] +
                               mesh.nodes[c[2]][1] + mesh.nodes[c[3]][1])});
    m.cells.push_back({c[0], m01, o, m30});
    m.cells.push_back({m01, c[1], m12, o});
    m.cells.push_back({o, m12, c[2], m23});
    m.cells.push_back({m30, o, m23, c[3]});
  }

  if (mesh.geometry_tag == GeometryTag::disk) {
    // project refined boundary midpoints back onto the circle
    std::map<std::pair<int, int>, int> edge_count;
    for (const auto &c : m.cells)
      for (int e = 0; e < 4; ++e) {
        int na = c[e], nb = c[(e + 1) % 4];
        edge_count[{std::min(na, nb), std::max(na, nb)}]++;
      }
    std::set<int> bset;
    for (const auto &[edge, cnt] : edge_count)
      if (cnt == 1) {
        bset.insert(edge.first);
        bset.insert(edge.second);
      }
    for (int i : bset) {
      const double dx = m.nodes[i][0] - m.center[0];
      const double dy = m.nodes[i][1] - m.center[1];
      const double r = std::hypot(dx, dy);
      m.nodes[i][0] = m.center[0] + m.radius * dx / r;
      m.nodes[i][1] = m.center[1] + m.radius * dy / r;
    }
  }

  finalize_mesh(m);
  return m;
}

bool invert_bilinear(const Mesh &mesh, int c, Point2 p, Point2 &ref) {
  const auto &cl = mesh.cells[c];
  const Point2 &p0 = mesh.nodes[cl[0]], &p1 = mesh.nodes[cl[1]], &p2 = mesh.nodes[cl[2]],
               &p3 = mesh.nodes[cl[3]];
  const double diam = mesh.cell_diameter(c);
  double xi = 0.5, eta = 0.5;
  bool converged = false;
  for (int it = 0; it < 25; ++it) {
    const Point2 x = mesh.map_to_physical(c, xi, eta);
    const double rx = x[0] - p[0], ry = x[1] - p[1];
    if (std::hypot(rx, ry) <= 1e-12 * diam) {
      converged = true;
      break;
    }
    const double j11 = (1 - eta) * (p1[0] - p0[0]) + eta * (p2[0] - p3[0]);
    const double j21 = (1 - eta) * (p1[1] - p0[1]) + eta * (p2[1] - p3[1]);
    const double j12 = (1 - xi) * (p3[0] - p0[0]) + xi * (p2[0] - p1[0]);
    const double j22 = (1 - xi) * (p3[1] - p0[1]) + xi * (p2[1] - p1[1]);
    const double det = j11 * j22 - j12 * j21;
    if (det == 0.0) return false;
    xi -= (j22 * rx - j12 * ry) / det;
    eta -= (-j21 * rx + j11 * ry) / det;
    // keep Newton from wandering far outside the reference cell
    xi = std::clamp(xi, -1.0, 2.0);
    eta = std::clamp(eta, -1.0, 2.0);
  }
  if (!converged) {
    const Point2 x = mesh.map_to_physical(c, xi, eta);
    if (std::hypot(x[0] - p[0], x[1] - p[1]) > 1e-10 * diam) return false;
  }
  ref = {xi, eta};
  const double tol = 1e-10;
  return xi >= -tol && xi <= 1.0 + tol && eta >= -tol && eta <= 1.0 + tol;
}

CellLocation locate_point(const Mesh &mesh, Point2 p) {
  if (mesh.cell_count() == 0) throw PointOutsideMesh("locate_point: empty mesh");
  const double tol = 1e-10 * std::max(mesh.h, 1e-300);

  if (mesh.structured) {
    const int n = mesh.cells_per_side;
    const double dx = (mesh.hi[0] - mesh.lo[0]) / n, dy = (mesh.hi[1] - mesh.lo[1]) / n;
    double ux = (p[0] - mesh.lo[0]) / dx, uy = (p[1] - mesh.lo[1]) / dy;
    if (ux < 0.0 || uy < 0.0 || ux > n || uy > n) {
      if (ux < -tol / dx || uy < -tol / dy || ux > n + tol / dx || uy > n + tol / dy)
        throw PointOutsideMesh("locate_point: point outside box mesh");
    }
    // closed cells, ties to the lowest cell index
    int ix = std::clamp((int)std::floor(ux), 0, n - 1);
    int iy = std::clamp((int)std::floor(uy), 0, n - 1);
    if (ix > 0 && ux == (double)ix) --ix;
    if (iy > 0 && uy == (double)iy) --iy;
    const int c = iy * n + ix;
    Point2 ref;
    if (!invert_bilinear(mesh, c, p, ref)) {
      // clamp roundoff at the boundary of the owning cell
      ref[0] = std::clamp(ref[0], 0.0, 1.0);
      ref[1] = std::clamp(ref[1], 0.0, 1.0);
    }
    return {c, ref};
  }

  const double wx = (mesh.bbox_hi[0] - mesh.bbox_lo[0]) / mesh.bins_x;
  const double wy = (mesh.bbox_hi[1] - mesh.bbox_lo[1]) / mesh.bins_y;
  const int ix = std::clamp((int)((p[0] - mesh.bbox_lo[0]) / wx), 0, mesh.bins_x - 1);
  const int iy = std::clamp((int)((p[1] - mesh.bbox_lo[1]) / wy), 0, mesh.bins_y - 1);
  for (int c : mesh.bin_cells[(std::size_t)iy * mesh.bins_x + ix]) {
    Point2 ref;
    if (invert_bilinear(mesh, c, p, ref)) return {c, ref};
  }
  throw PointOutsideMesh("locate_point: point (" + std::to_string(p[0]) + ", " +
                         std::to_string(p[1]) + ") lies in no cell");
}

void export_mesh_text(const Mesh &mesh, const std::string &path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.precision(17);
  out << "# nodes cells boundary_nodes\n";
  out << mesh.node_count() << " " << mesh.cell_count() << " " << mesh.boundary_nodes.size()
      << "\n";
  for (const auto &p : mesh.nodes) out << p[0] << " " << p[1] << "\n";
  for (const auto &c : mesh.cells)
    out << c[0] << " " << c[1] << " " << c[2] << " " << c[3] << "\n";
  for (int b : mesh.boundary_nodes) out << b << "\n";
}

}  // namespace fdal
