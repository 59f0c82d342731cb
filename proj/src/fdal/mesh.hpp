#ifndef FDAL_MESH_HPP
#define FDAL_MESH_HPP

#include <array>
#include <string>
#include <vector>

#include "fdal/errors.hpp"

namespace fdal {

using Point2 = std::array<double, 2>;

enum class GeometryTag { box, disk };

/// Quadrilateral mesh, immutable after construction. Cells hold node indices
/// in counterclockwise order; the bilinear reference element is [0,1]^2.
struct Mesh {
  std::vector<Point2> nodes;
  std::vector<std::array<int, 4>> cells;
  std::vector<int> boundary_nodes;  // ascending
  double h = 0.0;                   // max cell diameter
  double h_min = 0.0;               // min cell diameter
  GeometryTag geometry_tag = GeometryTag::box;

  // structured-box fast path
  bool structured = false;
  Point2 lo{{0.0, 0.0}}, hi{{0.0, 0.0}};
  int cells_per_side = 0;

  // disk metadata (boundary projection target)
  Point2 center{{0.0, 0.0}};
  double radius = 0.0;

  // uniform-bin acceleration for locate_point on unstructured meshes
  int bins_x = 0, bins_y = 0;
  Point2 bbox_lo{{0.0, 0.0}}, bbox_hi{{0.0, 0.0}};
  std::vector<std::vector<int>> bin_cells;

  int node_count() const { return (int)nodes.size(); }
  int cell_count() const { return (int)cells.size(); }
  bool is_boundary_node(int i) const;

  /// Bilinear map of cell c at reference coordinates (xi, eta) in [0,1]^2.
  Point2 map_to_physical(int c, double xi, double eta) const;
  /// Jacobian determinant of the bilinear map at (xi, eta).
  double jacobian_det(int c, double xi, double eta) const;
  /// Straight-edge quad area of cell c (shoelace).
  double cell_area(int c) const;
  double total_area() const;
  double cell_diameter(int c) const;
};

struct CellLocation {
  int cell_index = -1;
  Point2 ref_coords{{0.0, 0.0}};
};

Mesh build_box_mesh(Point2 lo, Point2 hi, int cells_per_side);

/// Disk mesh from a central square (meshed 2x2 at the base level) surrounded
/// by a ring of transfinite annular cells; `refinement_level` halves the mesh
/// size per increment. Boundary nodes sit on the circle to within 1e-12*radius.
Mesh build_disk_mesh(Point2 center, double radius, int refinement_level);

/// Uniform refinement: every cell splits in 4. Box meshes stay structured;
/// disk meshes project new boundary nodes back onto the circle.
Mesh refine_mesh(const Mesh &mesh);

/// Find a cell containing p (closed cells, ties to the lowest cell index) and
/// the reference coordinates from Newton on the bilinear map. Throws
/// PointOutsideMesh when p lies in no cell (tolerance 1e-10*h).
CellLocation locate_point(const Mesh &mesh, Point2 p);

/// Newton inversion of one cell's bilinear map; returns false when the point
/// is not in the closed cell (reference membership within 1e-10).
bool invert_bilinear(const Mesh &mesh, int c, Point2 p, Point2 &ref);

/// Plain-text node/cell dump (counts header, node coordinates, cell tuples).
void export_mesh_text(const Mesh &mesh, const std::string &path);

}  // namespace fdal

#endif
