#ifndef DGFEM_MESH_HPP
#define DGFEM_MESH_HPP

#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace dgfem {

enum class EdgeKind { Interior, Dirichlet, Neumann };

struct Node {
  double x = 0.0;
  double y = 0.0;
};

/// Adjacency of an edge: `left` is the element the edge normal points away
/// from (the lower element index for interior edges); `right` is -1 on
/// boundary edges.
struct EdgeElements {
  int left = -1;
  int right = -1;

  bool is_boundary() const { return right < 0; }
};

/// Array-based triangular mesh. Treated as immutable after construction:
/// refinement returns a new mesh.
///
/// Conventions:
///  - element vertices are counter-clockwise (positive signed area);
///  - edges store sorted node pairs (a < b);
///  - local edge l of an element is opposite local vertex l, i.e. it joins
///    local vertices (l+1)%3 and (l+2)%3.
struct Mesh {
  std::vector<Node> nodes;
  std::vector<std::array<int, 3>> elements;
  std::vector<std::array<int, 2>> edges;
  std::vector<EdgeKind> edge_kind;
  std::vector<EdgeElements> edge_elements;
  std::vector<std::array<int, 3>> element_edges;

  int n_nodes() const { return static_cast<int>(nodes.size()); }
  int n_elements() const { return static_cast<int>(elements.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }
  int count_edges(EdgeKind kind) const;
};

/// Builds the full mesh structure from raw arrays: derives the edge table,
/// classifies boundary edges against the Dirichlet/Neumann lists and wires
/// up the edge<->element adjacency. Clockwise elements are reoriented.
///
/// Throws Error with
///  - InvalidTopology   for out-of-range element node indices,
///  - DegenerateElement for zero-area triangles,
///  - NonManifold       for an edge shared by more than two elements,
///  - InvalidBoundarySpec when the Dirichlet/Neumann lists do not partition
///    the boundary (unknown pair, interior pair, duplicate, or an uncovered
///    boundary edge).
Mesh build_mesh(std::vector<Node> nodes,
                std::vector<std::array<int, 3>> elements,
                const std::vector<std::array<int, 2>>& dirichlet_edges,
                const std::vector<std::array<int, 2>>& neumann_edges);

/// Red refinement: each triangle is split into 4 congruent children via edge
/// midpoints; boundary tags are inherited by the child boundary edges.
Mesh uniform_refine(const Mesh& mesh);

/// The coarse 9-node / 8-element triangulation of the unit square. Boundary
/// edges whose midpoint satisfies `neumann_on` are tagged Neumann, the rest
/// Dirichlet (all Dirichlet when the predicate is empty).
Mesh unit_square_mesh(const std::function<bool(double, double)>& neumann_on = {});

/// Affine map data for element K: x = B*xhat + x0 with xhat on the reference
/// triangle (0,0)-(1,0)-(0,1). det > 0, area = det/2, diameter = longest edge.
struct ElementGeometry {
  std::array<std::array<double, 2>, 2> jacobian;     // B
  std::array<std::array<double, 2>, 2> inv_transpose; // B^{-T}
  double det = 0.0;
  double area = 0.0;
  double diameter = 0.0;
  std::array<double, 2> origin{}; // x0 (first vertex)
};

ElementGeometry element_geometry(const Mesh& mesh, int element);

/// Edge length, unit normal and tangent. The tangent points from node a to
/// node b of the (sorted) edge pair; the normal points away from
/// `oriented_from` (the left/lower adjacent element; out of the domain on
/// boundary edges).
struct EdgeGeometryData {
  double length = 0.0;
  std::array<double, 2> normal{};
  std::array<double, 2> tangent{};
  int oriented_from = -1;
};

EdgeGeometryData edge_geometry(const Mesh& mesh, int edge);

double max_element_diameter(const Mesh& mesh);

/// Plain-text mesh files: a header line
///   nodes N elements M dirichlet D neumann B
/// followed by N lines "x y", M lines "i j k" (1-based, CCW), D lines "a b"
/// and B lines "a b" (1-based node pairs).
Mesh read_mesh(std::istream& in);
Mesh read_mesh_file(const std::string& path);
void write_mesh(const Mesh& mesh, std::ostream& out);
void write_mesh_file(const Mesh& mesh, const std::string& path);

} // namespace dgfem

#endif
