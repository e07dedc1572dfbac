#include "dgfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "dgfem/errors.hpp"

namespace dgfem {

int Mesh::count_edges(EdgeKind kind) const {
  int count = 0;
  for (EdgeKind k : edge_kind) {
    if (k == kind) {
      ++count;
    }
  }
  return count;
}

namespace {

std::array<int, 2> sorted_pair(int a, int b) {
  return a < b ? std::array<int, 2>{a, b} : std::array<int, 2>{b, a};
}

double element_det(const std::vector<Node>& nodes, const std::array<int, 3>& el) {
  const Node& p0 = nodes[el[0]];
  const Node& p1 = nodes[el[1]];
  const Node& p2 = nodes[el[2]];
  return (p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y);
}

double longest_edge(const std::vector<Node>& nodes, const std::array<int, 3>& el) {
  double d = 0.0;
  for (int l = 0; l < 3; ++l) {
    const Node& a = nodes[el[(l + 1) % 3]];
    const Node& b = nodes[el[(l + 2) % 3]];
    d = std::max(d, std::hypot(b.x - a.x, b.y - a.y));
  }
  return d;
}

} // namespace

Mesh build_mesh(std::vector<Node> nodes,
                std::vector<std::array<int, 3>> elements,
                const std::vector<std::array<int, 2>>& dirichlet_edges,
                const std::vector<std::array<int, 2>>& neumann_edges) {
  const int n_nodes = static_cast<int>(nodes.size());
  for (std::size_t e = 0; e < elements.size(); ++e) {
    for (int v : elements[e]) {
      if (v < 0 || v >= n_nodes) {
        throw Error(ErrorCode::InvalidTopology,
                    "element references a node index outside the node table",
                    static_cast<long>(e));
      }
    }
    const double det = element_det(nodes, elements[e]);
    const double diam = longest_edge(nodes, elements[e]);
    if (std::abs(det) <= 1e-14 * diam * diam) {
      throw Error(ErrorCode::DegenerateElement,
                  "element has (numerically) zero area", static_cast<long>(e));
    }
    if (det < 0.0) {
      std::swap(elements[e][1], elements[e][2]);
    }
  }

  // Edge table keyed by sorted node pair; map iteration gives a deterministic
  // lexicographic edge ordering.
  std::map<std::array<int, 2>, std::vector<int>> adjacency;
  for (std::size_t e = 0; e < elements.size(); ++e) {
    const auto& el = elements[e];
    for (int l = 0; l < 3; ++l) {
      adjacency[sorted_pair(el[(l + 1) % 3], el[(l + 2) % 3])].push_back(static_cast<int>(e));
    }
  }

  Mesh mesh;
  mesh.nodes = std::move(nodes);
  mesh.elements = std::move(elements);
  mesh.edges.reserve(adjacency.size());
  mesh.edge_elements.reserve(adjacency.size());
  std::map<std::array<int, 2>, int> edge_index;
  for (const auto& [pair, adj] : adjacency) {
    if (adj.size() > 2) {
      throw Error(ErrorCode::NonManifold,
                  "edge is shared by more than two elements",
                  static_cast<long>(mesh.edges.size()));
    }
    edge_index[pair] = static_cast<int>(mesh.edges.size());
    mesh.edges.push_back(pair);
    EdgeElements ee;
    ee.left = adj[0];
    ee.right = adj.size() == 2 ? adj[1] : -1;
    if (ee.right >= 0 && ee.right < ee.left) {
      std::swap(ee.left, ee.right);
    }
    mesh.edge_elements.push_back(ee);
  }

  mesh.element_edges.resize(mesh.elements.size());
  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    const auto& el = mesh.elements[e];
    for (int l = 0; l < 3; ++l) {
      mesh.element_edges[e][l] = edge_index.at(sorted_pair(el[(l + 1) % 3], el[(l + 2) % 3]));
    }
  }

  // Boundary classification: the Dirichlet and Neumann lists must partition
  // the set of boundary edges exactly.
  mesh.edge_kind.assign(mesh.edges.size(), EdgeKind::Interior);
  std::vector<bool> tagged(mesh.edges.size(), false);
  auto classify = [&](const std::vector<std::array<int, 2>>& list, EdgeKind kind) {
    for (const auto& raw : list) {
      const auto pair = sorted_pair(raw[0], raw[1]);
      const auto it = edge_index.find(pair);
      if (it == edge_index.end()) {
        throw Error(ErrorCode::InvalidBoundarySpec,
                    "boundary list names a node pair that is not a mesh edge");
      }
      const int e = it->second;
      if (!mesh.edge_elements[e].is_boundary()) {
        throw Error(ErrorCode::InvalidBoundarySpec,
                    "boundary list names an interior edge", e);
      }
      if (tagged[e]) {
        throw Error(ErrorCode::InvalidBoundarySpec,
                    "boundary edge tagged more than once", e);
      }
      tagged[e] = true;
      mesh.edge_kind[e] = kind;
    }
  };
  classify(dirichlet_edges, EdgeKind::Dirichlet);
  classify(neumann_edges, EdgeKind::Neumann);
  for (std::size_t e = 0; e < mesh.edges.size(); ++e) {
    if (mesh.edge_elements[e].is_boundary() && !tagged[e]) {
      throw Error(ErrorCode::InvalidBoundarySpec,
                  "boundary edge missing from the Dirichlet/Neumann lists",
                  static_cast<long>(e));
    }
  }
  return mesh;
}

Mesh uniform_refine(const Mesh& mesh) {
  std::vector<Node> nodes = mesh.nodes;
  nodes.reserve(nodes.size() + mesh.edges.size());
  const int base = mesh.n_nodes();
  for (const auto& edge : mesh.edges) {
    const Node& a = mesh.nodes[edge[0]];
    const Node& b = mesh.nodes[edge[1]];
    nodes.push_back(Node{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)});
  }

  std::vector<std::array<int, 3>> elements;
  elements.reserve(4 * mesh.elements.size());
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const auto& el = mesh.elements[e];
    const int m0 = base + mesh.element_edges[e][0];
    const int m1 = base + mesh.element_edges[e][1];
    const int m2 = base + mesh.element_edges[e][2];
    elements.push_back({el[0], m2, m1});
    elements.push_back({m2, el[1], m0});
    elements.push_back({m1, m0, el[2]});
    elements.push_back({m2, m0, m1});
  }

  std::vector<std::array<int, 2>> dirichlet, neumann;
  for (int e = 0; e < mesh.n_edges(); ++e) {
    if (mesh.edge_kind[e] == EdgeKind::Interior) {
      continue;
    }
    auto& list = mesh.edge_kind[e] == EdgeKind::Dirichlet ? dirichlet : neumann;
    const int mid = base + e;
    list.push_back({mesh.edges[e][0], mid});
    list.push_back({mid, mesh.edges[e][1]});
  }
  return build_mesh(std::move(nodes), std::move(elements), dirichlet, neumann);
}

Mesh unit_square_mesh(const std::function<bool(double, double)>& neumann_on) {
  const std::vector<Node> nodes = {{0.0, 0.0}, {0.5, 0.0}, {1.0, 0.0},
                                   {0.0, 0.5}, {0.5, 0.5}, {1.0, 0.5},
                                   {0.0, 1.0}, {0.5, 1.0}, {1.0, 1.0}};
  const std::vector<std::array<int, 3>> elements = {
      {3, 0, 4}, {0, 1, 4}, {4, 1, 5}, {1, 2, 5},
      {6, 3, 7}, {3, 4, 7}, {7, 4, 8}, {4, 5, 8}};
  const std::vector<std::array<int, 2>> boundary = {
      {0, 1}, {1, 2}, {0, 3}, {2, 5}, {3, 6}, {5, 8}, {6, 7}, {7, 8}};

  std::vector<std::array<int, 2>> dirichlet, neumann;
  for (const auto& edge : boundary) {
    const double mx = 0.5 * (nodes[edge[0]].x + nodes[edge[1]].x);
    const double my = 0.5 * (nodes[edge[0]].y + nodes[edge[1]].y);
    if (neumann_on && neumann_on(mx, my)) {
      neumann.push_back(edge);
    } else {
      dirichlet.push_back(edge);
    }
  }
  return build_mesh(nodes, elements, dirichlet, neumann);
}

ElementGeometry element_geometry(const Mesh& mesh, int element) {
  if (element < 0 || element >= mesh.n_elements()) {
    throw Error(ErrorCode::InvalidIndex, "element index out of range", element);
  }
  const auto& el = mesh.elements[element];
  const Node& p0 = mesh.nodes[el[0]];
  const Node& p1 = mesh.nodes[el[1]];
  const Node& p2 = mesh.nodes[el[2]];

  ElementGeometry geo;
  geo.jacobian = {{{p1.x - p0.x, p2.x - p0.x}, {p1.y - p0.y, p2.y - p0.y}}};
  geo.det = geo.jacobian[0][0] * geo.jacobian[1][1] - geo.jacobian[0][1] * geo.jacobian[1][0];
  geo.area = 0.5 * geo.det;
  geo.inv_transpose = {{{geo.jacobian[1][1] / geo.det, -geo.jacobian[1][0] / geo.det},
                        {-geo.jacobian[0][1] / geo.det, geo.jacobian[0][0] / geo.det}}};
  geo.diameter = longest_edge(mesh.nodes, el);
  geo.origin = {p0.x, p0.y};
  return geo;
}

EdgeGeometryData edge_geometry(const Mesh& mesh, int edge) {
  if (edge < 0 || edge >= mesh.n_edges()) {
    throw Error(ErrorCode::InvalidIndex, "edge index out of range", edge);
  }
  const Node& a = mesh.nodes[mesh.edges[edge][0]];
  const Node& b = mesh.nodes[mesh.edges[edge][1]];

  EdgeGeometryData geo;
  geo.length = std::hypot(b.x - a.x, b.y - a.y);
  geo.tangent = {(b.x - a.x) / geo.length, (b.y - a.y) / geo.length};
  geo.normal = {geo.tangent[1], -geo.tangent[0]};
  geo.oriented_from = mesh.edge_elements[edge].left;

  // Flip if the candidate normal points into the left element (test against
  // the vector from its centroid to the edge midpoint).
  const auto& el = mesh.elements[geo.oriented_from];
  const double cx = (mesh.nodes[el[0]].x + mesh.nodes[el[1]].x + mesh.nodes[el[2]].x) / 3.0;
  const double cy = (mesh.nodes[el[0]].y + mesh.nodes[el[1]].y + mesh.nodes[el[2]].y) / 3.0;
  const double mx = 0.5 * (a.x + b.x);
  const double my = 0.5 * (a.y + b.y);
  if (geo.normal[0] * (mx - cx) + geo.normal[1] * (my - cy) < 0.0) {
    geo.normal = {-geo.normal[0], -geo.normal[1]};
    geo.tangent = {-geo.tangent[0], -geo.tangent[1]};
  }
  return geo;
}

double max_element_diameter(const Mesh& mesh) {
  double h = 0.0;
  for (const auto& el : mesh.elements) {
    h = std::max(h, longest_edge(mesh.nodes, el));
  }
  return h;
}

Mesh read_mesh(std::istream& in) {
  auto expect_word = [&](const char* word) {
    std::string token;
    if (!(in >> token) || token != word) {
      throw Error(ErrorCode::IoFailure,
                  std::string("mesh header: expected '") + word + "'");
    }
  };
  auto read_count = [&](const char* what) {
    long long value = -1;
    if (!(in >> value) || value < 0) {
      throw Error(ErrorCode::IoFailure,
                  std::string("mesh header: bad count after '") + what + "'");
    }
    return static_cast<int>(value);
  };

  expect_word("nodes");
  const int n_nodes = read_count("nodes");
  expect_word("elements");
  const int n_elements = read_count("elements");
  expect_word("dirichlet");
  const int n_dirichlet = read_count("dirichlet");
  expect_word("neumann");
  const int n_neumann = read_count("neumann");

  std::vector<Node> nodes(n_nodes);
  for (int i = 0; i < n_nodes; ++i) {
    if (!(in >> nodes[i].x >> nodes[i].y)) {
      throw Error(ErrorCode::IoFailure, "mesh file: bad node line", i);
    }
  }
  auto read_index = [&](const char* what, int line) {
    long long v = 0;
    if (!(in >> v) || v < 1) {
      throw Error(ErrorCode::IoFailure,
                  std::string("mesh file: bad ") + what + " index (1-based)", line);
    }
    return static_cast<int>(v - 1);
  };
  std::vector<std::array<int, 3>> elements(n_elements);
  for (int i = 0; i < n_elements; ++i) {
    for (int v = 0; v < 3; ++v) {
      elements[i][v] = read_index("element", i);
    }
  }
  std::vector<std::array<int, 2>> dirichlet(n_dirichlet), neumann(n_neumann);
  for (int i = 0; i < n_dirichlet; ++i) {
    dirichlet[i] = {read_index("dirichlet", i), read_index("dirichlet", i)};
  }
  for (int i = 0; i < n_neumann; ++i) {
    neumann[i] = {read_index("neumann", i), read_index("neumann", i)};
  }
  return build_mesh(std::move(nodes), std::move(elements), dirichlet, neumann);
}

Mesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::IoFailure, "cannot open mesh file: " + path);
  }
  return read_mesh(in);
}

void write_mesh(const Mesh& mesh, std::ostream& out) {
  std::vector<std::array<int, 2>> dirichlet, neumann;
  for (int e = 0; e < mesh.n_edges(); ++e) {
    if (mesh.edge_kind[e] == EdgeKind::Dirichlet) {
      dirichlet.push_back(mesh.edges[e]);
    } else if (mesh.edge_kind[e] == EdgeKind::Neumann) {
      neumann.push_back(mesh.edges[e]);
    }
  }
  out << "nodes " << mesh.n_nodes() << " elements " << mesh.n_elements()
      << " dirichlet " << dirichlet.size() << " neumann " << neumann.size() << "\n";
  char line[80];
  for (const Node& node : mesh.nodes) {
    std::snprintf(line, sizeof(line), "%.17g %.17g\n", node.x, node.y);
    out << line;
  }
  for (const auto& el : mesh.elements) {
    out << el[0] + 1 << " " << el[1] + 1 << " " << el[2] + 1 << "\n";
  }
  for (const auto& edge : dirichlet) {
    out << edge[0] + 1 << " " << edge[1] + 1 << "\n";
  }
  for (const auto& edge : neumann) {
    out << edge[0] + 1 << " " << edge[1] + 1 << "\n";
  }
  if (!out) {
    throw Error(ErrorCode::IoFailure, "failed writing mesh stream");
  }
}

void write_mesh_file(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::IoFailure, "cannot open mesh file for writing: " + path);
  }
  write_mesh(mesh, out);
}

} // namespace dgfem
