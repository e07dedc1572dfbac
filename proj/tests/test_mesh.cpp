#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <sstream>
#include <vector>

#include "dgfem/errors.hpp"
#include "dgfem/mesh.hpp"

using namespace dgfem;

namespace {

double signed_area(const Mesh& mesh, int e) {
  const Node& a = mesh.nodes[mesh.elements[e][0]];
  const Node& b = mesh.nodes[mesh.elements[e][1]];
  const Node& c = mesh.nodes[mesh.elements[e][2]];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

std::array<double, 2> centroid(const Mesh& mesh, int e) {
  double cx = 0.0, cy = 0.0;
  for (int v : mesh.elements[e]) {
    cx += mesh.nodes[v].x / 3.0;
    cy += mesh.nodes[v].y / 3.0;
  }
  return {cx, cy};
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

} // namespace

TEST_CASE("unit square mesh has the documented counts") {
  const Mesh mesh = unit_square_mesh();
  CHECK(mesh.n_nodes() == 9);
  CHECK(mesh.n_elements() == 8);
  CHECK(mesh.n_edges() == 16);
  CHECK(mesh.count_edges(EdgeKind::Interior) == 8);
  CHECK(mesh.count_edges(EdgeKind::Dirichlet) == 8);
  CHECK(mesh.count_edges(EdgeKind::Neumann) == 0);
  // Euler relation for a simply connected triangulation.
  CHECK(mesh.n_nodes() - mesh.n_edges() + mesh.n_elements() == 1);
}

TEST_CASE("all elements are stored counter-clockwise") {
  Mesh mesh = unit_square_mesh();
  for (int level = 0; level < 3; ++level) {
    for (int e = 0; e < mesh.n_elements(); ++e) {
      CHECK(signed_area(mesh, e) > 0.0);
    }
    mesh = uniform_refine(mesh);
  }
}

TEST_CASE("refinement multiplies elements by 4 and halves h_max") {
  Mesh mesh = unit_square_mesh();
  const double h0 = max_element_diameter(mesh);
  CHECK(h0 == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));

  mesh = uniform_refine(mesh);
  CHECK(mesh.n_elements() == 32);
  CHECK(mesh.n_nodes() == 25); // 9 original + 16 edge midpoints
  CHECK(max_element_diameter(mesh) == doctest::Approx(h0 / 2).epsilon(1e-15));

  mesh = uniform_refine(mesh);
  CHECK(mesh.n_elements() == 128);
  CHECK(max_element_diameter(mesh) == doctest::Approx(h0 / 4).epsilon(1e-15));

  // Boundary tags are inherited: the square stays all-Dirichlet.
  CHECK(mesh.count_edges(EdgeKind::Neumann) == 0);
  CHECK(mesh.count_edges(EdgeKind::Dirichlet) == 4 * 8);
  CHECK(mesh.n_nodes() - mesh.n_edges() + mesh.n_elements() == 1);
}

TEST_CASE("element areas sum to the domain area at every level") {
  Mesh mesh = unit_square_mesh();
  for (int level = 0; level < 4; ++level) {
    double total = 0.0;
    for (int e = 0; e < mesh.n_elements(); ++e) {
      total += element_geometry(mesh, e).area;
    }
    CHECK(std::abs(total - 1.0) <= 1e-12);
    mesh = uniform_refine(mesh);
  }
}

TEST_CASE("children tile the parent exactly") {
  const Mesh coarse = unit_square_mesh();
  const Mesh fine = uniform_refine(coarse);
  REQUIRE(fine.n_elements() == 4 * coarse.n_elements());
  for (int p = 0; p < coarse.n_elements(); ++p) {
    double parent = element_geometry(coarse, p).area;
    double children = 0.0;
    for (int c = 0; c < 4; ++c) {
      children += element_geometry(fine, 4 * p + c).area;
    }
    CHECK(std::abs(children - parent) <= 1e-12);
  }
}

TEST_CASE("refining a single triangle") {
  const Mesh one = build_mesh({{0, 0}, {1, 0}, {0, 1}}, {{{0, 1, 2}}},
                              {{{0, 1}}, {{1, 2}}, {{0, 2}}}, {});
  CHECK(one.n_elements() == 1);
  CHECK(one.n_edges() == 3);
  const Mesh four = uniform_refine(one);
  CHECK(four.n_elements() == 4);
  CHECK(four.n_nodes() == 6);
  CHECK(four.n_edges() == 9);
}

TEST_CASE("clockwise input elements are silently reoriented") {
  const Mesh mesh = build_mesh({{0, 0}, {1, 0}, {0, 1}}, {{{0, 2, 1}}},
                               {{{0, 1}}, {{1, 2}}, {{0, 2}}}, {});
  CHECK(signed_area(mesh, 0) > 0.0);
}

TEST_CASE("element_geometry on hand-checked triangles") {
  SUBCASE("half-size right triangle") {
    const Mesh mesh = build_mesh({{0, 0}, {0.5, 0}, {0, 0.5}}, {{{0, 1, 2}}},
                                 {{{0, 1}}, {{1, 2}}, {{0, 2}}}, {});
    const ElementGeometry geo = element_geometry(mesh, 0);
    CHECK(geo.det == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(geo.area == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(geo.diameter == doctest::Approx(0.5 * std::sqrt(2.0)).epsilon(1e-15));
  }
  SUBCASE("reference triangle maps by the identity") {
    const Mesh mesh = build_mesh({{0, 0}, {1, 0}, {0, 1}}, {{{0, 1, 2}}},
                                 {{{0, 1}}, {{1, 2}}, {{0, 2}}}, {});
    const ElementGeometry geo = element_geometry(mesh, 0);
    CHECK(geo.jacobian[0][0] == 1.0);
    CHECK(geo.jacobian[0][1] == 0.0);
    CHECK(geo.jacobian[1][0] == 0.0);
    CHECK(geo.jacobian[1][1] == 1.0);
    CHECK(geo.det == 1.0);
    CHECK(geo.origin[0] == 0.0);
    CHECK(geo.origin[1] == 0.0);
  }
  SUBCASE("shoelace area") {
    const Mesh mesh = build_mesh({{0, 0}, {1, 0}, {0.5, 1}}, {{{0, 1, 2}}},
                                 {{{0, 1}}, {{1, 2}}, {{0, 2}}}, {});
    CHECK(element_geometry(mesh, 0).area == doctest::Approx(0.5).epsilon(1e-15));
  }
}

TEST_CASE("boundary edge normals point out of the domain") {
  const Mesh mesh = unit_square_mesh();
  for (int e = 0; e < mesh.n_edges(); ++e) {
    if (mesh.edge_kind[e] == EdgeKind::Interior) {
      continue;
    }
    const EdgeGeometryData geo = edge_geometry(mesh, e);
    const Node& a = mesh.nodes[mesh.edges[e][0]];
    const Node& b = mesh.nodes[mesh.edges[e][1]];
    const double mx = 0.5 * (a.x + b.x);
    const double my = 0.5 * (a.y + b.y);
    CHECK(std::abs(geo.normal[0] * geo.normal[0] + geo.normal[1] * geo.normal[1] - 1.0) <=
          1e-14);
    if (my == 0.0) {
      CHECK(geo.normal[0] == doctest::Approx(0.0));
      CHECK(geo.normal[1] == doctest::Approx(-1.0));
    } else if (my == 1.0) {
      CHECK(geo.normal[1] == doctest::Approx(1.0));
    } else if (mx == 0.0) {
      CHECK(geo.normal[0] == doctest::Approx(-1.0));
    } else if (mx == 1.0) {
      CHECK(geo.normal[0] == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("interior edge normals point from the left element to the right") {
  Mesh mesh = uniform_refine(unit_square_mesh());
  for (int e = 0; e < mesh.n_edges(); ++e) {
    if (mesh.edge_kind[e] != EdgeKind::Interior) {
      continue;
    }
    const EdgeElements& adj = mesh.edge_elements[e];
    REQUIRE(adj.left >= 0);
    REQUIRE(adj.right >= 0);
    CHECK(adj.left < adj.right);
    const EdgeGeometryData geo = edge_geometry(mesh, e);
    CHECK(geo.oriented_from == adj.left);
    const std::array<double, 2> cl = centroid(mesh, adj.left);
    const std::array<double, 2> cr = centroid(mesh, adj.right);
    const double along = (cr[0] - cl[0]) * geo.normal[0] + (cr[1] - cl[1]) * geo.normal[1];
    CHECK(along > 0.0);
  }
}

TEST_CASE("edge length of a diagonal edge") {
  const Mesh mesh = unit_square_mesh();
  bool found = false;
  for (int e = 0; e < mesh.n_edges(); ++e) {
    const Node& a = mesh.nodes[mesh.edges[e][0]];
    const Node& b = mesh.nodes[mesh.edges[e][1]];
    if (a.x == 0.0 && a.y == 0.0 && b.x == 0.5 && b.y == 0.5) {
      CHECK(edge_geometry(mesh, e).length ==
            doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("local edge l sits opposite local vertex l") {
  const Mesh mesh = uniform_refine(unit_square_mesh());
  for (int e = 0; e < mesh.n_elements(); ++e) {
    for (int l = 0; l < 3; ++l) {
      const int edge = mesh.element_edges[e][l];
      const int a = mesh.elements[e][(l + 1) % 3];
      const int b = mesh.elements[e][(l + 2) % 3];
      const std::array<int, 2> expect{std::min(a, b), std::max(a, b)};
      CHECK(mesh.edges[edge] == expect);
    }
  }
}

TEST_CASE("construction is deterministic") {
  const Mesh a = uniform_refine(unit_square_mesh());
  const Mesh b = uniform_refine(unit_square_mesh());
  REQUIRE(a.n_edges() == b.n_edges());
  for (int e = 0; e < a.n_edges(); ++e) {
    CHECK(a.edges[e] == b.edges[e]);
    CHECK(a.edge_elements[e].left == b.edge_elements[e].left);
    CHECK(a.edge_elements[e].right == b.edge_elements[e].right);
  }
}

TEST_CASE("build_mesh rejects invalid input") {
  const std::vector<Node> tri_nodes{{0, 0}, {1, 0}, {0, 1}};
  const std::vector<std::array<int, 2>> tri_boundary{{{0, 1}}, {{1, 2}}, {{0, 2}}};

  SUBCASE("out-of-range node index") {
    CHECK(code_of([&] { build_mesh(tri_nodes, {{{0, 1, 7}}}, tri_boundary, {}); }) ==
          ErrorCode::InvalidTopology);
  }
  SUBCASE("degenerate element") {
    CHECK(code_of([&] {
            build_mesh({{0, 0}, {1, 0}, {2, 0}}, {{{0, 1, 2}}}, {}, {});
          }) == ErrorCode::DegenerateElement);
  }
  SUBCASE("edge shared by three elements") {
    CHECK(code_of([&] {
            build_mesh({{0, 0}, {1, 0}, {0, 1}, {0.5, -1}, {1, 1}},
                       {{{0, 1, 2}}, {{0, 3, 1}}, {{0, 1, 4}}}, {}, {});
          }) == ErrorCode::NonManifold);
  }
  SUBCASE("boundary list names a non-existent edge") {
    CHECK(code_of([&] {
            build_mesh(tri_nodes, {{{0, 1, 2}}}, {{{0, 1}}, {{1, 2}}, {{0, 2}}, {{2, 2}}},
                       {});
          }) == ErrorCode::InvalidBoundarySpec);
  }
  SUBCASE("interior edge tagged as boundary") {
    // Two triangles sharing edge (0,2); tagging the shared edge is invalid.
    CHECK(code_of([&] {
            build_mesh({{0, 0}, {1, 0}, {0, 1}, {-1, 0}},
                       {{{0, 1, 2}}, {{0, 2, 3}}},
                       {{{0, 1}}, {{1, 2}}, {{2, 3}}, {{0, 3}}, {{0, 2}}}, {});
          }) == ErrorCode::InvalidBoundarySpec);
  }
  SUBCASE("edge present in both boundary lists") {
    CHECK(code_of([&] {
            build_mesh(tri_nodes, {{{0, 1, 2}}}, tri_boundary, {{{0, 1}}});
          }) == ErrorCode::InvalidBoundarySpec);
  }
  SUBCASE("uncovered boundary edge") {
    CHECK(code_of([&] {
            build_mesh(tri_nodes, {{{0, 1, 2}}}, {{{0, 1}}, {{1, 2}}}, {});
          }) == ErrorCode::InvalidBoundarySpec);
  }
}

TEST_CASE("mesh file round trip") {
  const Mesh mesh = unit_square_mesh([](double x, double) { return x > 1.0 - 1e-12; });
  std::stringstream buffer;
  write_mesh(mesh, buffer);
  const Mesh copy = read_mesh(buffer);

  REQUIRE(copy.n_nodes() == mesh.n_nodes());
  REQUIRE(copy.n_elements() == mesh.n_elements());
  REQUIRE(copy.n_edges() == mesh.n_edges());
  for (int i = 0; i < mesh.n_nodes(); ++i) {
    CHECK(copy.nodes[i].x == mesh.nodes[i].x);
    CHECK(copy.nodes[i].y == mesh.nodes[i].y);
  }
  for (int e = 0; e < mesh.n_elements(); ++e) {
    CHECK(copy.elements[e] == mesh.elements[e]);
  }
  for (int e = 0; e < mesh.n_edges(); ++e) {
    CHECK(copy.edge_kind[e] == mesh.edge_kind[e]);
  }
}

TEST_CASE("read_mesh parses the documented format") {
  std::stringstream in(
      "nodes 3 elements 1 dirichlet 2 neumann 1\n"
      "0 0\n"
      "1 0\n"
      "0 1\n"
      "1 2 3\n"
      "1 2\n"
      "2 3\n"
      "1 3\n");
  const Mesh mesh = read_mesh(in);
  CHECK(mesh.n_nodes() == 3);
  CHECK(mesh.n_elements() == 1);
  CHECK(mesh.count_edges(EdgeKind::Dirichlet) == 2);
  CHECK(mesh.count_edges(EdgeKind::Neumann) == 1);
}

TEST_CASE("read_mesh rejects malformed input") {
  SUBCASE("bad header keyword") {
    std::stringstream in("points 3 elements 1 dirichlet 3 neumann 0\n");
    CHECK(code_of([&] { read_mesh(in); }) == ErrorCode::IoFailure);
  }
  SUBCASE("truncated node list") {
    std::stringstream in("nodes 3 elements 1 dirichlet 3 neumann 0\n0 0\n1 0\n");
    CHECK(code_of([&] { read_mesh(in); }) == ErrorCode::IoFailure);
  }
  SUBCASE("non-numeric entry") {
    std::stringstream in(
        "nodes 3 elements 1 dirichlet 3 neumann 0\n0 0\n1 0\n0 x\n");
    CHECK(code_of([&] { read_mesh(in); }) == ErrorCode::IoFailure);
  }
  SUBCASE("missing file") {
    CHECK(code_of([&] { read_mesh_file("/nonexistent/mesh.txt"); }) ==
          ErrorCode::IoFailure);
  }
}

TEST_CASE("neumann predicate tags the requested boundary") {
  const Mesh mesh = unit_square_mesh([](double x, double) { return x > 1.0 - 1e-12; });
  CHECK(mesh.count_edges(EdgeKind::Neumann) == 2);
  CHECK(mesh.count_edges(EdgeKind::Dirichlet) == 6);
  for (int e = 0; e < mesh.n_edges(); ++e) {
    if (mesh.edge_kind[e] == EdgeKind::Neumann) {
      CHECK(mesh.nodes[mesh.edges[e][0]].x == 1.0);
      CHECK(mesh.nodes[mesh.edges[e][1]].x == 1.0);
    }
  }
}
