// Minimal independent reader for legacy ASCII VTK unstructured grids, used to
// round-trip files produced by the library without sharing any of its code.
#ifndef DGFEM_TESTS_VTK_READER_HPP
#define DGFEM_TESTS_VTK_READER_HPP

#include <array>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace vtk_reader {

struct Grid {
  std::vector<std::array<double, 3>> points;
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> cell_types;
  std::string scalar_name;
  std::vector<double> point_data;
};

inline std::string next_line(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("vtk: unexpected end of file");
  }
  return line;
}

inline void expect_prefix(const std::string& line, const std::string& prefix) {
  if (line.rfind(prefix, 0) != 0) {
    throw std::runtime_error("vtk: expected '" + prefix + "', got '" + line + "'");
  }
}

inline Grid parse(std::istream& in) {
  Grid grid;
  expect_prefix(next_line(in), "# vtk DataFile Version");
  next_line(in); // free-form title
  if (next_line(in) != "ASCII") {
    throw std::runtime_error("vtk: only ASCII files are supported");
  }
  expect_prefix(next_line(in), "DATASET UNSTRUCTURED_GRID");

  std::string keyword;
  long n_points = 0;
  std::string datatype;
  {
    std::istringstream header(next_line(in));
    header >> keyword >> n_points >> datatype;
    if (keyword != "POINTS" || n_points < 0) {
      throw std::runtime_error("vtk: malformed POINTS header");
    }
  }
  grid.points.resize(static_cast<std::size_t>(n_points));
  for (auto& p : grid.points) {
    if (!(in >> p[0] >> p[1] >> p[2])) {
      throw std::runtime_error("vtk: malformed point coordinates");
    }
  }
  in >> std::ws;

  long n_cells = 0, cell_list = 0;
  {
    std::istringstream header(next_line(in));
    header >> keyword >> n_cells >> cell_list;
    if (keyword != "CELLS" || cell_list != 4 * n_cells) {
      throw std::runtime_error("vtk: malformed CELLS header");
    }
  }
  grid.triangles.resize(static_cast<std::size_t>(n_cells));
  for (auto& tri : grid.triangles) {
    int count = 0;
    if (!(in >> count >> tri[0] >> tri[1] >> tri[2]) || count != 3) {
      throw std::runtime_error("vtk: malformed cell record");
    }
    for (int v : tri) {
      if (v < 0 || v >= n_points) {
        throw std::runtime_error("vtk: cell references a missing point");
      }
    }
  }
  in >> std::ws;

  {
    std::istringstream header(next_line(in));
    long count = 0;
    header >> keyword >> count;
    if (keyword != "CELL_TYPES" || count != n_cells) {
      throw std::runtime_error("vtk: malformed CELL_TYPES header");
    }
  }
  grid.cell_types.resize(static_cast<std::size_t>(n_cells));
  for (int& t : grid.cell_types) {
    if (!(in >> t)) {
      throw std::runtime_error("vtk: malformed cell type");
    }
  }
  in >> std::ws;

  {
    std::istringstream header(next_line(in));
    long count = 0;
    header >> keyword >> count;
    if (keyword != "POINT_DATA" || count != n_points) {
      throw std::runtime_error("vtk: malformed POINT_DATA header");
    }
  }
  {
    std::istringstream header(next_line(in));
    std::string scalars, type;
    int components = 0;
    header >> scalars >> grid.scalar_name >> type >> components;
    if (scalars != "SCALARS" || components != 1) {
      throw std::runtime_error("vtk: malformed SCALARS header");
    }
  }
  expect_prefix(next_line(in), "LOOKUP_TABLE");
  grid.point_data.resize(static_cast<std::size_t>(n_points));
  for (double& v : grid.point_data) {
    if (!(in >> v)) {
      throw std::runtime_error("vtk: malformed point data");
    }
  }
  return grid;
}

inline Grid parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("vtk: cannot open " + path);
  }
  return parse(in);
}

} // namespace vtk_reader

#endif
