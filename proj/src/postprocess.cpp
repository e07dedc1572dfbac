#include "dgfem/postprocess.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>

#include "dgfem/errors.hpp"
#include "dgfem/sparse.hpp"

namespace dgfem {

std::pair<double, double> l2_error(const std::vector<double>& coef, const Mesh& mesh,
                                   const ReferenceElement& ref, const ExactSolution& exact) {
  const int nl = ref.n_local();
  const DofMap dof{nl, mesh.n_elements()};
  if (static_cast<int>(coef.size()) != dof.n_total()) {
    throw Error(ErrorCode::DimensionMismatch, "coefficient vector size mismatch");
  }

  // Integrate with a sharper rule than the one that assembled the system.
  const int exactness = std::max(2 * ref.degree() + 3, ref.volume_rule().degree + 1);
  const TriangleRule rule = triangle_rule(exactness);
  const int nq = rule.size();

  std::vector<double> basis(static_cast<std::size_t>(nq) * nl);
  for (int q = 0; q < nq; ++q) {
    ref.eval_basis(rule.x[q], rule.y[q], &basis[static_cast<std::size_t>(q) * nl]);
  }

  std::vector<double> px(nq), py(nq), ue(nq);
  double err2 = 0.0;
  for (int el = 0; el < mesh.n_elements(); ++el) {
    const ElementGeometry geo = element_geometry(mesh, el);
    for (int q = 0; q < nq; ++q) {
      px[q] = geo.origin[0] + geo.jacobian[0][0] * rule.x[q] + geo.jacobian[0][1] * rule.y[q];
      py[q] = geo.origin[1] + geo.jacobian[1][0] * rule.x[q] + geo.jacobian[1][1] * rule.y[q];
    }
    exact.value(px, py, ue);
    for (int q = 0; q < nq; ++q) {
      double uh = 0.0;
      for (int j = 0; j < nl; ++j) {
        uh += coef[dof.global(el, j)] * basis[static_cast<std::size_t>(q) * nl + j];
      }
      const double diff = uh - ue[q];
      err2 += geo.det * rule.w[q] * diff * diff;
    }
  }
  return {std::sqrt(err2), max_element_diameter(mesh)};
}

int dof_count(const Mesh& mesh, int degree) {
  return mesh.n_elements() * local_dof_count(degree);
}

std::vector<double> project(const Mesh& mesh, const ReferenceElement& ref,
                            const ScalarField& f) {
  const int nl = ref.n_local();
  const DofMap dof{nl, mesh.n_elements()};
  const TriangleRule& rule = ref.volume_rule();
  const int nq = rule.size();

  // With the orthonormal basis the element mass matrix is det * I, so the
  // projection coefficients reduce to plain weighted sums.
  std::vector<double> coef(dof.n_total(), 0.0);
  std::vector<double> px(nq), py(nq), fv(nq);
  for (int el = 0; el < mesh.n_elements(); ++el) {
    const ElementGeometry geo = element_geometry(mesh, el);
    for (int q = 0; q < nq; ++q) {
      px[q] = geo.origin[0] + geo.jacobian[0][0] * rule.x[q] + geo.jacobian[0][1] * rule.y[q];
      py[q] = geo.origin[1] + geo.jacobian[1][0] * rule.x[q] + geo.jacobian[1][1] * rule.y[q];
    }
    f(px, py, fv);
    for (int j = 0; j < nl; ++j) {
      double val = 0.0;
      for (int q = 0; q < nq; ++q) {
        val += rule.w[q] * fv[q] * ref.phi(q, j);
      }
      coef[dof.global(el, j)] = val;
    }
  }
  return coef;
}

double eval_solution(const std::vector<double>& coef, const ReferenceElement& ref,
                     int element, double xhat, double yhat) {
  const int nl = ref.n_local();
  std::vector<double> basis(nl);
  ref.eval_basis(xhat, yhat, basis.data());
  double value = 0.0;
  for (int j = 0; j < nl; ++j) {
    value += coef[static_cast<std::size_t>(element) * nl + j] * basis[j];
  }
  return value;
}

namespace {

int lattice_index(int n, int i, int j) {
  // Points (i/n, j/n), i + j <= n, ordered row by row in j.
  return j * (n + 1) - j * (j - 1) / 2 + i;
}

} // namespace

void export_vtk(const std::vector<double>& coef, const Mesh& mesh,
                const ReferenceElement& ref, std::ostream& out, int subdivisions) {
  if (subdivisions < 1) {
    throw Error(ErrorCode::InvalidArgument, "plot subdivisions must be at least 1");
  }
  const int n = subdivisions;
  const int nl = ref.n_local();
  const DofMap dof{nl, mesh.n_elements()};
  if (static_cast<int>(coef.size()) != dof.n_total()) {
    throw Error(ErrorCode::DimensionMismatch, "coefficient vector size mismatch");
  }

  const int pts_per_el = (n + 1) * (n + 2) / 2;
  const int cells_per_el = n * n;
  const long long n_points = static_cast<long long>(mesh.n_elements()) * pts_per_el;
  const long long n_cells = static_cast<long long>(mesh.n_elements()) * cells_per_el;

  out << "# vtk DataFile Version 3.0\n";
  out << "dg solution (element-discontinuous corner values)\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << n_points << " double\n";
  char line[128];
  std::vector<double> basis(nl);
  for (int el = 0; el < mesh.n_elements(); ++el) {
    const ElementGeometry geo = element_geometry(mesh, el);
    for (int j = 0; j <= n; ++j) {
      for (int i = 0; i <= n - j; ++i) {
        const double xh = static_cast<double>(i) / n;
        const double yh = static_cast<double>(j) / n;
        const double x = geo.origin[0] + geo.jacobian[0][0] * xh + geo.jacobian[0][1] * yh;
        const double y = geo.origin[1] + geo.jacobian[1][0] * xh + geo.jacobian[1][1] * yh;
        std::snprintf(line, sizeof(line), "%.17g %.17g 0\n", x, y);
        out << line;
      }
    }
  }

  out << "CELLS " << n_cells << " " << 4 * n_cells << "\n";
  for (int el = 0; el < mesh.n_elements(); ++el) {
    const long long base = static_cast<long long>(el) * pts_per_el;
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n - j; ++i) {
        out << "3 " << base + lattice_index(n, i, j) << " "
            << base + lattice_index(n, i + 1, j) << " "
            << base + lattice_index(n, i, j + 1) << "\n";
        if (i + j < n - 1) {
          out << "3 " << base + lattice_index(n, i + 1, j) << " "
              << base + lattice_index(n, i + 1, j + 1) << " "
              << base + lattice_index(n, i, j + 1) << "\n";
        }
      }
    }
  }

  out << "CELL_TYPES " << n_cells << "\n";
  for (long long c = 0; c < n_cells; ++c) {
    out << "5\n";
  }

  out << "POINT_DATA " << n_points << "\n";
  out << "SCALARS u double 1\n";
  out << "LOOKUP_TABLE default\n";
  for (int el = 0; el < mesh.n_elements(); ++el) {
    for (int j = 0; j <= n; ++j) {
      for (int i = 0; i <= n - j; ++i) {
        const double value =
            eval_solution(coef, ref, el, static_cast<double>(i) / n, static_cast<double>(j) / n);
        std::snprintf(line, sizeof(line), "%.17g\n", value);
        out << line;
      }
    }
  }
  if (!out) {
    throw Error(ErrorCode::IoFailure, "failed writing VTK stream");
  }
}

void export_vtk(const std::vector<double>& coef, const Mesh& mesh,
                const ReferenceElement& ref, const std::string& path, int subdivisions) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::IoFailure, "cannot open VTK file for writing: " + path);
  }
  export_vtk(coef, mesh, ref, out, subdivisions);
}

SolveReport solve_on_mesh(const Mesh& mesh, const ProblemSpec& problem,
                          const DgParameters& params, int quad_order,
                          const NewtonConfig& newton, const Execution& exec) {
  const ReferenceElement ref = build_reference(params.degree, quad_order);
  validate_problem(problem, mesh, ref);
  const DgSystem system = assemble_all(mesh, ref, problem, params, exec);

  SolveReport report;
  report.dofs = system.n;
  report.h_max = max_element_diameter(mesh);
  if (problem.nonlinear_reaction) {
    auto [coef, newton_report] =
        newton_solve(system, mesh, ref, *problem.nonlinear_reaction, newton, {}, exec);
    report.coef = std::move(coef);
    report.iterations = newton_report.iterations;
    report.converged = newton_report.converged;
    report.residual_history = std::move(newton_report.residual_history);
  } else {
    report.coef = direct_solve(system.stiffness(), system.F);
    report.iterations = 1;
    report.converged = true;
  }

  if (problem.exact) {
    const auto [err, hmax] = l2_error(report.coef, mesh, ref, *problem.exact);
    report.l2_err = err;
    report.h_max = hmax;
    report.has_error = true;
  } else {
    report.l2_err = std::numeric_limits<double>::quiet_NaN();
    report.has_error = false;
  }
  return report;
}

std::vector<ConvergenceRow> convergence_table(const Mesh& initial, const ProblemSpec& problem,
                                              const DgParameters& params, int level_begin,
                                              int level_end, int quad_order,
                                              const NewtonConfig& newton,
                                              const Execution& exec) {
  if (level_begin < 0 || level_end < level_begin) {
    throw Error(ErrorCode::InvalidArgument, "refinement sweep range must satisfy 0 <= a <= b");
  }
  Mesh mesh = initial;
  for (int level = 0; level < level_begin; ++level) {
    mesh = uniform_refine(mesh);
  }

  std::vector<ConvergenceRow> rows;
  for (int level = level_begin; level <= level_end; ++level) {
    const SolveReport report = solve_on_mesh(mesh, problem, params, quad_order, newton, exec);
    ConvergenceRow row;
    row.level = level;
    row.dofs = report.dofs;
    row.h_max = report.h_max;
    row.l2_err = report.l2_err;
    row.has_error = report.has_error;
    row.iterations = report.iterations;
    rows.push_back(row);
    if (level < level_end) {
      mesh = uniform_refine(mesh);
    }
  }
  fill_rates(rows);
  return rows;
}

void fill_rates(std::vector<ConvergenceRow>& rows) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i == 0 || !rows[i].has_error || !rows[i - 1].has_error ||
        !(rows[i - 1].l2_err > 0.0) || !(rows[i].l2_err > 0.0) ||
        rows[i - 1].h_max == rows[i].h_max) {
      rows[i].rate = nan;
      continue;
    }
    rows[i].rate = std::log(rows[i - 1].l2_err / rows[i].l2_err) /
                   std::log(rows[i - 1].h_max / rows[i].h_max);
  }
}

void render_table_text(const std::vector<ConvergenceRow>& rows, std::ostream& out,
                       bool with_rate) {
  char line[160];
  std::snprintf(line, sizeof(line), "%8s  %12s  %14s  %4s", "DoFs", "h_max", "L2-error", "#it");
  out << line;
  if (with_rate) {
    std::snprintf(line, sizeof(line), "  %8s", "rate");
    out << line;
  }
  out << "\n";
  for (const ConvergenceRow& row : rows) {
    if (row.has_error) {
      std::snprintf(line, sizeof(line), "%8d  %12.6e  %14.8e  %4d", row.dofs, row.h_max,
                    row.l2_err, row.iterations);
    } else {
      std::snprintf(line, sizeof(line), "%8d  %12.6e  %14s  %4d", row.dofs, row.h_max, "-",
                    row.iterations);
    }
    out << line;
    if (with_rate) {
      if (std::isnan(row.rate)) {
        std::snprintf(line, sizeof(line), "  %8s", "-");
      } else {
        std::snprintf(line, sizeof(line), "  %8.3f", row.rate);
      }
      out << line;
    }
    out << "\n";
  }
}

void render_table_csv(const std::vector<ConvergenceRow>& rows, std::ostream& out) {
  out << "level,dofs,hmax,l2err,iters,rate\n";
  char buf[192];
  for (const ConvergenceRow& row : rows) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%.17g,", row.level, row.dofs, row.h_max);
    out << buf;
    if (row.has_error) {
      std::snprintf(buf, sizeof(buf), "%.17g", row.l2_err);
      out << buf;
    }
    out << "," << row.iterations << ",";
    if (!std::isnan(row.rate)) {
      std::snprintf(buf, sizeof(buf), "%.17g", row.rate);
      out << buf;
    }
    out << "\n";
  }
}

} // namespace dgfem
