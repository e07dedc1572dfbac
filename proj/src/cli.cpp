#include "dgfem/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "dgfem/assembly.hpp"
#include "dgfem/errors.hpp"
#include "dgfem/execution.hpp"
#include "dgfem/mesh.hpp"
#include "dgfem/nonlinear.hpp"
#include "dgfem/postprocess.hpp"
#include "dgfem/problems.hpp"
#include "dgfem/sparse.hpp"

namespace dgfem {

namespace {

bool is_usage_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownProblem:
    case ErrorCode::UnknownMethod:
    case ErrorCode::UnsupportedDegree:
    case ErrorCode::InvalidArgument:
      return true;
    default:
      return false;
  }
}

std::pair<int, int> parse_sweep(const std::string& text) {
  int a = -1, b = -1;
  char extra = '\0';
  if (std::sscanf(text.c_str(), "%d:%d%c", &a, &b, &extra) != 2 || a < 0 || b < a) {
    throw Error(ErrorCode::InvalidArgument,
                "--refine-sweep expects A:B with 0 <= A <= B, got '" + text + "'");
  }
  return {a, b};
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Interior-penalty discontinuous Galerkin solver for steady "
               "diffusion-convection-reaction problems on triangular meshes"};
  app.name("dgsolve");

  std::string problem_name;
  std::string method_name = "sipg";
  int degree = 1;
  int refine = 0;
  std::string sweep;
  double penalty = 0.0;
  double kappa = 0.0;
  int quad_order = 0;
  int newton_max_it = 50;
  double newton_tol = 1e-10;
  double legacy_stop = 0.0;
  std::string mesh_path, csv_path, vtk_path, dump_prefix;
  int threads = 0;
  int plot_subdiv = 1;
  bool list = false;

  app.add_option("--problem", problem_name, "Built-in problem name (see --list-problems)");
  app.add_option("--method", method_name, "DG method: sipg, nipg, iipg (or codes 2, 1, 3)")
      ->capture_default_str();
  app.add_option("--degree", degree, "Polynomial degree k (1..4)")->capture_default_str();
  auto* refine_opt =
      app.add_option("--refine", refine, "Uniform refinement levels before solving")
          ->capture_default_str();
  auto* sweep_opt = app.add_option("--refine-sweep", sweep,
                                   "Level range A:B; solves every level and tabulates rates");
  refine_opt->excludes(sweep_opt);
  sweep_opt->excludes(refine_opt);
  auto* penalty_opt =
      app.add_option("--penalty", penalty, "Override the interior penalty (boundary = 2x)");
  auto* kappa_opt = app.add_option("--kappa", kappa, "Override the symmetrization parameter");
  app.add_option("--quad-order", quad_order,
                 "Volume quadrature exactness override (0 = default 2k+2)");
  app.add_option("--newton-max-it", newton_max_it, "Newton iteration budget")
      ->capture_default_str();
  app.add_option("--newton-tol", newton_tol, "Newton residual tolerance (2-norm)")
      ->capture_default_str();
  auto* legacy_opt = app.add_option("--newton-legacy-stop", legacy_stop,
                                    "Also stop when ||J w + Res|| falls below this bound");
  app.add_option("--mesh", mesh_path, "Mesh file (default: built-in unit square)");
  app.add_option("--csv", csv_path, "Write the result table as CSV");
  app.add_option("--vtk", vtk_path, "Write the (finest) solution as legacy ASCII VTK");
  app.add_option("--dump-matrix", dump_prefix,
                 "Write PREFIX.D.mtx, .C.mtx, .R.mtx and .stiff.mtx (MatrixMarket)");
  app.add_option("--threads", threads, "Assembly worker cap (0 = all available)")
      ->capture_default_str();
  app.add_option("--plot-subdiv", plot_subdiv, "VTK sub-triangles per element edge")
      ->capture_default_str();
  app.add_flag("--list-problems", list, "List the built-in problems and exit");
  app.set_config("--config", "", "Plain key=value file mapping 1:1 to flags; flags win");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "dgsolve: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  if (list) {
    for (const auto& [name, description] : list_problems()) {
      out << name << "\n    " << description << "\n";
    }
    return 0;
  }
  if (problem_name.empty()) {
    err << "dgsolve: --problem is required (try --list-problems)\n\n" << app.help();
    return 2;
  }

  try {
    const DgMethod method = method_from_string(method_name);
    DgParameters params = set_parameters(method, degree);
    if (penalty_opt->count() > 0) {
      if (penalty < 0.0) {
        throw Error(ErrorCode::InvalidArgument, "--penalty must be nonnegative");
      }
      params.sigma_interior = penalty;
      params.sigma_boundary = 2.0 * penalty;
    }
    if (kappa_opt->count() > 0) {
      params.kappa = kappa;
    }

    const ProblemSpec problem = registry_get(problem_name);
    const Execution exec = Execution::parallel(threads);

    NewtonConfig newton;
    newton.max_iterations = newton_max_it;
    newton.residual_tolerance = newton_tol;
    if (legacy_opt->count() > 0) {
      newton.legacy_check = legacy_stop;
    }

    int level_begin = refine, level_end = refine;
    const bool is_sweep = sweep_opt->count() > 0;
    if (is_sweep) {
      std::tie(level_begin, level_end) = parse_sweep(sweep);
    }

    Mesh mesh = mesh_path.empty() ? unit_square_mesh(problem.neumann_boundary)
                                  : read_mesh_file(mesh_path);
    for (int level = 0; level < level_begin; ++level) {
      mesh = uniform_refine(mesh);
    }

    std::vector<ConvergenceRow> rows;
    SolveReport last;
    for (int level = level_begin; level <= level_end; ++level) {
      last = solve_on_mesh(mesh, problem, params, quad_order, newton, exec);
      ConvergenceRow row;
      row.level = level;
      row.dofs = last.dofs;
      row.h_max = last.h_max;
      row.l2_err = last.l2_err;
      row.has_error = last.has_error;
      row.iterations = last.iterations;
      rows.push_back(row);
      if (level < level_end) {
        mesh = uniform_refine(mesh);
      }
    }
    fill_rates(rows);
    render_table_text(rows, out, is_sweep);

    if (!csv_path.empty()) {
      std::ofstream csv(csv_path);
      if (!csv) {
        throw Error(ErrorCode::IoFailure, "cannot open CSV file for writing: " + csv_path);
      }
      render_table_csv(rows, csv);
    }
    if (!vtk_path.empty() || !dump_prefix.empty()) {
      const ReferenceElement ref = build_reference(params.degree, quad_order);
      if (!vtk_path.empty()) {
        export_vtk(last.coef, mesh, ref, vtk_path, plot_subdiv);
      }
      if (!dump_prefix.empty()) {
        const DgSystem system = assemble_all(mesh, ref, problem, params, exec);
        write_matrix_market_file(system.D, dump_prefix + ".D.mtx");
        write_matrix_market_file(system.C, dump_prefix + ".C.mtx");
        write_matrix_market_file(system.R, dump_prefix + ".R.mtx");
        write_matrix_market_file(system.stiffness(), dump_prefix + ".stiff.mtx");
      }
    }

    if (!last.converged) {
      err << "dgsolve: Newton did not converge within " << newton.max_iterations
          << " iterations (final residual " << last.residual_history.back() << ")\n";
      return 1;
    }
  } catch (const Error& e) {
    err << "dgsolve error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return is_usage_error(e.code()) ? 2 : 1;
  } catch (const std::exception& e) {
    err << "dgsolve error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  args.reserve(argc > 0 ? argc - 1 : 0);
  for (int i = 1; i < argc; ++i) {
    args.emplace_back(argv[i]);
  }
  return run_cli(args, out, err);
}

} // namespace dgfem
