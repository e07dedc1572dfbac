#ifndef DGFEM_POSTPROCESS_HPP
#define DGFEM_POSTPROCESS_HPP

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "dgfem/assembly.hpp"
#include "dgfem/mesh.hpp"
#include "dgfem/nonlinear.hpp"
#include "dgfem/problems.hpp"
#include "dgfem/reference.hpp"

namespace dgfem {

/// L2 error against the exact solution together with the mesh size h_max.
/// The error integral uses a quadrature rule one degree beyond the assembly
/// default (exactness >= 2k+3) so the error is not measured with the same
/// rule that built the system. Throws NoExactSolution when the problem
/// carries none.
std::pair<double, double> l2_error(const std::vector<double>& coef, const Mesh& mesh,
                                   const ReferenceElement& ref, const ExactSolution& exact);

int dof_count(const Mesh& mesh, int degree);

/// Element-wise L2 projection onto the DG space (exact for polynomials up to
/// the basis degree thanks to the orthonormal basis).
std::vector<double> project(const Mesh& mesh, const ReferenceElement& ref,
                            const ScalarField& f);

/// Evaluate u_h at a reference point of one element.
double eval_solution(const std::vector<double>& coef, const ReferenceElement& ref,
                     int element, double xhat, double yhat);

/// Legacy ASCII VTK unstructured grid. Every triangle is written with its own
/// corner points (duplicated between neighbours) so inter-element jumps stay
/// visible; `subdivisions` > 1 splits each element into subdivisions^2
/// sub-triangles to resolve curved high-order solutions. Output is
/// byte-stable for identical inputs.
void export_vtk(const std::vector<double>& coef, const Mesh& mesh,
                const ReferenceElement& ref, const std::string& path,
                int subdivisions = 1);
void export_vtk(const std::vector<double>& coef, const Mesh& mesh,
                const ReferenceElement& ref, std::ostream& out, int subdivisions = 1);

/// One linear or Newton solve on a given mesh.
struct SolveReport {
  std::vector<double> coef;
  int dofs = 0;
  double h_max = 0.0;
  double l2_err = 0.0; // NaN when the problem has no exact solution
  bool has_error = false;
  int iterations = 0; // Newton steps (1 for a plain linear solve)
  bool converged = true;
  std::vector<double> residual_history;
};

SolveReport solve_on_mesh(const Mesh& mesh, const ProblemSpec& problem,
                          const DgParameters& params, int quad_order = 0,
                          const NewtonConfig& newton = {}, const Execution& exec = {});

struct ConvergenceRow {
  int level = 0;
  int dofs = 0;
  double h_max = 0.0;
  double l2_err = 0.0;
  bool has_error = false;
  int iterations = 0;
  double rate = 0.0; // log(e_prev/e)/log(h_prev/h); NaN on the first row
};

/// Runs the pipeline on a sequence of uniform refinements of `initial` and
/// tabulates DoFs, h_max, L2 error, Newton counts and observed rates.
std::vector<ConvergenceRow> convergence_table(const Mesh& initial, const ProblemSpec& problem,
                                              const DgParameters& params, int level_begin,
                                              int level_end, int quad_order = 0,
                                              const NewtonConfig& newton = {},
                                              const Execution& exec = {});

/// Recomputes the rate column from the h/error columns (pure; used by the
/// table builders and directly testable).
void fill_rates(std::vector<ConvergenceRow>& rows);

/// Aligned text table with the header "DoFs  h_max  L2-error  #it" (plus
/// "rate" when with_rate is set).
void render_table_text(const std::vector<ConvergenceRow>& rows, std::ostream& out,
                       bool with_rate);
/// CSV with the schema level,dofs,hmax,l2err,iters,rate.
void render_table_csv(const std::vector<ConvergenceRow>& rows, std::ostream& out);

} // namespace dgfem

#endif
