#ifndef DGFEM_PROBLEMS_HPP
#define DGFEM_PROBLEMS_HPP

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dgfem/mesh.hpp"
#include "dgfem/reference.hpp"

namespace dgfem {

/// Coefficient callbacks are evaluated batched at arrays of quadrature points
/// (one call per element or edge), which feeds the batched assembly kernels.
/// They must be pure and thread-safe.
using ScalarField = std::function<void(std::span<const double> x, std::span<const double> y,
                                       std::span<double> out)>;
using VectorField = std::function<void(std::span<const double> x, std::span<const double> y,
                                       std::span<double> out_x, std::span<double> out_y)>;
using ScalarMap = std::function<void(std::span<const double> u, std::span<double> out)>;

ScalarField scalar_field(std::function<double(double, double)> f);
ScalarField constant_field(double c);
VectorField vector_field(std::function<double(double, double)> fx,
                         std::function<double(double, double)> fy);
VectorField constant_vector_field(double cx, double cy);
ScalarMap scalar_map(std::function<double(double)> f);

/// Single-point convenience wrappers around the batched callbacks.
double eval_at(const ScalarField& f, double x, double y);
std::pair<double, double> eval_at(const VectorField& f, double x, double y);
double eval_at(const ScalarMap& f, double u);

/// Nonlinear reaction r(u) together with its derivative r'(u).
struct ReactionTerm {
  ScalarMap value;
  ScalarMap derivative;
};

struct ExactSolution {
  ScalarField value;
  ScalarField du_dx;
  ScalarField du_dy;
};

/// Coefficient set of the model problem
///   alpha*u - div(eps*grad u) + b.grad u [+ r(u)] = f,
///   u = gD on the Dirichlet boundary, eps*grad u . n = gN on the Neumann one.
struct ProblemSpec {
  std::string name;
  std::string description;

  ScalarField diffusion;       // eps(x,y) > 0
  VectorField advection;       // b(x,y)
  ScalarField linear_reaction; // alpha(x,y) >= 0
  ScalarField source;          // f(x,y)
  ScalarField dirichlet;       // gD(x,y)
  ScalarField neumann;         // gN(x,y)
  std::optional<ReactionTerm> nonlinear_reaction;
  std::optional<ExactSolution> exact;

  /// Used by unit_square_mesh to tag boundary edges for this problem;
  /// empty means all-Dirichlet.
  std::function<bool(double, double)> neumann_boundary;
};

/// Built-in problems by name; throws UnknownProblem (message lists the
/// registry) for unknown names.
ProblemSpec registry_get(const std::string& name);
std::vector<std::pair<std::string, std::string>> list_problems();

/// Checks eps > 0 at every volume and edge quadrature point of the mesh and,
/// when a nonlinear reaction is present, that r(0) = 0. Throws
/// NonPositiveDiffusion / InvalidReaction.
void validate_problem(const ProblemSpec& spec, const Mesh& mesh, const ReferenceElement& ref);

/// Max |alpha u* + r(u*) - eps lap(u*) + b.grad(u*) - f| over the sample
/// points, with gradients and Laplacian of u* taken by central finite
/// differences of step fd_step. Guards manufactured sources against
/// transcription slips; requires an exact solution.
double verify_manufactured(const ProblemSpec& spec,
                           std::span<const double> sample_x,
                           std::span<const double> sample_y,
                           double fd_step = 1e-4);

} // namespace dgfem

#endif
