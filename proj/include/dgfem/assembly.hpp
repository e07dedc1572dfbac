#ifndef DGFEM_ASSEMBLY_HPP
#define DGFEM_ASSEMBLY_HPP

#include <string>
#include <vector>

#include "dgfem/execution.hpp"
#include "dgfem/mesh.hpp"
#include "dgfem/problems.hpp"
#include "dgfem/reference.hpp"
#include "dgfem/sparse.hpp"

namespace dgfem {

enum class DgMethod { SIPG, NIPG, IIPG };

/// Maps the method names (case-insensitive) or their legacy numeric codes
/// ("1" = NIPG, "2" = SIPG, "3" = IIPG) to the enum; throws UnknownMethod.
DgMethod method_from_string(const std::string& name);
const char* to_string(DgMethod method);
int method_code(DgMethod method); // the legacy numeric code

/// Interior-penalty parameters. Defaults per method:
///   SIPG: kappa = -1, sigma = 3k(k+1)
///   NIPG: kappa = +1, sigma = 1
///   IIPG: kappa =  0, sigma = 3k(k+1)
/// with the boundary penalty twice the interior one. Fields may be overridden
/// after construction.
struct DgParameters {
  DgMethod method = DgMethod::SIPG;
  double kappa = -1.0;
  double sigma_interior = 0.0;
  double sigma_boundary = 0.0;
  int degree = 1;
};

DgParameters set_parameters(DgMethod method, int degree);

/// Element-major DoF layout: global = element * n_local + local.
struct DofMap {
  int n_local = 0;
  int n_elements = 0;

  int n_total() const { return n_local * n_elements; }
  int global(int element, int local) const { return element * n_local + local; }
};

/// The assembled linear system D*u + C*u + R*u = F.
struct DgSystem {
  CsrMatrix D;
  CsrMatrix C;
  CsrMatrix R;
  std::vector<double> F;
  int n = 0;

  CsrMatrix stiffness() const; // D + C + R
};

struct DiffusionResult {
  CsrMatrix D;
  std::vector<double> F_D; // Dirichlet lifting part of the load
};

struct ConvectionResult {
  CsrMatrix C;
  std::vector<double> F_C; // inflow boundary data part of the load
};

/// Volume gradient terms plus penalty, consistency and kappa-symmetrization
/// face terms over interior and Dirichlet edges. F_D carries the matching
/// Dirichlet data terms gD*(sigma_b*eps/h * v + kappa*eps*grad(v).n).
DiffusionResult assemble_diffusion(const Mesh& mesh, const ReferenceElement& ref,
                                   const ProblemSpec& problem, const DgParameters& params,
                                   const Execution& exec = {});

/// Volume transport term plus upwind face coupling. Inflow/outflow is
/// classified per quadrature point by the sign of b.n; inflow boundary data
/// pairs with gD, and an inflow point on a Neumann edge raises
/// InflowOnNeumann.
ConvectionResult assemble_convection(const Mesh& mesh, const ReferenceElement& ref,
                                     const ProblemSpec& problem, const Execution& exec = {});

/// Block-diagonal weighted mass matrix for the linear reaction term.
CsrMatrix assemble_reaction(const Mesh& mesh, const ReferenceElement& ref,
                            const ProblemSpec& problem, const Execution& exec = {});

/// Full load vector: volume source, Dirichlet lifting, inflow data and
/// Neumann data.
std::vector<double> assemble_load(const Mesh& mesh, const ReferenceElement& ref,
                                  const ProblemSpec& problem, const DgParameters& params,
                                  const Execution& exec = {});

DgSystem assemble_all(const Mesh& mesh, const ReferenceElement& ref,
                      const ProblemSpec& problem, const DgParameters& params,
                      const Execution& exec = {});

} // namespace dgfem

#endif
