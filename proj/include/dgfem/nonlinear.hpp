#ifndef DGFEM_NONLINEAR_HPP
#define DGFEM_NONLINEAR_HPP

#include <optional>
#include <utility>
#include <vector>

#include "dgfem/assembly.hpp"
#include "dgfem/execution.hpp"
#include "dgfem/mesh.hpp"
#include "dgfem/problems.hpp"
#include "dgfem/reference.hpp"
#include "dgfem/sparse.hpp"

namespace dgfem {

struct NewtonConfig {
  int max_iterations = 50;
  double residual_tolerance = 1e-10; // on ||Res||_2
  double step_tolerance = 1e-12;     // on ||w||_2
  /// When set, also stop once ||J w + Res||_2 falls below this bound (the
  /// defect of the inner linear solve). With a direct solver that defect is
  /// near machine zero from the first step, so this is a reproduction switch,
  /// not a convergence test.
  std::optional<double> legacy_check;
};

struct NewtonReport {
  int iterations = 0;
  double final_residual = 0.0;
  bool converged = false;
  std::vector<double> residual_history; // ||Res||_2 after each Newton step
};

/// Nonlinear reaction vector H_i = int r(u_h) phi_i dx and its Jacobian
/// HJ_ij = int r'(u_h) phi_j phi_i dx. HJ is block-diagonal (element-local)
/// and symmetric.
std::pair<std::vector<double>, CsrMatrix> assemble_nonlinear(
    const std::vector<double>& coef, const Mesh& mesh, const ReferenceElement& ref,
    const ReactionTerm& reaction, const Execution& exec = {});

/// Newton iteration for (D+C+R) u + H(u) = F:
///   J w = -Res,  u <- u + w,  Res = (D+C+R) u + H(u) - F,  J = D+C+R + HJ(u).
/// Stops on the residual or step tolerance (or the legacy check); a spent
/// iteration budget leaves converged = false. An empty initial guess means
/// the zero vector.
std::pair<std::vector<double>, NewtonReport> newton_solve(
    const DgSystem& system, const Mesh& mesh, const ReferenceElement& ref,
    const ReactionTerm& reaction, const NewtonConfig& config = {},
    std::vector<double> initial_guess = {}, const Execution& exec = {});

} // namespace dgfem

#endif
