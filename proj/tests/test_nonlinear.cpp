#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "dgfem/assembly.hpp"
#include "dgfem/errors.hpp"
#include "dgfem/mesh.hpp"
#include "dgfem/nonlinear.hpp"
#include "dgfem/problems.hpp"
#include "dgfem/reference.hpp"
#include "dgfem/sparse.hpp"

using namespace dgfem;

namespace {

ReactionTerm square_reaction() {
  return {scalar_map([](double u) { return u * u; }),
          scalar_map([](double u) { return 2.0 * u; })};
}

ReactionTerm cubic_reaction() {
  return {scalar_map([](double u) { return u * u * u; }),
          scalar_map([](double u) { return 3.0 * u * u; })};
}

ReactionTerm zero_reaction() {
  return {scalar_map([](double) { return 0.0; }), scalar_map([](double) { return 0.0; })};
}

std::vector<double> random_coef(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<double> coef(n);
  for (double& c : coef) {
    c = unif(rng);
  }
  return coef;
}

} // namespace

TEST_CASE("zero coefficients give zero reaction vector and Jacobian") {
  const Mesh mesh = unit_square_mesh();
  const ReferenceElement ref = build_reference(2);
  const std::vector<double> coef(mesh.n_elements() * ref.n_local(), 0.0);
  const auto [h, hj] = assemble_nonlinear(coef, mesh, ref, square_reaction());
  CHECK(norm_inf(h) == 0.0);
  CHECK(hj.frobenius_norm() == 0.0);
}

TEST_CASE("assemble_nonlinear validates the coefficient length") {
  const Mesh mesh = unit_square_mesh();
  const ReferenceElement ref = build_reference(1);
  const std::vector<double> coef(7, 0.0);
  try {
    assemble_nonlinear(coef, mesh, ref, square_reaction());
    FAIL("expected an Error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("linear reaction reproduces the mass matrix") {
  // r(u) = u has r'(u) = 1, so HJ must equal the alpha = 1 mass matrix and
  // H must equal that matrix applied to the coefficients.
  const Mesh mesh = uniform_refine(unit_square_mesh());
  const ReferenceElement ref = build_reference(2);
  const ReactionTerm linear{scalar_map([](double u) { return u; }),
                            scalar_map([](double) { return 1.0; })};

  ProblemSpec unit_alpha;
  unit_alpha.linear_reaction = constant_field(1.0);
  const CsrMatrix r = assemble_reaction(mesh, ref, unit_alpha);

  const std::vector<double> coef = random_coef(r.n, 101);
  const auto [h, hj] = assemble_nonlinear(coef, mesh, ref, linear);

  REQUIRE(hj.nnz() == r.nnz());
  CHECK(hj.col_indices == r.col_indices);
  for (std::size_t i = 0; i < r.nnz(); ++i) {
    CHECK(std::abs(hj.values[i] - r.values[i]) <= 1e-14);
  }

  const std::vector<double> r_coef = matvec(r, coef);
  for (std::size_t i = 0; i < h.size(); ++i) {
    CHECK(std::abs(h[i] - r_coef[i]) <= 1e-12);
  }
}

TEST_CASE("Jacobian matches central finite differences of H") {
  const Mesh mesh = unit_square_mesh();
  const ReferenceElement ref = build_reference(1);
  const ReactionTerm reaction = square_reaction();
  const int n = mesh.n_elements() * ref.n_local();
  const std::vector<double> coef = random_coef(n, 2024);

  const auto [h, hj] = assemble_nonlinear(coef, mesh, ref, reaction);
  const double delta = 1e-6;
  for (int j = 0; j < n; ++j) {
    std::vector<double> plus = coef, minus = coef;
    plus[j] += delta;
    minus[j] -= delta;
    const std::vector<double> hp = assemble_nonlinear(plus, mesh, ref, reaction).first;
    const std::vector<double> hm = assemble_nonlinear(minus, mesh, ref, reaction).first;
    for (int i = 0; i < n; ++i) {
      double entry = 0.0;
      for (int k = hj.row_offsets[i]; k < hj.row_offsets[i + 1]; ++k) {
        if (hj.col_indices[k] == j) {
          entry = hj.values[k];
        }
      }
      const double fd = (hp[i] - hm[i]) / (2.0 * delta);
      CHECK(std::abs(entry - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST_CASE("Jacobian is symmetric, block-diagonal and PSD for monotone r") {
  const Mesh mesh = uniform_refine(unit_square_mesh());
  const ReferenceElement ref = build_reference(2);
  const int n_local = ref.n_local();
  const std::vector<double> coef = random_coef(mesh.n_elements() * n_local, 7);

  // r(u) = u^3 is monotone: r'(u) = 3u^2 >= 0.
  const auto [h, hj] = assemble_nonlinear(coef, mesh, ref, cubic_reaction());

  const CsrMatrix hjt = transpose(hj);
  REQUIRE(hjt.nnz() == hj.nnz());
  CHECK(hjt.col_indices == hj.col_indices);
  for (std::size_t i = 0; i < hj.nnz(); ++i) {
    CHECK(std::abs(hj.values[i] - hjt.values[i]) <= 1e-12);
  }

  for (int i = 0; i < hj.n; ++i) {
    for (int k = hj.row_offsets[i]; k < hj.row_offsets[i + 1]; ++k) {
      CHECK(hj.col_indices[k] / n_local == i / n_local);
    }
  }

  for (unsigned seed : {11u, 12u, 13u}) {
    const std::vector<double> v = random_coef(hj.n, seed);
    const std::vector<double> hv = matvec(hj, v);
    double quad_form = 0.0;
    for (int i = 0; i < hj.n; ++i) {
      quad_form += v[i] * hv[i];
    }
    CHECK(quad_form >= -1e-12);
  }
}

TEST_CASE("Newton on a linear problem stops after one iteration") {
  const ProblemSpec spec = registry_get("smooth-sine");
  const Mesh mesh = unit_square_mesh();
  const ReferenceElement ref = build_reference(1);
  const DgSystem system = assemble_all(mesh, ref, spec, set_parameters(DgMethod::SIPG, 1));

  const auto [coef, report] = newton_solve(system, mesh, ref, zero_reaction());
  CHECK(report.iterations == 1);
  CHECK(report.converged);
  CHECK(report.residual_history.size() == 1);
  CHECK(report.final_residual <= 1e-10);

  const std::vector<double> direct = direct_solve(system.stiffness(), system.F);
  for (std::size_t i = 0; i < coef.size(); ++i) {
    CHECK(std::abs(coef[i] - direct[i]) <=
          1e-12 * std::max(1.0, std::abs(direct[i])));
  }
}

TEST_CASE("Newton solves the nonlinear layer problem within budget") {
  const ProblemSpec spec = registry_get("paper-boundary-layer");
  const Mesh mesh = uniform_refine(unit_square_mesh());
  const ReferenceElement ref = build_reference(1);
  const DgSystem system = assemble_all(mesh, ref, spec, set_parameters(DgMethod::SIPG, 1));

  const auto [coef, report] =
      newton_solve(system, mesh, ref, *spec.nonlinear_reaction);
  CHECK(report.converged);
  CHECK(report.iterations <= 50);
  CHECK(report.final_residual <= 1e-10);
  CHECK(static_cast<int>(report.residual_history.size()) == report.iterations);
  for (double v : coef) {
    CHECK(std::isfinite(v));
  }
}

TEST_CASE("Newton converges quadratically on a smooth cubic problem") {
  // Manufactured: add r(u) = u^3 to smooth-sine and compensate in the source
  // so the exact solution is unchanged.
  ProblemSpec spec = registry_get("smooth-sine");
  const ScalarField base_source = spec.source;
  spec.nonlinear_reaction = cubic_reaction();
  spec.source = scalar_field([base_source](double x, double y) {
    std::vector<double> f(1);
    base_source(std::vector<double>{x}, std::vector<double>{y}, f);
    const double pi = 3.14159265358979323846;
    const double u = std::sin(pi * x) * std::sin(pi * y);
    return f[0] + u * u * u;
  });

  const Mesh mesh = uniform_refine(unit_square_mesh());
  const ReferenceElement ref = build_reference(2);
  const DgSystem system = assemble_all(mesh, ref, spec, set_parameters(DgMethod::SIPG, 2));

  NewtonConfig config;
  config.residual_tolerance = 1e-12;
  const auto [coef, report] =
      newton_solve(system, mesh, ref, *spec.nonlinear_reaction, config);
  REQUIRE(report.converged);
  REQUIRE(report.iterations >= 3);

  // Observed order from the last clean triple of residuals:
  // p ~ log(r_{k+1}/r_k) / log(r_k/r_{k-1}) -> 2 for quadratic convergence.
  // Residuals below ~1e-11 sit on the direct solver's accuracy floor and
  // would corrupt the estimate.
  const std::vector<double>& res = report.residual_history;
  std::vector<double> clean;
  for (double r : res) {
    if (r > 1e-11) {
      clean.push_back(r);
    }
  }
  REQUIRE(clean.size() >= 3);
  const double r0 = clean[clean.size() - 3];
  const double r1 = clean[clean.size() - 2];
  const double r2 = clean[clean.size() - 1];
  const double order = std::log(r2 / r1) / std::log(r1 / r0);
  CHECK(order >= 1.5);
}

TEST_CASE("exhausted iteration budget reports non-convergence") {
  const ProblemSpec spec = registry_get("paper-boundary-layer");
  const Mesh mesh = unit_square_mesh();
  const ReferenceElement ref = build_reference(1);
  const DgSystem system = assemble_all(mesh, ref, spec, set_parameters(DgMethod::SIPG, 1));

  NewtonConfig config;
  config.max_iterations = 1;
  config.residual_tolerance = 1e-14;
  config.step_tolerance = 1e-16;
  const auto [coef, report] =
      newton_solve(system, mesh, ref, *spec.nonlinear_reaction, config);
  CHECK(!report.converged);
  CHECK(report.iterations == 1);
  CHECK(report.residual_history.size() == 1);
}

TEST_CASE("the legacy defect check stops after the first direct solve") {
  const ProblemSpec spec = registry_get("paper-boundary-layer");
  const Mesh mesh = unit_square_mesh();
  const ReferenceElement ref = build_reference(1);
  const DgSystem system = assemble_all(mesh, ref, spec, set_parameters(DgMethod::SIPG, 1));

  NewtonConfig strict;
  strict.residual_tolerance = 1e-12;
  const auto [coef_ref, report_ref] =
      newton_solve(system, mesh, ref, *spec.nonlinear_reaction, strict);
  REQUIRE(report_ref.iterations > 1);

  // A direct solver leaves ||J w + Res|| near machine zero immediately, so a
  // loose defect bound turns the stopping test into "stop after step one".
  NewtonConfig legacy = strict;
  legacy.legacy_check = 1e-6;
  const auto [coef, report] =
      newton_solve(system, mesh, ref, *spec.nonlinear_reaction, legacy);
  CHECK(report.iterations == 1);
  CHECK(report.converged);
}

TEST_CASE("a non-zero initial guess at the solution stays put") {
  const ProblemSpec spec = registry_get("paper-boundary-layer");
  const Mesh mesh = unit_square_mesh();
  const ReferenceElement ref = build_reference(1);
  const DgSystem system = assemble_all(mesh, ref, spec, set_parameters(DgMethod::SIPG, 1));

  const auto [solution, first] =
      newton_solve(system, mesh, ref, *spec.nonlinear_reaction);
  REQUIRE(first.converged);

  const auto [again, report] = newton_solve(system, mesh, ref, *spec.nonlinear_reaction,
                                            NewtonConfig{}, solution);
  CHECK(report.converged);
  CHECK(report.iterations == 1);
  CHECK(report.final_residual <= 1e-10);
}

TEST_CASE("newton_solve validates the initial guess length") {
  const ProblemSpec spec = registry_get("paper-boundary-layer");
  const Mesh mesh = unit_square_mesh();
  const ReferenceElement ref = build_reference(1);
  const DgSystem system = assemble_all(mesh, ref, spec, set_parameters(DgMethod::SIPG, 1));
  CHECK_THROWS_AS(newton_solve(system, mesh, ref, *spec.nonlinear_reaction, NewtonConfig{},
                               std::vector<double>(5, 0.0)),
                  Error);
}
