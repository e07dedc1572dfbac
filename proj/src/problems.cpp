#include "dgfem/problems.hpp"

#include <cmath>
#include <vector>

#include "dgfem/errors.hpp"

namespace dgfem {

ScalarField scalar_field(std::function<double(double, double)> f) {
  return [f = std::move(f)](std::span<const double> x, std::span<const double> y,
                            std::span<double> out) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      out[i] = f(x[i], y[i]);
    }
  };
}

ScalarField constant_field(double c) {
  return [c](std::span<const double> x, std::span<const double>, std::span<double> out) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      out[i] = c;
    }
  };
}

VectorField vector_field(std::function<double(double, double)> fx,
                         std::function<double(double, double)> fy) {
  return [fx = std::move(fx), fy = std::move(fy)](
             std::span<const double> x, std::span<const double> y,
             std::span<double> out_x, std::span<double> out_y) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      out_x[i] = fx(x[i], y[i]);
      out_y[i] = fy(x[i], y[i]);
    }
  };
}

VectorField constant_vector_field(double cx, double cy) {
  return [cx, cy](std::span<const double> x, std::span<const double>,
                  std::span<double> out_x, std::span<double> out_y) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      out_x[i] = cx;
      out_y[i] = cy;
    }
  };
}

ScalarMap scalar_map(std::function<double(double)> f) {
  return [f = std::move(f)](std::span<const double> u, std::span<double> out) {
    for (std::size_t i = 0; i < u.size(); ++i) {
      out[i] = f(u[i]);
    }
  };
}

double eval_at(const ScalarField& f, double x, double y) {
  double out = 0.0;
  f(std::span<const double>(&x, 1), std::span<const double>(&y, 1), std::span<double>(&out, 1));
  return out;
}

std::pair<double, double> eval_at(const VectorField& f, double x, double y) {
  double out_x = 0.0, out_y = 0.0;
  f(std::span<const double>(&x, 1), std::span<const double>(&y, 1),
    std::span<double>(&out_x, 1), std::span<double>(&out_y, 1));
  return {out_x, out_y};
}

double eval_at(const ScalarMap& f, double u) {
  double out = 0.0;
  f(std::span<const double>(&u, 1), std::span<double>(&out, 1));
  return out;
}

namespace {

// The boundary-layer solution u* = 0.5 (1 - tanh((2x - y - 0.25)/sqrt(5 eps)))
// and its closed-form derivatives. The layer runs along 2x - y = 0.25 with
// width O(sqrt(eps)).
struct BoundaryLayer {
  double eps;
  double scale() const { return std::sqrt(5.0 * eps); }
  double arg(double x, double y) const { return (2.0 * x - y - 0.25) / scale(); }
  double value(double x, double y) const { return 0.5 * (1.0 - std::tanh(arg(x, y))); }
  double sech2(double x, double y) const {
    const double c = std::cosh(arg(x, y));
    return 1.0 / (c * c);
  }
  double dx(double x, double y) const { return -sech2(x, y) / scale(); }
  double dy(double x, double y) const { return 0.5 * sech2(x, y) / scale(); }
  double dxx(double x, double y) const {
    return (0.8 / eps) * std::tanh(arg(x, y)) * sech2(x, y);
  }
  double dyy(double x, double y) const {
    return (0.2 / eps) * std::tanh(arg(x, y)) * sech2(x, y);
  }
};

ProblemSpec make_boundary_layer(bool nonlinear) {
  const double eps = 1e-6;
  const double b1 = 1.0 / std::sqrt(5.0);
  const double b2 = 2.0 / std::sqrt(5.0);
  const BoundaryLayer u{eps};

  ProblemSpec spec;
  spec.name = nonlinear ? "paper-boundary-layer" : "paper-boundary-layer-linear";
  spec.description = nonlinear
      ? "convection-dominated layer along 2x-y=0.25, nonlinear reaction r(u)=u^2"
      : "convection-dominated layer along 2x-y=0.25, linear reaction only";
  spec.diffusion = constant_field(eps);
  spec.advection = constant_vector_field(b1, b2);
  spec.linear_reaction = constant_field(1.0);
  spec.source = scalar_field([u, b1, b2, nonlinear](double x, double y) {
    const double val = u.value(x, y);
    double f = -u.eps * (u.dxx(x, y) + u.dyy(x, y)) + b1 * u.dx(x, y) + b2 * u.dy(x, y) + val;
    if (nonlinear) {
      f += val * val;
    }
    return f;
  });
  spec.dirichlet = scalar_field([u](double x, double y) { return u.value(x, y); });
  spec.neumann = constant_field(0.0);
  if (nonlinear) {
    spec.nonlinear_reaction = ReactionTerm{
        scalar_map([](double v) { return v * v; }),
        scalar_map([](double v) { return 2.0 * v; })};
  }
  spec.exact = ExactSolution{
      scalar_field([u](double x, double y) { return u.value(x, y); }),
      scalar_field([u](double x, double y) { return u.dx(x, y); }),
      scalar_field([u](double x, double y) { return u.dy(x, y); })};
  return spec;
}

ProblemSpec make_smooth_sine(bool mixed) {
  const double pi = 3.14159265358979323846;
  ProblemSpec spec;
  spec.name = mixed ? "smooth-sine-mixed" : "smooth-sine";
  spec.description = mixed
      ? "manufactured sin(pi x) sin(pi y) with a Neumann condition on x=1"
      : "manufactured sin(pi x) sin(pi y), all-Dirichlet";
  spec.diffusion = constant_field(1.0);
  spec.advection = constant_vector_field(1.0, 2.0);
  spec.linear_reaction = constant_field(1.0);
  spec.source = scalar_field([pi](double x, double y) {
    const double sx = std::sin(pi * x), sy = std::sin(pi * y);
    const double cx = std::cos(pi * x), cy = std::cos(pi * y);
    return 2.0 * pi * pi * sx * sy + pi * cx * sy + 2.0 * pi * sx * cy + sx * sy;
  });
  spec.dirichlet = scalar_field(
      [pi](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); });
  // With eps = 1 and outward normal (1,0) on x=1 the conormal flux is du/dx.
  spec.neumann = scalar_field(
      [pi](double x, double y) { return pi * std::cos(pi * x) * std::sin(pi * y); });
  spec.exact = ExactSolution{
      scalar_field([pi](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); }),
      scalar_field([pi](double x, double y) { return pi * std::cos(pi * x) * std::sin(pi * y); }),
      scalar_field([pi](double x, double y) { return pi * std::sin(pi * x) * std::cos(pi * y); })};
  if (mixed) {
    spec.neumann_boundary = [](double x, double) { return x > 1.0 - 1e-12; };
  }
  return spec;
}

ProblemSpec make_poly_exact() {
  ProblemSpec spec;
  spec.name = "poly-exact";
  spec.description = "linear exact solution 1+2x+3y, reproduced exactly by any method";
  spec.diffusion = constant_field(1.0);
  spec.advection = constant_vector_field(1.0, 2.0);
  spec.linear_reaction = constant_field(1.0);
  spec.source = scalar_field([](double x, double y) { return 9.0 + 2.0 * x + 3.0 * y; });
  spec.dirichlet = scalar_field([](double x, double y) { return 1.0 + 2.0 * x + 3.0 * y; });
  spec.neumann = constant_field(0.0);
  spec.exact = ExactSolution{
      scalar_field([](double x, double y) { return 1.0 + 2.0 * x + 3.0 * y; }),
      constant_field(2.0), constant_field(3.0)};
  return spec;
}

ProblemSpec make_advection_patch() {
  ProblemSpec spec;
  spec.name = "pure-advection-patch";
  spec.description = "near-hyperbolic transport of a piecewise-constant inflow profile";
  spec.diffusion = constant_field(1e-10);
  spec.advection = constant_vector_field(1.0, 0.0);
  spec.linear_reaction = constant_field(0.0);
  spec.source = constant_field(0.0);
  spec.dirichlet = scalar_field([](double, double y) { return y < 0.5 ? 1.0 : 0.0; });
  spec.neumann = constant_field(0.0);
  return spec;
}

} // namespace

ProblemSpec registry_get(const std::string& name) {
  if (name == "paper-boundary-layer") {
    return make_boundary_layer(true);
  }
  if (name == "paper-boundary-layer-linear") {
    return make_boundary_layer(false);
  }
  if (name == "smooth-sine") {
    return make_smooth_sine(false);
  }
  if (name == "smooth-sine-mixed") {
    return make_smooth_sine(true);
  }
  if (name == "poly-exact") {
    return make_poly_exact();
  }
  if (name == "pure-advection-patch") {
    return make_advection_patch();
  }
  std::string msg = "unknown problem '" + name + "'; available:";
  for (const auto& [known, _] : list_problems()) {
    msg += " " + known;
  }
  throw Error(ErrorCode::UnknownProblem, msg);
}

std::vector<std::pair<std::string, std::string>> list_problems() {
  std::vector<std::pair<std::string, std::string>> out;
  for (const char* name : {"paper-boundary-layer", "paper-boundary-layer-linear",
                           "smooth-sine", "smooth-sine-mixed", "poly-exact",
                           "pure-advection-patch"}) {
    ProblemSpec spec = registry_get(name);
    out.emplace_back(spec.name, spec.description);
  }
  return out;
}

void validate_problem(const ProblemSpec& spec, const Mesh& mesh, const ReferenceElement& ref) {
  const TriangleRule& rule = ref.volume_rule();
  const int nq = rule.size();
  std::vector<double> px(nq), py(nq), eps(nq);
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const ElementGeometry geo = element_geometry(mesh, e);
    for (int q = 0; q < nq; ++q) {
      px[q] = geo.origin[0] + geo.jacobian[0][0] * rule.x[q] + geo.jacobian[0][1] * rule.y[q];
      py[q] = geo.origin[1] + geo.jacobian[1][0] * rule.x[q] + geo.jacobian[1][1] * rule.y[q];
    }
    spec.diffusion(px, py, eps);
    for (int q = 0; q < nq; ++q) {
      if (!(eps[q] > 0.0)) {
        throw Error(ErrorCode::NonPositiveDiffusion,
                    "diffusion coefficient is not positive inside element", e);
      }
    }
  }

  const int nq_edge = ref.edge_points().size();
  px.resize(nq_edge);
  py.resize(nq_edge);
  eps.resize(nq_edge);
  for (int e = 0; e < mesh.n_edges(); ++e) {
    const Node& a = mesh.nodes[mesh.edges[e][0]];
    const Node& b = mesh.nodes[mesh.edges[e][1]];
    for (int q = 0; q < nq_edge; ++q) {
      const double t = ref.edge_points().t[q];
      px[q] = a.x + t * (b.x - a.x);
      py[q] = a.y + t * (b.y - a.y);
    }
    spec.diffusion(px, py, eps);
    for (int q = 0; q < nq_edge; ++q) {
      if (!(eps[q] > 0.0)) {
        throw Error(ErrorCode::NonPositiveDiffusion,
                    "diffusion coefficient is not positive on edge", e);
      }
    }
  }

  if (spec.nonlinear_reaction) {
    const double r0 = eval_at(spec.nonlinear_reaction->value, 0.0);
    if (std::abs(r0) > 1e-14) {
      throw Error(ErrorCode::InvalidReaction, "nonlinear reaction must satisfy r(0) = 0");
    }
  }
}

double verify_manufactured(const ProblemSpec& spec,
                           std::span<const double> sample_x,
                           std::span<const double> sample_y,
                           double fd_step) {
  if (!spec.exact) {
    throw Error(ErrorCode::NoExactSolution,
                "verify_manufactured needs a problem with an exact solution");
  }
  const auto& u = spec.exact->value;
  const double h = fd_step;

  double worst = 0.0;
  for (std::size_t i = 0; i < sample_x.size(); ++i) {
    const double x = sample_x[i], y = sample_y[i];
    const double uc = eval_at(u, x, y);
    const double ue = eval_at(u, x + h, y), uw = eval_at(u, x - h, y);
    const double un = eval_at(u, x, y + h), us = eval_at(u, x, y - h);
    const double grad_x = (ue - uw) / (2.0 * h);
    const double grad_y = (un - us) / (2.0 * h);
    const double lap = (ue + uw + un + us - 4.0 * uc) / (h * h);

    const double eps = eval_at(spec.diffusion, x, y);
    const auto [b1, b2] = eval_at(spec.advection, x, y);
    const double alpha = eval_at(spec.linear_reaction, x, y);
    const double f = eval_at(spec.source, x, y);
    double residual = alpha * uc - eps * lap + b1 * grad_x + b2 * grad_y - f;
    if (spec.nonlinear_reaction) {
      residual += eval_at(spec.nonlinear_reaction->value, uc);
    }
    worst = std::max(worst, std::abs(residual));
  }
  return worst;
}

} // namespace dgfem
