#include "dgfem/reference.hpp"

#include <cmath>

#include "dgfem/errors.hpp"

namespace dgfem {

int local_dof_count(int degree) {
  return (degree + 1) * (degree + 2) / 2;
}

namespace {

inline int basis_index(int m, int n) {
  const int d = m + n;
  return d * (d + 1) / 2 + n;
}

// Dubiner basis on the unit triangle, evaluated without the u/t collapse
// singularity. The first factor is the scaled Legendre polynomial
// f_m(u,t) = P_m(u/t) t^m with u = 2x+y-1, t = 1-y, built from
// (m+1) f_{m+1} = (2m+1) u f_m - m t^2 f_{m-1}; the second is the Jacobi
// polynomial P_n^{(2m+1,0)}(2y-1). The prefactor sqrt(2(2m+1)(m+n+1))
// makes the family orthonormal.
void dubiner_eval(int k, double x, double y, double* values, double* grads) {
  const double u = 2.0 * x + y - 1.0;
  const double t = 1.0 - y;
  const double z = 2.0 * y - 1.0;

  double f[16], fu[16], ft[16];
  f[0] = 1.0;
  fu[0] = 0.0;
  ft[0] = 0.0;
  if (k >= 1) {
    f[1] = u;
    fu[1] = 1.0;
    ft[1] = 0.0;
  }
  for (int m = 1; m < k; ++m) {
    const double a = 2.0 * m + 1.0;
    f[m + 1] = (a * u * f[m] - m * t * t * f[m - 1]) / (m + 1);
    fu[m + 1] = (a * (f[m] + u * fu[m]) - m * t * t * fu[m - 1]) / (m + 1);
    ft[m + 1] = (a * u * ft[m] - m * (2.0 * t * f[m - 1] + t * t * ft[m - 1])) / (m + 1);
  }

  for (int m = 0; m <= k; ++m) {
    const double alpha = 2.0 * m + 1.0;
    double g0 = 1.0, dg0 = 0.0;
    double g1 = 0.5 * ((alpha + 2.0) * z + alpha);
    double dg1 = 0.5 * (alpha + 2.0);
    for (int n = 0; n + m <= k; ++n) {
      double g, dg;
      if (n == 0) {
        g = g0;
        dg = dg0;
      } else if (n == 1) {
        g = g1;
        dg = dg1;
      } else {
        const double c0 = 2.0 * n * (n + alpha) * (2.0 * n + alpha - 2.0);
        const double c1 = 2.0 * n + alpha - 1.0;
        const double c2 = (2.0 * n + alpha) * (2.0 * n + alpha - 2.0);
        const double c3 = 2.0 * (n + alpha - 1.0) * (n - 1.0) * (2.0 * n + alpha);
        g = (c1 * ((c2 * z + alpha * alpha) * g1) - c3 * g0) / c0;
        dg = (c1 * ((c2 * z + alpha * alpha) * dg1 + c2 * g1) - c3 * dg0) / c0;
        g0 = g1;
        dg0 = dg1;
        g1 = g;
        dg1 = dg;
      }
      const double c = std::sqrt(2.0 * (2.0 * m + 1.0) * (m + n + 1.0));
      const int j = basis_index(m, n);
      if (values) {
        values[j] = c * f[m] * g;
      }
      if (grads) {
        grads[2 * j] = c * 2.0 * fu[m] * g;
        grads[2 * j + 1] = c * ((fu[m] - ft[m]) * g + f[m] * 2.0 * dg);
      }
    }
  }
}

} // namespace

ReferenceElement::ReferenceElement(int degree, int quad_order) : degree_(degree) {
  if (degree < 1 || degree > 4) {
    throw Error(ErrorCode::UnsupportedDegree,
                "polynomial degree must be between 1 and 4", degree);
  }
  if (quad_order < 0) {
    throw Error(ErrorCode::InvalidArgument, "quadrature order must be positive");
  }
  n_local_ = local_dof_count(degree);

  const int volume_exactness = quad_order > 0 ? quad_order : 2 * degree + 2;
  const int n_edge = quad_order > 0 ? (quad_order + 1) / 2 : degree + 1;
  volume_rule_ = triangle_rule(volume_exactness);
  edge_points_ = gauss_legendre(n_edge);

  const int nq_vol = volume_rule_.size();
  basis_vol_.resize(static_cast<std::size_t>(nq_vol) * n_local_);
  grad_vol_.resize(static_cast<std::size_t>(nq_vol) * n_local_ * 2);
  for (int q = 0; q < nq_vol; ++q) {
    dubiner_eval(degree_, volume_rule_.x[q], volume_rule_.y[q],
                 &basis_vol_[static_cast<std::size_t>(q) * n_local_],
                 &grad_vol_[static_cast<std::size_t>(q) * n_local_ * 2]);
  }

  for (int l = 0; l < 3; ++l) {
    const auto& va = kRefVertices[(l + 1) % 3];
    const auto& vb = kRefVertices[(l + 2) % 3];
    const double ref_length = std::hypot(vb[0] - va[0], vb[1] - va[1]);
    EdgeRule& rule = edge_rules_[l];
    rule.x.resize(n_edge);
    rule.y.resize(n_edge);
    rule.w.resize(n_edge);
    basis_edge_[l][0].resize(static_cast<std::size_t>(n_edge) * n_local_);
    grad_edge_[l][0].resize(static_cast<std::size_t>(n_edge) * n_local_ * 2);
    for (int q = 0; q < n_edge; ++q) {
      const double s = edge_points_.t[q];
      rule.x[q] = va[0] + s * (vb[0] - va[0]);
      rule.y[q] = va[1] + s * (vb[1] - va[1]);
      rule.w[q] = edge_points_.w[q] * ref_length;
      dubiner_eval(degree_, rule.x[q], rule.y[q],
                   &basis_edge_[l][0][static_cast<std::size_t>(q) * n_local_],
                   &grad_edge_[l][0][static_cast<std::size_t>(q) * n_local_ * 2]);
    }
    // The reversed orientation is the same point set traversed the other way
    // (Gauss points are symmetric about the midpoint), so its tables are a
    // bitwise permutation of the canonical ones.
    basis_edge_[l][1].resize(basis_edge_[l][0].size());
    grad_edge_[l][1].resize(grad_edge_[l][0].size());
    for (int q = 0; q < n_edge; ++q) {
      const int p = n_edge - 1 - q;
      for (int j = 0; j < n_local_; ++j) {
        basis_edge_[l][1][static_cast<std::size_t>(q) * n_local_ + j] =
            basis_edge_[l][0][static_cast<std::size_t>(p) * n_local_ + j];
        grad_edge_[l][1][(static_cast<std::size_t>(q) * n_local_ + j) * 2] =
            grad_edge_[l][0][(static_cast<std::size_t>(p) * n_local_ + j) * 2];
        grad_edge_[l][1][(static_cast<std::size_t>(q) * n_local_ + j) * 2 + 1] =
            grad_edge_[l][0][(static_cast<std::size_t>(p) * n_local_ + j) * 2 + 1];
      }
    }
  }
}

const ReferenceElement::EdgeRule& ReferenceElement::edge_rule(int local_edge) const {
  if (local_edge < 0 || local_edge > 2) {
    throw Error(ErrorCode::InvalidIndex, "local edge index must be 0, 1, or 2", local_edge);
  }
  return edge_rules_[local_edge];
}

std::vector<int> ReferenceElement::trace_alignment(int local_edge, bool flip) const {
  if (local_edge < 0 || local_edge > 2) {
    throw Error(ErrorCode::InvalidIndex, "local edge index must be 0, 1, or 2", local_edge);
  }
  const int n = edge_points_.size();
  std::vector<int> perm(n);
  for (int q = 0; q < n; ++q) {
    perm[q] = flip ? n - 1 - q : q;
  }
  return perm;
}

void ReferenceElement::eval_basis(double x, double y, double* values) const {
  dubiner_eval(degree_, x, y, values, nullptr);
}

void ReferenceElement::eval_basis_grad(double x, double y, double* grads_xy) const {
  dubiner_eval(degree_, x, y, nullptr, grads_xy);
}

ReferenceElement build_reference(int degree, int quad_order) {
  return ReferenceElement(degree, quad_order);
}

} // namespace dgfem
