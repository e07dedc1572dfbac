#ifndef DGFEM_REFERENCE_HPP
#define DGFEM_REFERENCE_HPP

#include <array>
#include <vector>

#include "dgfem/quadrature.hpp"

namespace dgfem {

/// Reference triangle (0,0)-(1,0)-(0,1). Local edge l is opposite vertex l
/// and runs from vertex (l+1)%3 to vertex (l+2)%3 in canonical direction.
inline constexpr std::array<std::array<double, 2>, 3> kRefVertices{
    {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}};

int local_dof_count(int degree); // (k+1)(k+2)/2

/// Precomputed basis/quadrature tables for one polynomial degree. The basis
/// is the orthonormal Dubiner basis of the reference triangle, so the
/// reference mass matrix is the identity. All tables are immutable after
/// construction and shared read-only by the assembly workers.
class ReferenceElement {
public:
  struct EdgeRule {
    std::vector<double> x, y; // points along the edge, canonical direction
    std::vector<double> w;    // weights, summing to the reference edge length
  };

  /// quad_order = 0 picks the defaults: volume rule exact to degree 2k+2 and
  /// ceil((2k+2)/2) Gauss points per edge (exact to 2k+1). A positive
  /// quad_order requests a volume rule of that exactness instead, with
  /// ceil(quad_order/2) edge points.
  ReferenceElement(int degree, int quad_order = 0);

  int degree() const { return degree_; }
  int n_local() const { return n_local_; }

  const TriangleRule& volume_rule() const { return volume_rule_; }
  const Gauss1D& edge_points() const { return edge_points_; }
  const EdgeRule& edge_rule(int local_edge) const;

  // Volume tables, indexed by quadrature point q and local basis index j.
  double phi(int q, int j) const { return basis_vol_[q * n_local_ + j]; }
  double dphi(int q, int j, int d) const { return grad_vol_[(q * n_local_ + j) * 2 + d]; }

  // Edge-trace tables. orient 0 evaluates along the canonical local edge
  // direction, orient 1 along the reversed one, so that two elements sharing
  // a physical edge see the same physical point at the same q when each picks
  // the orient matching its traversal of the edge.
  double edge_phi(int local_edge, int orient, int q, int j) const {
    return basis_edge_[local_edge][orient][q * n_local_ + j];
  }
  double edge_dphi(int local_edge, int orient, int q, int j, int d) const {
    return grad_edge_[local_edge][orient][(q * n_local_ + j) * 2 + d];
  }

  /// Permutation aligning the far-side trace with the near side: identity for
  /// flip = false, point reversal for flip = true (Gauss points are symmetric
  /// about the edge midpoint). Applying it twice is the identity.
  std::vector<int> trace_alignment(int local_edge, bool flip) const;

  // Pointwise evaluation at an arbitrary reference point (used for plotting,
  // projection and test oracles). Buffers must hold n_local / 2*n_local.
  void eval_basis(double x, double y, double* values) const;
  void eval_basis_grad(double x, double y, double* grads_xy) const;

private:
  int degree_;
  int n_local_;
  TriangleRule volume_rule_;
  Gauss1D edge_points_;
  std::array<EdgeRule, 3> edge_rules_;
  std::vector<double> basis_vol_;
  std::vector<double> grad_vol_;
  std::array<std::array<std::vector<double>, 2>, 3> basis_edge_;
  std::array<std::array<std::vector<double>, 2>, 3> grad_edge_;
};

ReferenceElement build_reference(int degree, int quad_order = 0);

} // namespace dgfem

#endif
