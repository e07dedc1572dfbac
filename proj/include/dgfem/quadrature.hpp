#ifndef DGFEM_QUADRATURE_HPP
#define DGFEM_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace dgfem {

/// Quadrature rule on the reference triangle (0,0)-(1,0)-(0,1).
/// Weights are positive and sum to the reference area 1/2.
struct TriangleRule {
  std::vector<double> x, y, w;
  int degree = 0; // exactly integrates all polynomials of total degree <= degree

  int size() const { return static_cast<int>(w.size()); }
};

/// Symmetric (Dunavant) rules up to degree 9; collapsed Gauss tensor rules
/// beyond that (arbitrary degree, machine-precision exact by construction).
/// Negative-weight symmetric rules are skipped in favour of the next size up.
TriangleRule triangle_rule(int degree);

/// Gauss-Legendre rule mapped to [0,1]; weights sum to 1, exact for
/// polynomials of degree <= 2n-1. Nodes are symmetric about 1/2:
/// t[n-1-q] == 1 - t[q] holds exactly.
struct Gauss1D {
  std::vector<double> t, w;

  int size() const { return static_cast<int>(w.size()); }
};

Gauss1D gauss_legendre(int n);

/// Sum of w_q * f(x_q, y_q); exact for polynomials up to the rule's degree.
double integrate_volume(const TriangleRule& rule,
                        const std::function<double(double, double)>& f);

} // namespace dgfem

#endif
