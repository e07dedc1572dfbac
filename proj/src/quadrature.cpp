#include "dgfem/quadrature.hpp"

#include <cmath>
#include <cstddef>

#include "dgfem/errors.hpp"

namespace dgfem {

namespace {

void add_centroid(TriangleRule& rule, double w) {
  rule.x.push_back(1.0 / 3.0);
  rule.y.push_back(1.0 / 3.0);
  rule.w.push_back(w);
}

// Three-fold orbit with barycentric coordinates (a, a, 1-2a) and permutations.
void add_orbit3(TriangleRule& rule, double a, double w) {
  const double c = 1.0 - 2.0 * a;
  const double xs[3] = {a, a, c};
  const double ys[3] = {c, a, a};
  for (int i = 0; i < 3; ++i) {
    rule.x.push_back(xs[i]);
    rule.y.push_back(ys[i]);
    rule.w.push_back(w);
  }
}

// Six-fold orbit: all permutations of the barycentric triple (a, b, 1-a-b).
void add_orbit6(TriangleRule& rule, double a, double b, double w) {
  const double c = 1.0 - a - b;
  const double xs[6] = {b, c, a, c, a, b};
  const double ys[6] = {c, b, c, a, b, a};
  for (int i = 0; i < 6; ++i) {
    rule.x.push_back(xs[i]);
    rule.y.push_back(ys[i]);
    rule.w.push_back(w);
  }
}

// Dunavant symmetric rules. Orbit weights below are normalized to the unit
// simplex (area 1/2, hence the 0.5 factors). The degree-3 and degree-7 rules
// carry a negative weight, so those degrees are served by the next rule up;
// every rule returned here is positive-weight.
TriangleRule dunavant_rule(int degree) {
  TriangleRule rule;
  switch (degree) {
    case 0:
    case 1:
      rule.degree = 1;
      add_centroid(rule, 0.5);
      break;
    case 2:
      rule.degree = 2;
      add_orbit3(rule, 1.0 / 6.0, 1.0 / 6.0);
      break;
    case 3:
    case 4:
      rule.degree = 4;
      add_orbit3(rule, 0.44594849091596488631832925388305,
                 0.22338158967801146569500700843312 * 0.5);
      add_orbit3(rule, 0.09157621350977074345957146340220,
                 0.10995174365532186763832632490021 * 0.5);
      break;
    case 5:
      rule.degree = 5;
      add_centroid(rule, 0.225 * 0.5);
      add_orbit3(rule, 0.47014206410511508977044120951345,
                 0.13239415278850618073764938783315 * 0.5);
      add_orbit3(rule, 0.10128650732345633880098736191512,
                 0.12593918054482715259568394550018 * 0.5);
      break;
    case 6:
      rule.degree = 6;
      add_orbit3(rule, 0.24928674517091042129163855310702,
                 0.11678627572637936602528961138558 * 0.5);
      add_orbit3(rule, 0.06308901449150222834033160287082,
                 0.05084490637020681692093680910686 * 0.5);
      add_orbit6(rule, 0.31035245103378440541660773395655,
                 0.63650249912139864723014259441205,
                 0.08285107561837357519355345642044 * 0.5);
      break;
    case 7:
    case 8:
      rule.degree = 8;
      add_centroid(rule, 0.14431560767778716825109111048906 * 0.5);
      add_orbit3(rule, 0.17056930775176020662229350149146,
                 0.10321737053471825028179155029212 * 0.5);
      add_orbit3(rule, 0.05054722831703097545842355059660,
                 0.03245849762319808031092592834178 * 0.5);
      add_orbit3(rule, 0.45929258829272315602881551449417,
                 0.09509163426728462479389610438858 * 0.5);
      add_orbit6(rule, 0.26311282963463811342178578628464,
                 0.72849239295540428124100037917606,
                 0.02723031417443499426484469007390 * 0.5);
      break;
    case 9:
      rule.degree = 9;
      add_centroid(rule, 0.09713579628279609890744676309485 * 0.5);
      add_orbit3(rule, 0.48968251919873762778370692483619,
                 0.03133470022713983234393199080984 * 0.5);
      add_orbit3(rule, 0.43708959149293663726993036443535,
                 0.07782754100477543338465495857972 * 0.5);
      add_orbit3(rule, 0.18820353561903273024096128046733,
                 0.07964773892720910288013526957424 * 0.5);
      add_orbit3(rule, 0.04472951339445297061024247196780,
                 0.02557767565869810438673914467637 * 0.5);
      add_orbit6(rule, 0.22196298916076569567510252769319,
                 0.74119859878449802069007987352342,
                 0.04328353937728937728937728937729 * 0.5);
      break;
    default:
      throw Error(ErrorCode::InvalidArgument, "no tabulated triangle rule for this degree");
  }
  return rule;
}

// Duffy-collapsed tensor rule: x = s(1-r), y = r over [0,1]^2 with Jacobian
// (1-r). The extra point in r absorbs the Jacobian factor, so the rule is
// exact (to machine precision) for any requested total degree.
TriangleRule collapsed_rule(int degree) {
  const int ns = (degree + 2) / 2;
  const int nr = (degree + 3) / 2;
  const Gauss1D gs = gauss_legendre(ns);
  const Gauss1D gr = gauss_legendre(nr);

  TriangleRule rule;
  rule.degree = degree;
  rule.x.reserve(static_cast<std::size_t>(ns) * nr);
  rule.y.reserve(static_cast<std::size_t>(ns) * nr);
  rule.w.reserve(static_cast<std::size_t>(ns) * nr);
  for (int j = 0; j < nr; ++j) {
    const double r = gr.t[j];
    for (int i = 0; i < ns; ++i) {
      rule.x.push_back(gs.t[i] * (1.0 - r));
      rule.y.push_back(r);
      rule.w.push_back(gs.w[i] * gr.w[j] * (1.0 - r));
    }
  }
  return rule;
}

} // namespace

TriangleRule triangle_rule(int degree) {
  if (degree < 0) {
    throw Error(ErrorCode::InvalidArgument, "quadrature degree must be nonnegative");
  }
  if (degree <= 9) {
    return dunavant_rule(degree);
  }
  return collapsed_rule(degree);
}

Gauss1D gauss_legendre(int n) {
  if (n < 1) {
    throw Error(ErrorCode::InvalidArgument, "Gauss rule needs at least one point");
  }
  Gauss1D rule;
  rule.t.resize(n);
  rule.w.resize(n);

  // Newton iteration on P_n over [-1,1]; nodes come out in descending order,
  // i.e. ascending after the map to [0,1].
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int m = 2; m <= n; ++m) {
        const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) {
        break;
      }
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Map to [0,1] and mirror, so t[n-1-q] == 1 - t[q] exactly.
    rule.t[n - 1 - i] = 0.5 * (1.0 + x);
    rule.t[i] = 1.0 - rule.t[n - 1 - i];
    rule.w[i] = rule.w[n - 1 - i] = 0.5 * w;
  }
  if (n % 2 == 1) {
    rule.t[n / 2] = 0.5;
  }
  return rule;
}

double integrate_volume(const TriangleRule& rule,
                        const std::function<double(double, double)>& f) {
  double sum = 0.0;
  for (int q = 0; q < rule.size(); ++q) {
    sum += rule.w[q] * f(rule.x[q], rule.y[q]);
  }
  return sum;
}

} // namespace dgfem
