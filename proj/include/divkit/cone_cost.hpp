#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "divkit/entropy.hpp"
#include "divkit/extended_value.hpp"

namespace divkit {

// Costs between mass-carrying points of a cone over a metric space: the
// entropic two-leg cost with a transport surcharge c, its dual, the
// power-family closed forms with c = d^2, and generators for the triangle
// counterexamples below exponent 1.

class FiniteMetricSpace {
 public:
  // Validates symmetry, zero diagonal, strict positivity off the diagonal,
  // and every triangle inequality.
  explicit FiniteMetricSpace(std::vector<std::vector<double>> distances);

  std::size_t size() const { return d_.size(); }
  double distance(std::size_t i, std::size_t j) const { return d_[i][j]; }

  static FiniteMetricSpace single_point();
  static FiniteMetricSpace planar(const std::vector<std::pair<double, double>>& pts);
  static FiniteMetricSpace path(std::size_t n, double edge = 1.0);

 private:
  std::vector<std::vector<double>> d_;
};

struct ConePoint {
  std::size_t point_index = 0;
  double radius = 0.0;
};

// Cone points are identified when radii match and either both are 0 (the
// apex) or the base points coincide.
bool cone_equivalent(const ConePoint& a, const ConePoint& b);

// inf_theta [ F(theta/r1) r1 + F(theta/r2) r2 + theta c ]; c = +inf charges
// both masses at the recession price F(0).
ExtendedValue h_cost_primal(const EntropyDescriptor& F, double c, double r1, double r2);

// Same value through the dual program sup { r1 psi1 + r2 psi2 } over
// conjugate-feasible pairs with R*(psi1) + R*(psi2) <= c, R the reverse
// entropy; the active constraint is parameterized by conjugate_inverse.
ExtendedValue h_cost_dual(const EntropyDescriptor& F, double c, double r1, double r2);

// Closed form of the power-family cone cost with c = d^2.
ExtendedValue h_p_cone(double p, double d, double r, double t);

// Transformed cost M_1(r,t) - M_{1-p}(r,t) cos(dbar ^ pi/2) used to prove
// the triangle inequality; dbar is an angle.
double h_bar_p(double p, double dbar, double r, double t);

// Angle substitution: (p/2) h_p_cone(p, d, r, t) = h_bar_p(p, f_p(d), r, t).
double f_p_transform(double p, double d);

// Cone distance sqrt(r1^2 + r2^2 - 2 r1 r2 cos(d ^ pi)).
double cone_metric(double d, double r1, double r2);

struct ConeCounterexample {
  double p = 0.0;
  double r = 0.0, s = 0.0, t = 0.0;     // radii at the three points
  double d12 = 0.0, d23 = 0.0, d13 = 0.0;
  double lhs = 0.0;   // sqrt cost of the long leg
  double rhs = 0.0;   // sum of sqrt costs of the two short legs
  double margin = 0.0;
};

// Produces a configuration violating the sqrt-cost triangle inequality for
// p < 1: zero radii with a distance gap for p <= 1/2, a costless mass triple
// for p in (1/2, 1), and a widening distance search for p < 0.
ConeCounterexample counterexample_p_below_one(double p);

struct ConeTriangleReport {
  bool passed = false;
  double worst_violation = 0.0;
  long tested = 0;
  std::array<std::size_t, 3> witness_points{};
  std::array<double, 3> witness_radii{};
};

// Random cone triples (log-uniform radii, occasional zeros, all cyclic
// orientations) plus a deterministic stress battery over every point triple
// with corner radii {0, 1e-9, 1, 10}.
ConeTriangleReport check_cone_triangle(double p, const FiniteMetricSpace& X,
                                       int samples, std::uint64_t seed = 0x5EED);

// Mean ratio M_{1-p}(r,t) / M_0(r,t), increasing in r/t on (0,1) for p > 1.
double theta_p(double p, double r, double t);

struct FinalInequalityReport {
  bool passed = false;
  double lhs_sup = 0.0;
  double rhs_min = 0.0;
  double predicted_sup = 0.0;  // 4 / (p - 1)
};

// Audits (1+sqrt u)^2 (M_0 - M_{-1})/(M_0 - M_{1-p}) at (u,1) against
// sqrt(v)(1+4v)/(M_0 - M_{1-p}) at (1,v) on log grids hugging the endpoints.
FinalInequalityReport final_inequality_check(double p, int u_points = 100,
                                             int v_points = 100);

}  // namespace divkit
