#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "divkit/extended_value.hpp"

namespace divkit {

enum class EntropyFamily {
  Indicator,
  ChiAlpha,
  Matusita,
  PowerLike,
  PowerLog,
  DoublePower,
  TotalVariationScaled,
  Tabulated,
};

// An admissible entropy function: convex, lower semicontinuous
// F : [0, inf) -> [0, inf] with F(1) = 0. Instances are immutable value
// objects carrying the family tag, its parameters, and the four derived
// coefficients that drive every downstream formula:
//
//   at_zero()             F(0), may be +inf
//   slope_at_zero()       right derivative at 0, -inf when F(0) = +inf
//   recession_constant()  slope at infinity F'_inf, may be +inf
//   asymptotic_affine()   lim F'_inf * s - F(s), in [0, +inf]
//
// Built-in families and their parameter ranges:
//
//   indicator(a, b)                0 <= a <= 1 <= b <= +inf; F = 0 on [a,b],
//                                  +inf outside
//   chi_alpha(alpha)               alpha >= 1; |s-1|^alpha
//   matusita(a)                    0 < a <= 1; |s^a - 1|^(1/a)
//   power_like(p)                  any real p; (s^p - p(s-1) - 1)/(p(p-1)),
//                                  with the entropy limits s*log(s) - s + 1 at
//                                  p = 1 and s - 1 - log(s) at p = 0
//   power_log(p)                   p >= 1; s^p - p*log(s) - 1
//   double_power(p, q)             (p >= 1, 0 < q <= 1, p != q) or
//                                  (p < 0, q >= 1); q*s^p - p*s^q + p - q
//   total_variation_scaled(c)      c > 0; c|s-1|
//   tabulated(s, values)           piecewise-linear in s through the given
//                                  nodes, extended linearly (clamped at 0)
//                                  beyond them; needs a node at s = 1 with
//                                  value 0
//
// Coefficients of the closed-form families are exact; tabulated ones are
// derived from doubling-step difference quotients (relative tolerance 1e-8).
// Construction validates parameters and throws std::invalid_argument; all
// evaluations on valid descriptors are total and never throw for s >= 0.
class EntropyDescriptor {
 public:
  static EntropyDescriptor indicator(double a, double b);
  static EntropyDescriptor chi_alpha(double alpha);
  static EntropyDescriptor matusita(double a);
  static EntropyDescriptor power_like(double p);
  static EntropyDescriptor power_log(double p);
  static EntropyDescriptor double_power(double p, double q);
  static EntropyDescriptor total_variation_scaled(double c);
  static EntropyDescriptor tabulated(std::vector<double> s,
                                     std::vector<ExtendedValue> values);

  EntropyFamily family() const { return family_; }
  const std::vector<double>& params() const { return params_; }

  // True for descriptors produced by reverse() of a family whose reverse is
  // not itself a built-in family; such descriptors evaluate F(1/s)*s of their
  // base parameters.
  bool is_reversed_view() const { return reversed_; }

  ExtendedValue at_zero() const;
  double slope_at_zero() const { return fp0_; }
  ExtendedValue recession_constant() const;
  double asymptotic_affine() const { return aff_; }

 private:
  EntropyDescriptor() = default;

  struct TabulatedData {
    std::vector<double> s;
    std::vector<double> v;  // +inf allowed
  };

  // Raw evaluation in IEEE doubles (+inf allowed); s >= 0.
  double eval_raw(double s) const;
  double eval_base(double s) const;  // ignores the reversed flag

  EntropyFamily family_ = EntropyFamily::PowerLike;
  std::vector<double> params_;
  bool reversed_ = false;
  double f0_ = 0.0;     // F(0), +inf allowed
  double fp0_ = 0.0;    // F'(0+), -inf allowed
  double fpinf_ = 0.0;  // F'_inf, +inf allowed
  double aff_ = 0.0;    // aff F_inf, +inf allowed
  std::shared_ptr<const TabulatedData> tab_;

  friend ExtendedValue evaluate(const EntropyDescriptor&, double);
  friend EntropyDescriptor reverse(const EntropyDescriptor&);
  friend double conjugate(const EntropyDescriptor&, double);
  friend double conjugate_inverse(const EntropyDescriptor&, double);
  friend double derivative(const EntropyDescriptor&, double);
};

// A finite nonnegative measure on an indexed point set: unique point indices
// with nonnegative masses. space_id names the point set so that measures on
// different spaces cannot be mixed by accident.
struct DiscreteMeasure {
  struct Atom {
    int index;
    double mass;
  };

  DiscreteMeasure(std::string space, std::vector<Atom> measure_atoms);

  const std::string& space_id() const { return space_id_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  double total_mass() const;

 private:
  std::string space_id_;
  std::vector<Atom> atoms_;
};

// F(s) for s >= 0; at s = 0 this is the lower-semicontinuous limit.
ExtendedValue evaluate(const EntropyDescriptor& F, double s);

// rec(F)(r) = F'_inf * r, with 0 * inf = 0.
ExtendedValue recession(const EntropyDescriptor& F, double r);

// Perspective function: F(r/t)*t for t > 0, rec(F)(r) at t = 0. Jointly
// convex, lower semicontinuous and 1-homogeneous in (r, t).
ExtendedValue perspective(const EntropyDescriptor& F, double r, double t);

// Reverse entropy R(s) = F(1/s)*s with R(0) = F'_inf. An involution; the
// coefficients transfer as R(0) = F'_inf, R'_inf = F(0), R'(0+) = -aff F_inf,
// aff R_inf = -F'(0+). Families closed under reversal map to themselves
// (power_like p -> 1-p, indicator (a,b) -> (1/b,1/a), matusita and scaled
// total variation are fixed); the rest return a reversed view.
EntropyDescriptor reverse(const EntropyDescriptor& F);

// Legendre conjugate F*(phi) = sup_{s>=0} { s*phi - F(s) }, as an IEEE double
// with +inf where the supremum diverges. Closed forms are used when the
// family admits them, otherwise a scan plus golden-section maximization of
// the concave objective (argument tolerance 1e-12 relative).
double conjugate(const EntropyDescriptor& F, double phi);

// Inverse of the conjugate on the interval where it is a strictly increasing
// bijection: given y in (-F(0), aff F_inf), returns the phi with F*(phi) = y.
// y = 0 always maps to 0. Throws std::domain_error outside the interval.
double conjugate_inverse(const EntropyDescriptor& F, double y);

// Right derivative F'(s); -inf at s = 0 when F(0) = +inf. One-sided at kinks.
double derivative(const EntropyDescriptor& F, double s);

// Plain F-divergence sum_i F(r_i/t_i)*t_i over the union of atom indices,
// masses defaulting to 0 where an atom is missing. Throws
// std::invalid_argument when the measures live on different spaces.
ExtendedValue f_divergence(const EntropyDescriptor& F, const DiscreteMeasure& mu1,
                           const DiscreteMeasure& mu2);

}  // namespace divkit
