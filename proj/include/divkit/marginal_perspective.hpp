#pragma once

#include <optional>
#include <vector>

#include "divkit/entropy.hpp"
#include "divkit/extended_value.hpp"

namespace divkit {

// Marginal perspective H(r,t) = inf_theta [ F(theta/r) r + F(theta/t) t ]:
// the cheapest way to reach a common intermediate density from masses r and t.
// Symmetric in (r,t) when paired with the reverse entropy; here F is used on
// both legs, which matches the symmetric families this toolkit ships.

// Closed-form value when the family admits one, nullopt otherwise.
// Tabulated entropies and reversed views always report nullopt, as does the
// double-power family on the boundary r*t = 0.
std::optional<ExtendedValue> h_closed(const EntropyDescriptor& F, double r, double t);

// Direct minimization fallback: golden-section on the convex objective over
// theta in [min(r,t), max(r,t)], with a vanishing-mass envelope at the
// boundary r = 0 or t = 0.
ExtendedValue h_oracle(const EntropyDescriptor& F, double r, double t);

// Evaluates H on the tensor grid points x points; grids need >= 2
// nondecreasing entries each.
std::vector<std::vector<ExtendedValue>> h_grid(const EntropyDescriptor& F,
                                               const std::vector<double>& points);

// Picks the closed form when available and remembers which path answered.
class MarginalPerspective {
 public:
  explicit MarginalPerspective(EntropyDescriptor F);

  bool has_closed_form() const { return closed_; }
  ExtendedValue operator()(double r, double t) const;

  // "closed" or "oracle", for report headers.
  const char* source() const { return closed_ ? "closed" : "oracle"; }

 private:
  EntropyDescriptor entropy_;
  bool closed_;
};

}  // namespace divkit
