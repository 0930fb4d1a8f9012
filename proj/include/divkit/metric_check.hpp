#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "divkit/extended_value.hpp"

namespace divkit {

// Property suites that audit whether H(.,.)^(1/a) behaves like a metric on
// masses, probing the costless triangle inequality
//   H(u,1)^a <= v^a H(u/v,1)^a + H(v,1)^a  restricted to u <= v,
// together with monotonicity certificates and concavity checks for the
// distance transforms used on cone spaces.

using CostlessEvaluator = std::function<ExtendedValue(double, double)>;

// Violations below this slack are attributed to roundoff.
inline constexpr double kTriangleSlack = 1e-9;
inline constexpr double kMonotoneSlack = 1e-10;

struct TriangleWitness {
  double u = 0.0;
  double v = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct TriangleReport {
  bool passed = false;
  double worst_violation = 0.0;  // max over tested pairs of lhs - rhs
  std::optional<TriangleWitness> witness;
  long tested = 0;
  long skipped = 0;  // pairs whose left side is infinite
  bool necessary_condition_failed = false;  // H(0,1) must be finite
};

// Scans deterministic grid pairs plus seeded random pairs (u < v in (0,1]).
TriangleReport check_costless_triangle(const CostlessEvaluator& H, double a,
                                       int resolution = 200, int random_pairs = 1000,
                                       std::uint64_t seed = 0x5EED);

struct KafkaReport {
  bool certificate = false;
  double max_increase = 0.0;  // worst upward step of the profile
  std::vector<std::pair<double, double>> profile;
};

// Certifies the triangle inequality through monotonicity of
// u -> (1 - u^a)^(1/a) / H(u,1) on (0,1); a nonincreasing profile is the
// certificate.
KafkaReport kafka_certificate(const CostlessEvaluator& H, double a);

struct ConcaveTransformReport {
  bool passed = false;
  bool zero_at_zero = false;
  bool nonnegative = false;
  bool midpoint_concave = false;
  bool subadditive = false;
};

// Checks f(0)=0, f >= 0, midpoint concavity, and subadditivity on the given
// sample points; these together let f reshape a metric into another metric.
ConcaveTransformReport concave_transform_check(const std::function<double(double)>& f,
                                               const std::vector<double>& d_samples);

// Largest exponent a in [a_lo, a_hi] whose costless triangle check passes,
// located by bisection to 1e-3; nullopt when even a_lo fails.
std::optional<double> max_metric_power(const CostlessEvaluator& H, double a_lo,
                                       double a_hi, int resolution = 200);

}  // namespace divkit
