#include "divkit/metric_check.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace divkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double unit_draw(std::mt19937_64& gen) {
  return (static_cast<double>(gen() >> 11) + 1.0) * 0x1p-53;  // (0, 1]
}

}  // namespace

TriangleReport check_costless_triangle(const CostlessEvaluator& H, double a,
                                       int resolution, int random_pairs,
                                       std::uint64_t seed) {
  if (!(a > 0.0) || std::isinf(a))
    throw std::invalid_argument("check_costless_triangle: exponent must be finite > 0");
  if (resolution < 2)
    throw std::invalid_argument("check_costless_triangle: resolution must be >= 2");

  TriangleReport report;
  const ExtendedValue at_zero = H(0.0, 1.0);
  const ExtendedValue near_zero = H(1e-8, 1.0);
  report.necessary_condition_failed = at_zero.is_infinite() || near_zero.is_infinite();

  double worst = -kInf;
  TriangleWitness worst_pair;

  const auto probe = [&](double u, double v) {
    const ExtendedValue l = H(u, 1.0);
    if (l.is_infinite()) {
      ++report.skipped;
      return;
    }
    ++report.tested;
    const double lhs = std::pow(l.finite_value(), a);
    const ExtendedValue mid = H(u / v, 1.0);
    const ExtendedValue right = H(v, 1.0);
    if (mid.is_infinite() || right.is_infinite()) return;  // infinite bound holds
    const double rhs = std::pow(v, a) * std::pow(mid.finite_value(), a) +
                       std::pow(right.finite_value(), a);
    const double gap = lhs - rhs;
    if (gap > worst) {
      worst = gap;
      worst_pair = {u, v, lhs, rhs};
    }
  };

  const int n = resolution;
  for (int j = 0; j + 1 < n; ++j) {
    const double v = double(j + 1) / n;
    for (int i = 0; i < n; ++i) {
      const double u = double(i) / n;
      if (u < v) probe(u, v);
    }
  }

  std::mt19937_64 gen(seed);
  for (int k = 0; k < random_pairs; ++k) {
    const double x = unit_draw(gen);
    const double y = unit_draw(gen);
    if (x == y) continue;
    probe(std::min(x, y), std::max(x, y));
  }

  if (std::isinf(worst)) worst = 0.0;
  report.worst_violation = worst;
  report.passed = worst <= kTriangleSlack && !report.necessary_condition_failed;
  // violations inside the roundoff slack are noise, not evidence
  if (worst > kTriangleSlack) report.witness = worst_pair;
  return report;
}

KafkaReport kafka_certificate(const CostlessEvaluator& H, double a) {
  if (!(a > 0.0) || std::isinf(a))
    throw std::invalid_argument("kafka_certificate: exponent must be finite > 0");

  // Log-spaced points toward 0 where the profile moves fastest, linear
  // points through the bulk; the endpoint stays below 1 to avoid the 0/0
  // ratio there.
  std::vector<double> us;
  us.reserve(512);
  for (int i = 0; i < 256; ++i)
    us.push_back(std::pow(10.0, -6.0 + 5.0 * i / 255.0));
  for (int i = 0; i < 256; ++i) us.push_back(0.1 + (0.99 - 0.1) * i / 255.0);

  KafkaReport report;
  for (double u : us) {
    const ExtendedValue h = H(u, 1.0);
    if (h.is_infinite() || h.finite_value() <= 0.0) continue;
    const double num = std::pow(1.0 - std::pow(u, a), 1.0 / a);
    report.profile.emplace_back(u, num / h.finite_value());
  }
  double worst = -kInf;
  for (std::size_t i = 0; i + 1 < report.profile.size(); ++i)
    worst = std::max(worst, report.profile[i + 1].second - report.profile[i].second);
  report.max_increase = std::isinf(worst) ? 0.0 : worst;
  report.certificate =
      report.profile.size() >= 2 && report.max_increase <= kMonotoneSlack;
  return report;
}

ConcaveTransformReport concave_transform_check(const std::function<double(double)>& f,
                                               const std::vector<double>& d_samples) {
  ConcaveTransformReport rep;
  rep.zero_at_zero = std::fabs(f(0.0)) <= 1e-12;
  rep.nonnegative = true;
  rep.midpoint_concave = true;
  rep.subadditive = true;
  for (double x : d_samples) {
    if (f(x) < -1e-12) rep.nonnegative = false;
    for (double y : d_samples) {
      if (y < x) continue;
      if (f(0.5 * (x + y)) < 0.5 * (f(x) + f(y)) - 1e-10) rep.midpoint_concave = false;
      if (f(x + y) > f(x) + f(y) + 1e-10) rep.subadditive = false;
    }
  }
  rep.passed = rep.zero_at_zero && rep.nonnegative && rep.midpoint_concave && rep.subadditive;
  return rep;
}

std::optional<double> max_metric_power(const CostlessEvaluator& H, double a_lo,
                                       double a_hi, int resolution) {
  if (!(a_lo > 0.0) || !(a_hi >= a_lo))
    throw std::invalid_argument("max_metric_power: need 0 < a_lo <= a_hi");
  const auto passes = [&](double a) {
    return check_costless_triangle(H, a, resolution).passed;
  };
  if (passes(a_hi)) return a_hi;
  if (!passes(a_lo)) return std::nullopt;
  double lo = a_lo, hi = a_hi;
  while (hi - lo > 1e-3) {
    const double mid = 0.5 * (lo + hi);
    (passes(mid) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace divkit
