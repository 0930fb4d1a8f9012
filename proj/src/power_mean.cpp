#include "divkit/power_mean.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace divkit {

namespace {
constexpr double kOrderSwitch = 1e-6;
}

double power_mean(double p, double r, double t) {
  if (std::isnan(p) || std::isnan(r) || std::isnan(t))
    throw std::invalid_argument("power_mean: NaN argument");
  if (r < 0.0 || t < 0.0)
    throw std::invalid_argument("power_mean: arguments must be nonnegative");

  if (r == t) return r;
  const double lo = std::min(r, t);
  const double hi = std::max(r, t);

  if (std::isinf(p)) return p > 0 ? hi : lo;
  if (p == 0.0) return std::sqrt(lo * hi);

  if (lo == 0.0) {
    if (p < 0.0) return 0.0;
    return hi * std::pow(0.5, 1.0 / p);
  }

  if (std::fabs(p) < kOrderSwitch) {
    const double mid = 0.5 * (std::log(lo) + std::log(hi));
    const double gap = std::log(hi) - std::log(lo);
    return std::exp(mid + p * gap * gap / 8.0);
  }

  // Anchor at the argument that dominates for this sign of p, so the
  // remaining ratio is <= 1 and pow stays in range.
  const double w = lo / hi;
  const double base = 0.5 * (1.0 + std::pow(w, std::fabs(p)));
  const double anchor = p > 0 ? hi : lo;
  return anchor * std::pow(base, 1.0 / p);
}

}  // namespace divkit
