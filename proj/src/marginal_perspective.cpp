#include "divkit/marginal_perspective.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "divkit/power_mean.hpp"

namespace divkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double xlogx(double x) { return x == 0.0 ? 0.0 : x * std::log(x); }

// H for the logarithmic entropy s - 1 - ln s, also the p = 1 limit of the
// power-log family.
double h_log(double r, double t) {
  if (r == 0.0 && t == 0.0) return 0.0;
  return xlogx(r) + xlogx(t) - (r + t) * std::log((r + t) / 2.0);
}

double golden_min(double a, double b, const std::function<double(double)>& g) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = g(x1), f2 = g(x2);
  for (int it = 0; it < 200 && (b - a) > 1e-12 * std::max(1.0, b); ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = g(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = g(x2);
    }
  }
  return std::min(f1, f2);
}

// Minimum of theta -> F(theta/r) r + F(theta/t) t for strictly positive
// masses; the convex objective restricts the search to [min(r,t), max(r,t)].
double interior_min(const EntropyDescriptor& F, double r, double t) {
  if (r == t) return 0.0;
  const double lo = std::min(r, t), hi = std::max(r, t);
  const auto g = [&](double theta) {
    const double a = evaluate(F, theta / r).as_double();
    const double b = evaluate(F, theta / t).as_double();
    return std::isinf(a) || std::isinf(b) ? kInf : a * r + b * t;
  };

  std::vector<double> cand;
  cand.reserve(73);
  const double ratio = hi / lo;
  for (int i = 0; i <= 64; ++i) cand.push_back(lo * std::pow(ratio, i / 64.0));
  if (F.family() == EntropyFamily::Indicator) {
    const double a = F.params()[0], b = F.params()[1];
    for (double k : {a * r, a * t, b * r, b * t})
      if (k >= lo && k <= hi && std::isfinite(k)) cand.push_back(k);
    std::sort(cand.begin(), cand.end());
  }

  std::size_t best = 0;
  double best_val = kInf;
  std::vector<double> vals(cand.size());
  for (std::size_t i = 0; i < cand.size(); ++i) {
    vals[i] = g(cand[i]);
    if (vals[i] < best_val) {
      best_val = vals[i];
      best = i;
    }
  }
  if (std::isinf(best_val)) return kInf;

  const double a = cand[best > 0 ? best - 1 : 0];
  const double b = cand[std::min(best + 1, cand.size() - 1)];
  return std::min(best_val, golden_min(a, b, g));
}

}  // namespace

std::optional<ExtendedValue> h_closed(const EntropyDescriptor& F, double r, double t) {
  if (std::isnan(r) || std::isnan(t) || r < 0.0 || t < 0.0)
    throw std::invalid_argument("h_closed: masses must be >= 0");
  if (F.is_reversed_view() || F.family() == EntropyFamily::Tabulated) return std::nullopt;
  if (r == 0.0 && t == 0.0) return ExtendedValue::finite(0.0);
  // theta = r is optimal and free on the diagonal; skip the formulas so the
  // zero is exact
  if (r == t) return ExtendedValue::finite(0.0);

  switch (F.family()) {
    case EntropyFamily::Indicator: {
      const double a = F.params()[0], b = F.params()[1];
      const bool feasible =
          std::isinf(b) ? true : a * std::max(r, t) <= b * std::min(r, t);
      return feasible ? ExtendedValue::finite(0.0) : ExtendedValue::infinity();
    }
    case EntropyFamily::ChiAlpha: {
      const double al = F.params()[0];
      const double num = std::pow(std::fabs(r - t), al);
      return ExtendedValue::from_double(num / std::pow(r + t, al - 1.0));
    }
    case EntropyFamily::Matusita: {
      const double a = F.params()[0];
      const double gap = std::fabs(std::pow(r, a) - std::pow(t, a));
      return ExtendedValue::from_double(std::pow(2.0, 1.0 - 1.0 / a) *
                                        std::pow(gap, 1.0 / a));
    }
    case EntropyFamily::PowerLike: {
      const double p = F.params()[0];
      if (p == 0.0) return ExtendedValue::from_double(h_log(r, t));
      const double m1 = power_mean(1.0, r, t);
      const double mq = power_mean(1.0 - p, r, t);
      return ExtendedValue::from_double((2.0 / p) * (m1 - mq));
    }
    case EntropyFamily::PowerLog: {
      const double p = F.params()[0];
      if (p == 1.0) return ExtendedValue::from_double(h_log(r, t));
      if (r == 0.0 || t == 0.0) return ExtendedValue::infinity();
      const double inner = r * t * (std::pow(r, p - 1.0) + std::pow(t, p - 1.0)) / (r + t);
      const double v = (r + t) * std::log(inner) - p * (r * std::log(t) + t * std::log(r));
      return ExtendedValue::from_double(v);
    }
    case EntropyFamily::DoublePower: {
      if (r == 0.0 || t == 0.0) return std::nullopt;
      const double p = F.params()[0], q = F.params()[1];
      const double num = std::pow(std::pow(r, q - 1.0) + std::pow(t, q - 1.0), p);
      const double den = std::pow(std::pow(r, p - 1.0) + std::pow(t, p - 1.0), q);
      const double core = std::pow(num / den, 1.0 / (p - q));
      return ExtendedValue::from_double((q - p) * (r * t * core - (r + t)));
    }
    case EntropyFamily::TotalVariationScaled:
      return ExtendedValue::finite(F.params()[0] * std::fabs(r - t));
    case EntropyFamily::Tabulated:
      break;
  }
  return std::nullopt;
}

ExtendedValue h_oracle(const EntropyDescriptor& F, double r, double t) {
  if (std::isnan(r) || std::isnan(t) || r < 0.0 || t < 0.0)
    throw std::invalid_argument("h_oracle: masses must be >= 0");
  if (r == 0.0 && t == 0.0) return ExtendedValue::finite(0.0);
  if (r > 0.0 && t > 0.0) return ExtendedValue::from_double(interior_min(F, r, t));

  // Vanishing-mass envelope: slide both masses off the boundary and follow
  // the values down a geometric ladder until they settle.
  const bool can_diverge =
      F.at_zero().is_infinite() && F.recession_constant().is_infinite();
  double prev = kInf;
  double history[3] = {0.0, 0.0, 0.0};
  for (int k = 10; k <= 40; ++k) {
    const double eps = std::ldexp(1.0, -k);
    const double v = interior_min(F, r + eps, t + eps);
    if (std::isinf(v) && std::isinf(prev)) return ExtendedValue::infinity();
    if (std::isfinite(v) && std::isfinite(prev) &&
        std::fabs(v - prev) <= 1e-9 * (1.0 + std::fabs(v)))
      return ExtendedValue::from_double(v);
    if (can_diverge && std::isfinite(v) && v > 1e12 && v > prev)
      return ExtendedValue::infinity();
    history[0] = history[1];
    history[1] = history[2];
    history[2] = v;
    prev = v;
  }
  const double d1 = history[2] - history[1];
  const double d0 = history[1] - history[0];
  // increments that refuse to shrink mean the ladder climbs like log(1/eps)
  if (can_diverge && d1 > 1e-7 * (1.0 + std::fabs(history[2])) && d1 >= 0.5 * d0)
    return ExtendedValue::infinity();
  if (std::isfinite(d1) && std::isfinite(d0) && std::fabs(d1) < std::fabs(d0)) {
    const double extrapolated = history[2] - d1 * d1 / (d1 - d0);
    return ExtendedValue::from_double(std::max(0.0, extrapolated));
  }
  return ExtendedValue::from_double(history[2]);
}

std::vector<std::vector<ExtendedValue>> h_grid(const EntropyDescriptor& F,
                                               const std::vector<double>& points) {
  if (points.size() < 2)
    throw std::invalid_argument("h_grid: need at least 2 grid points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (std::isnan(points[i]) || std::isinf(points[i]) || points[i] < 0.0)
      throw std::invalid_argument("h_grid: points must be finite and >= 0");
    if (i > 0 && points[i] < points[i - 1])
      throw std::invalid_argument("h_grid: points must be sorted");
  }
  MarginalPerspective H(F);
  std::vector<std::vector<ExtendedValue>> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    out[i].reserve(points.size());
    for (double t : points) out[i].push_back(H(points[i], t));
  }
  return out;
}

MarginalPerspective::MarginalPerspective(EntropyDescriptor F)
    : entropy_(std::move(F)), closed_(h_closed(entropy_, 1.0, 2.0).has_value()) {}

ExtendedValue MarginalPerspective::operator()(double r, double t) const {
  if (closed_) {
    if (auto v = h_closed(entropy_, r, t)) return *v;
  }
  return h_oracle(entropy_, r, t);
}

}  // namespace divkit
