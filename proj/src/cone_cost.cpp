#include "divkit/cone_cost.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>

#include "divkit/power_mean.hpp"

namespace divkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;

double unit_draw(std::mt19937_64& gen) {
  return (static_cast<double>(gen() >> 11) + 1.0) * 0x1p-53;
}

double xlogx(double x) { return x == 0.0 ? 0.0 : x * std::log(x); }

double golden_max(double lo, double hi, const std::function<double(double)>& g) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = g(x1), f2 = g(x2);
  for (int it = 0; it < 200 && (hi - lo) > 1e-13 * std::max(1.0, std::fabs(hi)); ++it) {
    if (f1 > f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = g(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = g(x2);
    }
  }
  return std::max(f1, f2);
}

double golden_min_fn(double lo, double hi, const std::function<double(double)>& g) {
  return -golden_max(lo, hi, [&](double x) { return -g(x); });
}

void validate_cost_args(const char* who, double c, double r1, double r2) {
  if (std::isnan(c) || c < 0.0)
    throw std::invalid_argument(std::string(who) + ": cost must be >= 0");
  if (std::isnan(r1) || std::isnan(r2) || std::isinf(r1) || std::isinf(r2) || r1 < 0.0 ||
      r2 < 0.0)
    throw std::invalid_argument(std::string(who) + ": masses must be finite and >= 0");
}

// Primal objective minimum for strictly positive masses and finite cost.
double primal_interior(const EntropyDescriptor& F, double c, double r1, double r2) {
  const auto g = [&](double theta) {
    if (theta == 0.0) {
      const double f0 = F.at_zero().as_double();
      return std::isinf(f0) ? kInf : f0 * (r1 + r2);
    }
    const double a = evaluate(F, theta / r1).as_double();
    const double b = evaluate(F, theta / r2).as_double();
    return std::isinf(a) || std::isinf(b) ? kInf : a * r1 + b * r2 + theta * c;
  };

  const double mx = std::max(r1, r2);
  std::vector<double> cand;
  cand.reserve(72);
  cand.push_back(0.0);
  for (int i = 0; i <= 63; ++i)
    cand.push_back(mx * std::pow(10.0, -14.0 + 14.0 * i / 63.0));
  cand.push_back(std::min(r1, r2));
  if (F.family() == EntropyFamily::Indicator) {
    const double a = F.params()[0], b = F.params()[1];
    for (double k : {a * r1, a * r2, b * r1, b * r2})
      if (k > 0.0 && k <= mx && std::isfinite(k)) cand.push_back(k);
  }
  std::sort(cand.begin(), cand.end());
  // near-coincident candidates would collapse the refinement bracket below
  cand.erase(std::unique(cand.begin(), cand.end(),
                         [](double a, double b) {
                           return b - a <= 1e-12 * std::max(1.0, std::fabs(b));
                         }),
             cand.end());

  std::size_t best = 0;
  double best_val = kInf;
  for (std::size_t i = 0; i < cand.size(); ++i) {
    const double v = g(cand[i]);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  if (std::isinf(best_val)) return kInf;
  const double lo = cand[best > 0 ? best - 1 : 0];
  const double hi = cand[std::min(best + 1, cand.size() - 1)];
  if (hi > lo) best_val = std::min(best_val, golden_min_fn(lo, hi, g));
  return best_val;
}

// Shared vanishing-mass envelope: walk the interior values down a geometric
// ladder in eps and wait for them to settle.
double boundary_envelope(const std::function<double(double)>& interior_at,
                         bool can_diverge) {
  double prev = kInf;
  double history[3] = {0.0, 0.0, 0.0};
  for (int k = 10; k <= 40; ++k) {
    const double v = interior_at(std::ldexp(1.0, -k));
    if (std::isinf(v) && std::isinf(prev)) return kInf;
    if (std::isfinite(v) && std::isfinite(prev) &&
        std::fabs(v - prev) <= 1e-9 * (1.0 + std::fabs(v)))
      return v;
    if (can_diverge && std::isfinite(v) && v > 1e12 && v > prev) return kInf;
    history[0] = history[1];
    history[1] = history[2];
    history[2] = v;
    prev = v;
  }
  const double d1 = history[2] - history[1];
  const double d0 = history[1] - history[0];
  // increments that refuse to shrink mean the ladder climbs like log(1/eps)
  if (can_diverge && d1 > 1e-7 * (1.0 + std::fabs(history[2])) && d1 >= 0.5 * d0)
    return kInf;
  if (std::isfinite(d1) && std::isfinite(d0) && std::fabs(d1) < std::fabs(d0)) {
    const double extrapolated = history[2] - d1 * d1 / (d1 - d0);
    return std::max(0.0, extrapolated);
  }
  return history[2];
}

}  // namespace

ExtendedValue h_cost_primal(const EntropyDescriptor& F, double c, double r1, double r2) {
  validate_cost_args("h_cost_primal", c, r1, r2);
  if (std::isinf(c)) return F.at_zero().scaled(r1 + r2);
  if (r1 == 0.0 && r2 == 0.0) return ExtendedValue::finite(0.0);
  if (r1 > 0.0 && r2 > 0.0)
    return ExtendedValue::from_double(primal_interior(F, c, r1, r2));
  const bool can_diverge =
      F.at_zero().is_infinite() && F.recession_constant().is_infinite();
  const double v = boundary_envelope(
      [&](double eps) { return primal_interior(F, c, r1 + eps, r2 + eps); },
      can_diverge);
  return ExtendedValue::from_double(v);
}

ExtendedValue h_cost_dual(const EntropyDescriptor& F, double c, double r1, double r2) {
  validate_cost_args("h_cost_dual", c, r1, r2);
  if (std::isinf(c)) return F.at_zero().scaled(r1 + r2);
  if (r1 == 0.0 && r2 == 0.0) return ExtendedValue::finite(0.0);

  const EntropyDescriptor R = reverse(F);
  const double R0 = R.at_zero().as_double();
  const double Rrec = R.recession_constant().as_double();
  const double Raff = R.asymptotic_affine();
  const double Rslope0 = R.slope_at_zero();

  const auto psi2_of = [&](double u) -> double {
    if (u >= Raff) return Rrec;
    if (u < -R0) return -kInf;
    if (u == -R0) return Rslope0;
    if (u == 0.0) return 0.0;
    return conjugate_inverse(R, u);
  };

  if (r1 == 0.0 || r2 == 0.0)
    return ExtendedValue::from_double(std::max(r1, r2) * psi2_of(c + R0));

  const auto rstar = [&](double psi) { return conjugate(R, psi); };
  const auto feasible = [&](double psi) {
    if (psi > Rrec) return false;
    const double rs = rstar(psi);
    if (std::isinf(rs)) return false;
    return std::isinf(R0) || rs <= c + R0;
  };
  const auto g = [&](double psi) -> double {
    if (!feasible(psi)) return -kInf;
    const double p2 = psi2_of(c - rstar(psi));
    return std::isinf(p2) ? -kInf : r1 * psi + r2 * p2;
  };

  // Upper end of the scan: the recession value when reachable, otherwise the
  // feasibility boundary or the point where the concave objective turns.
  double hi;
  if (!std::isinf(Rrec) && feasible(Rrec)) {
    hi = Rrec;
  } else if (!std::isinf(Rrec)) {
    double lo_f = 0.0, hi_f = Rrec;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo_f + hi_f);
      (feasible(mid) ? lo_f : hi_f) = mid;
    }
    hi = lo_f;
  } else {
    double t = 1.0;
    double prev = g(t);
    bool unbounded = false;
    while (true) {
      if (!feasible(t * 2.0)) {
        double lo_f = t, hi_f = t * 2.0;
        for (int it = 0; it < 200; ++it) {
          const double mid = 0.5 * (lo_f + hi_f);
          (feasible(mid) ? lo_f : hi_f) = mid;
        }
        t = lo_f;
        break;
      }
      const double gc = g(t * 2.0);
      if (!(gc > prev)) {
        t *= 2.0;
        break;
      }
      if (t >= 1e15) {
        unbounded = true;
        break;
      }
      t *= 2.0;
      prev = gc;
    }
    if (unbounded) return ExtendedValue::infinity();
    hi = t;
  }

  double lo = -1.0;
  {
    double prev = g(lo);
    while (std::fabs(lo) < 1e15) {
      const double gc = g(lo * 2.0);
      if (!(gc >= prev)) break;
      lo *= 2.0;
      prev = gc;
    }
    lo *= 2.0;
  }

  double best = -kInf;
  double best_x = 0.0;
  constexpr int kScan = 128;
  for (int i = 0; i <= kScan; ++i) {
    const double x = lo + (hi - lo) * i / kScan;
    const double v = g(x);
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  const double step = (hi - lo) / kScan;
  const double refined = golden_max(std::max(lo, best_x - step),
                                    std::min(hi, best_x + step), g);
  return ExtendedValue::from_double(std::max(best, refined));
}

ExtendedValue h_p_cone(double p, double d, double r, double t) {
  if (std::isnan(p) || std::isinf(p)) throw std::invalid_argument("h_p_cone: bad exponent");
  if (std::isnan(d) || d < 0.0) throw std::invalid_argument("h_p_cone: distance must be >= 0");
  if (std::isnan(r) || std::isnan(t) || r < 0.0 || t < 0.0)
    throw std::invalid_argument("h_p_cone: masses must be >= 0");

  if (p == 0.0) {
    if (r + t == 0.0) return ExtendedValue::finite(0.0);
    const double v = xlogx(r) + xlogx(t) - (r + t) * std::log((r + t) / (2.0 + d * d));
    return ExtendedValue::from_double(v);
  }
  if (p == 1.0) {
    const double v = r + t - 2.0 * std::sqrt(r * t) * std::exp(-d * d / 2.0);
    return ExtendedValue::from_double(v);
  }
  const double m1 = power_mean(1.0, r, t);
  const double mq = power_mean(1.0 - p, r, t);
  const double base = std::max(1.0 + (1.0 - p) * d * d / 2.0, 0.0);
  const double kernel = std::pow(base, p / (p - 1.0));
  return ExtendedValue::from_double((2.0 / p) * (m1 - mq * kernel));
}

double h_bar_p(double p, double dbar, double r, double t) {
  if (!(p >= 1.0)) throw std::invalid_argument("h_bar_p: exponent must be >= 1");
  if (std::isnan(dbar) || dbar < 0.0)
    throw std::invalid_argument("h_bar_p: angle must be >= 0");
  const double m1 = power_mean(1.0, r, t);
  const double mq = power_mean(1.0 - p, r, t);
  return m1 - mq * std::cos(std::min(dbar, kPi / 2.0));
}

double f_p_transform(double p, double d) {
  if (!(p >= 1.0)) throw std::invalid_argument("f_p_transform: exponent must be >= 1");
  if (std::isnan(d) || d < 0.0)
    throw std::invalid_argument("f_p_transform: distance must be >= 0");
  if (p == 1.0) return std::acos(std::exp(-d * d / 2.0));
  const double base = std::max(1.0 - (p - 1.0) * d * d / 2.0, 0.0);
  return std::acos(std::pow(base, p / (p - 1.0)));
}

double cone_metric(double d, double r1, double r2) {
  if (std::isnan(d) || d < 0.0 || r1 < 0.0 || r2 < 0.0)
    throw std::invalid_argument("cone_metric: inputs must be >= 0");
  const double sq =
      r1 * r1 + r2 * r2 - 2.0 * r1 * r2 * std::cos(std::min(d, kPi));
  return std::sqrt(std::max(sq, 0.0));
}

bool cone_equivalent(const ConePoint& a, const ConePoint& b) {
  if (a.radius == 0.0 && b.radius == 0.0) return true;
  return a.point_index == b.point_index && a.radius == b.radius;
}

// ---------------------------------------------------------------------------
// FiniteMetricSpace

FiniteMetricSpace::FiniteMetricSpace(std::vector<std::vector<double>> distances)
    : d_(std::move(distances)) {
  const std::size_t n = d_.size();
  if (n == 0) throw std::invalid_argument("metric space: need at least one point");
  for (const auto& row : d_)
    if (row.size() != n) throw std::invalid_argument("metric space: matrix must be square");
  for (std::size_t i = 0; i < n; ++i) {
    if (d_[i][i] != 0.0) throw std::invalid_argument("metric space: diagonal must be 0");
    for (std::size_t j = 0; j < n; ++j) {
      if (std::isnan(d_[i][j]) || std::isinf(d_[i][j]) || d_[i][j] < 0.0)
        throw std::invalid_argument("metric space: distances must be finite and >= 0");
      if (i != j && d_[i][j] == 0.0)
        throw std::invalid_argument("metric space: distinct points need positive distance");
      if (std::fabs(d_[i][j] - d_[j][i]) > 1e-12)
        throw std::invalid_argument("metric space: matrix must be symmetric");
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (d_[i][k] > d_[i][j] + d_[j][k] + 1e-12)
          throw std::invalid_argument("metric space: triangle inequality fails");
}

FiniteMetricSpace FiniteMetricSpace::single_point() {
  return FiniteMetricSpace(std::vector<std::vector<double>>{{0.0}});
}

FiniteMetricSpace FiniteMetricSpace::planar(
    const std::vector<std::pair<double, double>>& pts) {
  const std::size_t n = pts.size();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      d[i][j] = std::hypot(pts[i].first - pts[j].first, pts[i].second - pts[j].second);
  return FiniteMetricSpace(std::move(d));
}

FiniteMetricSpace FiniteMetricSpace::path(std::size_t n, double edge) {
  if (n == 0 || !(edge > 0.0))
    throw std::invalid_argument("metric space: path needs n >= 1, edge > 0");
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      d[i][j] = edge * (i > j ? i - j : j - i);
  return FiniteMetricSpace(std::move(d));
}

// ---------------------------------------------------------------------------
// Counterexamples and triangle audits

namespace {

double sqrt_cone_cost(double p, double d, double r, double t) {
  return std::sqrt(h_p_cone(p, d, r, t).as_double());
}

}  // namespace

ConeCounterexample counterexample_p_below_one(double p) {
  if (!(p < 1.0)) throw std::invalid_argument("counterexample_p_below_one: need p < 1");

  ConeCounterexample out;
  out.p = p;
  if (p > 0.5) {
    // Costless witness: masses (0, v, 1) at a single point.
    double best_v = 0.0, best_margin = -kInf;
    for (int i = 0; i < 400; ++i) {
      const double v = std::pow(10.0, -4.0 + (std::log10(0.5) + 4.0) * i / 399.0);
      const double margin = sqrt_cone_cost(p, 0.0, 0.0, 1.0) -
                            sqrt_cone_cost(p, 0.0, 0.0, v) -
                            sqrt_cone_cost(p, 0.0, v, 1.0);
      if (margin > best_margin) {
        best_margin = margin;
        best_v = v;
      }
    }
    if (!(best_margin > 0.0))
      throw std::runtime_error("counterexample_p_below_one: costless search failed");
    out.r = 0.0;
    out.s = best_v;
    out.t = 1.0;
    out.d12 = out.d23 = out.d13 = 0.0;
    out.lhs = sqrt_cone_cost(p, 0.0, 0.0, 1.0);
    out.rhs = sqrt_cone_cost(p, 0.0, 0.0, best_v) + sqrt_cone_cost(p, 0.0, best_v, 1.0);
    out.margin = best_margin;
    return out;
  }
  if (p >= 0.0) {
    // Two zero radii separated from a unit mass by a distance gap.
    out.r = 0.0;
    out.s = 0.0;
    out.t = 1.0;
    out.d12 = out.d13 = 1.0;
    out.d23 = 0.0;
    out.lhs = sqrt_cone_cost(p, out.d13, out.r, out.t);
    out.rhs = sqrt_cone_cost(p, out.d12, out.r, out.s) +
              sqrt_cone_cost(p, out.d23, out.s, out.t);
    out.margin = out.lhs - out.rhs;
    if (!(out.margin > 0.0))
      throw std::runtime_error("counterexample_p_below_one: zero-radius witness failed");
    return out;
  }
  // p < 0: widen the long legs until the kernel blowup wins.
  out.r = 0.1;
  out.s = 0.5;
  out.t = 1.0;
  out.d23 = 0.0;
  for (double D = 10.0; D <= 1e18; D *= 2.0) {
    const double lhs = sqrt_cone_cost(p, D, out.r, out.t);
    const double rhs = sqrt_cone_cost(p, D, out.r, out.s) +
                       sqrt_cone_cost(p, 0.0, out.s, out.t);
    if (lhs - rhs > 1e-9) {
      out.d12 = out.d13 = D;
      out.lhs = lhs;
      out.rhs = rhs;
      out.margin = lhs - rhs;
      return out;
    }
  }
  throw std::runtime_error("counterexample_p_below_one: distance search failed");
}

ConeTriangleReport check_cone_triangle(double p, const FiniteMetricSpace& X, int samples,
                                       std::uint64_t seed) {
  if (!(p >= 1.0)) throw std::invalid_argument("check_cone_triangle: need p >= 1");
  if (samples < 0) throw std::invalid_argument("check_cone_triangle: samples must be >= 0");

  ConeTriangleReport report;
  double worst = -kInf;

  const auto probe = [&](std::size_t i, std::size_t j, std::size_t k, double ri,
                         double rj, double rk) {
    const double lhs = sqrt_cone_cost(p, X.distance(i, k), ri, rk);
    const double rhs = sqrt_cone_cost(p, X.distance(i, j), ri, rj) +
                       sqrt_cone_cost(p, X.distance(j, k), rj, rk);
    ++report.tested;
    if (lhs - rhs > worst) {
      worst = lhs - rhs;
      report.witness_points = {i, j, k};
      report.witness_radii = {ri, rj, rk};
    }
  };

  std::mt19937_64 gen(seed);
  const std::size_t n = X.size();
  for (int it = 0; it < samples; ++it) {
    const std::size_t i = gen() % n, j = gen() % n, k = gen() % n;
    double rad[3];
    for (double& r : rad) {
      r = std::pow(10.0, -3.0 + 6.0 * unit_draw(gen));
      if (unit_draw(gen) < 0.1) r = 0.0;
    }
    probe(i, j, k, rad[0], rad[1], rad[2]);
    probe(j, k, i, rad[1], rad[2], rad[0]);
    probe(k, i, j, rad[2], rad[0], rad[1]);
  }

  const double corner[4] = {0.0, 1e-9, 1.0, 10.0};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (double ri : corner)
          for (double rj : corner)
            for (double rk : corner) probe(i, j, k, ri, rj, rk);

  report.worst_violation = std::isinf(worst) ? 0.0 : worst;
  report.passed = report.worst_violation <= 1e-9;
  return report;
}

double theta_p(double p, double r, double t) {
  if (std::isnan(p) || std::isinf(p)) throw std::invalid_argument("theta_p: bad exponent");
  if (!(r > 0.0) || !(t > 0.0))
    throw std::invalid_argument("theta_p: masses must be > 0");
  return power_mean(1.0 - p, r, t) / power_mean(0.0, r, t);
}

FinalInequalityReport final_inequality_check(double p, int u_points, int v_points) {
  if (!(p > 1.0)) throw std::invalid_argument("final_inequality_check: need p > 1");
  if (u_points < 4 || v_points < 4)
    throw std::invalid_argument("final_inequality_check: need >= 4 grid points per side");

  const auto lhs_at = [&](double u) {
    const double m0 = power_mean(0.0, u, 1.0);
    const double mm1 = power_mean(-1.0, u, 1.0);
    const double mq = power_mean(1.0 - p, u, 1.0);
    const double su = std::sqrt(u);
    return (1.0 + su) * (1.0 + su) * (m0 - mm1) / (m0 - mq);
  };
  const auto rhs_at = [&](double v) {
    const double m0 = power_mean(0.0, 1.0, v);
    const double mq = power_mean(1.0 - p, 1.0, v);
    return std::sqrt(v) * (1.0 + 4.0 * v) / (m0 - mq);
  };

  FinalInequalityReport report;
  report.predicted_sup = 4.0 / (p - 1.0);

  const int half = u_points / 2;
  double lhs_sup = -kInf;
  for (int i = 0; i < half; ++i) {
    const double e = -6.0 + (-0.02 + 6.0) * i / (half - 1);
    lhs_sup = std::max(lhs_sup, lhs_at(std::pow(10.0, e)));
    lhs_sup = std::max(lhs_sup, lhs_at(1.0 - std::pow(10.0, e)));
  }
  double rhs_min = kInf;
  for (int i = 0; i < v_points; ++i) {
    const double e = -6.0 + 12.0 * i / (v_points - 1);
    rhs_min = std::min(rhs_min, rhs_at(1.0 + std::pow(10.0, e)));
  }

  report.lhs_sup = lhs_sup;
  report.rhs_min = rhs_min;
  report.passed = lhs_sup <= rhs_min;
  return report;
}

}  // namespace divkit
