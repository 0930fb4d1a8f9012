#include "divkit/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace divkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool close(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

// Slope of the first (or last) adjacent pair of finite nodes; 0 when the
// table has a single finite node.
double edge_slope(const std::vector<double>& x, const std::vector<double>& v,
                  std::size_t i, std::size_t j) {
  if (i == j) return 0.0;
  return (v[j] - v[i]) / (x[j] - x[i]);
}

}  // namespace

// ---------------------------------------------------------------------------
// Family evaluators (raw IEEE doubles, +inf allowed)

double EntropyDescriptor::eval_base(double s) const {
  switch (family_) {
    case EntropyFamily::Indicator: {
      const double a = params_[0], b = params_[1];
      return (s >= a && s <= b) ? 0.0 : kInf;
    }
    case EntropyFamily::ChiAlpha:
      return std::pow(std::fabs(s - 1.0), params_[0]);
    case EntropyFamily::Matusita: {
      const double a = params_[0];
      return std::pow(std::fabs(std::pow(s, a) - 1.0), 1.0 / a);
    }
    case EntropyFamily::PowerLike: {
      const double p = params_[0];
      if (p == 1.0) return s == 0.0 ? 1.0 : s * std::log(s) - s + 1.0;
      if (p == 0.0) return s == 0.0 ? kInf : s - 1.0 - std::log(s);
      if (s == 0.0) return p > 0.0 ? 1.0 / p : kInf;
      return (std::pow(s, p) - p * (s - 1.0) - 1.0) / (p * (p - 1.0));
    }
    case EntropyFamily::PowerLog: {
      const double p = params_[0];
      if (s == 0.0) return kInf;
      return std::pow(s, p) - p * std::log(s) - 1.0;
    }
    case EntropyFamily::DoublePower: {
      const double p = params_[0], q = params_[1];
      if (s == 0.0) return p < 0.0 ? kInf : p - q;
      return q * std::pow(s, p) - p * std::pow(s, q) + p - q;
    }
    case EntropyFamily::TotalVariationScaled:
      return params_[0] * std::fabs(s - 1.0);
    case EntropyFamily::Tabulated: {
      const auto& xs = tab_->s;
      const auto& vs = tab_->v;
      const std::size_t n = xs.size();
      if (s <= xs.front()) {
        if (s == xs.front()) return vs.front();
        if (std::isinf(vs.front())) return kInf;
        // Below the table: linear continuation of the first finite segment,
        // clamped at zero.
        std::size_t k = 1;
        while (k < n && std::isinf(vs[k])) ++k;
        const double m = k < n ? edge_slope(xs, vs, 0, 1) : 0.0;
        return std::max(vs.front() + m * (s - xs.front()), 0.0);
      }
      if (s >= xs.back()) {
        if (s == xs.back()) return vs.back();
        if (std::isinf(vs.back())) return kInf;
        const double m = edge_slope(xs, vs, n - 2, n - 1);
        if (std::isinf(vs[n - 2])) return vs.back();
        return std::max(vs.back() + m * (s - xs.back()), 0.0);
      }
      const auto it = std::upper_bound(xs.begin(), xs.end(), s);
      const std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
      if (s == xs[i]) return vs[i];
      if (std::isinf(vs[i]) || std::isinf(vs[i + 1])) return kInf;
      const double w = (s - xs[i]) / (xs[i + 1] - xs[i]);
      return vs[i] + w * (vs[i + 1] - vs[i]);
    }
  }
  return kInf;
}

double EntropyDescriptor::eval_raw(double s) const {
  if (!reversed_) return eval_base(s);
  if (s == 0.0) return f0_;  // transferred value, base F'_inf
  const double base = eval_base(1.0 / s);
  return std::isinf(base) ? kInf : base * s;
}

ExtendedValue EntropyDescriptor::at_zero() const { return ExtendedValue::from_double(f0_); }

ExtendedValue EntropyDescriptor::recession_constant() const {
  return ExtendedValue::from_double(fpinf_);
}

// ---------------------------------------------------------------------------
// Construction

EntropyDescriptor EntropyDescriptor::indicator(double a, double b) {
  if (std::isnan(a) || std::isnan(b) || a < 0.0 || a > 1.0 || b < 1.0)
    throw std::invalid_argument("indicator entropy needs 0 <= a <= 1 <= b");
  EntropyDescriptor F;
  F.family_ = EntropyFamily::Indicator;
  F.params_ = {a, b};
  F.f0_ = a == 0.0 ? 0.0 : kInf;
  F.fp0_ = a == 0.0 ? 0.0 : -kInf;
  F.fpinf_ = std::isinf(b) ? 0.0 : kInf;
  F.aff_ = std::isinf(b) ? 0.0 : kInf;
  return F;
}

EntropyDescriptor EntropyDescriptor::chi_alpha(double alpha) {
  if (!(alpha >= 1.0) || std::isinf(alpha))
    throw std::invalid_argument("chi_alpha entropy needs finite alpha >= 1");
  EntropyDescriptor F;
  F.family_ = EntropyFamily::ChiAlpha;
  F.params_ = {alpha};
  F.f0_ = 1.0;
  F.fp0_ = -alpha;
  F.fpinf_ = alpha == 1.0 ? 1.0 : kInf;
  F.aff_ = alpha == 1.0 ? 1.0 : kInf;
  return F;
}

EntropyDescriptor EntropyDescriptor::matusita(double a) {
  if (!(a > 0.0 && a <= 1.0))
    throw std::invalid_argument("matusita entropy needs 0 < a <= 1");
  EntropyDescriptor F;
  F.family_ = EntropyFamily::Matusita;
  F.params_ = {a};
  F.f0_ = 1.0;
  F.fp0_ = a == 1.0 ? -1.0 : -kInf;
  F.fpinf_ = 1.0;
  F.aff_ = a == 1.0 ? 1.0 : kInf;
  return F;
}

EntropyDescriptor EntropyDescriptor::power_like(double p) {
  if (std::isnan(p) || std::isinf(p))
    throw std::invalid_argument("power_like entropy needs finite p");
  EntropyDescriptor F;
  F.family_ = EntropyFamily::PowerLike;
  F.params_ = {p};
  F.f0_ = p > 0.0 ? 1.0 / p : kInf;
  F.fp0_ = p > 1.0 ? -1.0 / (p - 1.0) : -kInf;
  F.fpinf_ = p >= 1.0 ? kInf : 1.0 / (1.0 - p);
  F.aff_ = p < 0.0 ? -1.0 / p : kInf;
  return F;
}

EntropyDescriptor EntropyDescriptor::power_log(double p) {
  if (!(p >= 1.0) || std::isinf(p))
    throw std::invalid_argument("power_log entropy needs finite p >= 1");
  EntropyDescriptor F;
  F.family_ = EntropyFamily::PowerLog;
  F.params_ = {p};
  F.f0_ = kInf;
  F.fp0_ = -kInf;
  F.fpinf_ = p > 1.0 ? kInf : 1.0;
  F.aff_ = kInf;
  return F;
}

EntropyDescriptor EntropyDescriptor::double_power(double p, double q) {
  const bool high = p >= 1.0 && q > 0.0 && q <= 1.0 && p != q;
  const bool low = p < 0.0 && q >= 1.0;
  if (std::isnan(p) || std::isnan(q) || std::isinf(p) || std::isinf(q) || (!high && !low))
    throw std::invalid_argument(
        "double_power entropy needs (p >= 1, 0 < q <= 1, p != q) or (p < 0, q >= 1)");
  EntropyDescriptor F;
  F.family_ = EntropyFamily::DoublePower;
  F.params_ = {p, q};
  F.f0_ = p < 0.0 ? kInf : p - q;
  F.fp0_ = p < 0.0 ? -kInf : (q == 1.0 ? -p : -kInf);
  F.fpinf_ = p == 1.0 ? q : (q == 1.0 && p < 0.0 ? -p : kInf);
  F.aff_ = (q == 1.0 && p < 0.0) ? 1.0 - p : kInf;
  return F;
}

EntropyDescriptor EntropyDescriptor::total_variation_scaled(double c) {
  if (!(c > 0.0) || std::isinf(c))
    throw std::invalid_argument("total_variation_scaled entropy needs finite c > 0");
  EntropyDescriptor F;
  F.family_ = EntropyFamily::TotalVariationScaled;
  F.params_ = {c};
  F.f0_ = c;
  F.fp0_ = -c;
  F.fpinf_ = c;
  F.aff_ = c;
  return F;
}

EntropyDescriptor EntropyDescriptor::tabulated(std::vector<double> s,
                                               std::vector<ExtendedValue> values) {
  if (s.size() != values.size() || s.size() < 2)
    throw std::invalid_argument("tabulated entropy needs >= 2 matching nodes");
  const std::size_t n = s.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isnan(s[i]) || std::isinf(s[i]) || s[i] < 0.0)
      throw std::invalid_argument("tabulated entropy: abscissae must be finite and >= 0");
    if (i > 0 && s[i] <= s[i - 1])
      throw std::invalid_argument("tabulated entropy: abscissae must be strictly increasing");
  }

  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = values[i].as_double();

  // The node at s = 1 must carry value 0 exactly.
  std::size_t one = n;
  for (std::size_t i = 0; i < n; ++i)
    if (close(s[i], 1.0, 1e-12)) one = i;
  if (one == n || std::isinf(v[one]) || v[one] > 1e-12)
    throw std::invalid_argument("tabulated entropy: needs a node s = 1 with value 0");
  s[one] = 1.0;
  v[one] = 0.0;

  // Infinite values may only form a prefix and/or suffix block.
  std::size_t k0 = 0;
  while (k0 < n && std::isinf(v[k0])) ++k0;
  std::size_t k1 = n - 1;
  while (k1 > k0 && std::isinf(v[k1])) --k1;
  for (std::size_t i = k0; i <= k1; ++i)
    if (std::isinf(v[i]))
      throw std::invalid_argument("tabulated entropy: infinite values must be edge blocks");

  for (std::size_t i = k0; i + 2 <= k1; ++i) {
    const double m1 = (v[i + 1] - v[i]) / (s[i + 1] - s[i]);
    const double m2 = (v[i + 2] - v[i + 1]) / (s[i + 2] - s[i + 1]);
    const double scale = std::max({1.0, std::fabs(v[i]), std::fabs(v[i + 2])});
    if (m1 > m2 + 1e-10 * scale)
      throw std::invalid_argument("tabulated entropy: values are not convex");
  }

  EntropyDescriptor F;
  F.family_ = EntropyFamily::Tabulated;
  auto data = std::make_shared<TabulatedData>();
  data->s = std::move(s);
  data->v = std::move(v);
  F.tab_ = data;

  const auto& xs = data->s;
  const auto& vv = data->v;
  const double m_left = edge_slope(xs, vv, k0, std::min(k0 + 1, k1));
  const double m_right = edge_slope(xs, vv, k1 == 0 ? 0 : std::max(k1 - 1, k0), k1);

  if (k0 > 0) {
    F.f0_ = kInf;
    F.fp0_ = -kInf;
  } else if (xs[0] == 0.0) {
    F.f0_ = vv[0];
    F.fp0_ = std::isinf(vv[0]) ? -kInf : m_left;
  } else {
    const double at0 = vv[0] - m_left * xs[0];
    F.f0_ = std::max(at0, 0.0);
    F.fp0_ = at0 >= 0.0 ? m_left : 0.0;
  }

  if (k1 + 1 < n) {
    F.fpinf_ = kInf;
    F.aff_ = kInf;
  } else if (m_right >= 0.0) {
    F.fpinf_ = m_right;
    F.aff_ = m_right * xs[k1] - vv[k1];
  } else {
    // Decreasing data ending at s = 1: the clamped continuation is
    // identically zero to the right.
    F.fpinf_ = 0.0;
    F.aff_ = 0.0;
  }
  return F;
}

// ---------------------------------------------------------------------------
// DiscreteMeasure

DiscreteMeasure::DiscreteMeasure(std::string space, std::vector<Atom> measure_atoms)
    : space_id_(std::move(space)), atoms_(std::move(measure_atoms)) {
  std::vector<int> idx;
  idx.reserve(atoms_.size());
  for (const auto& a : atoms_) {
    if (std::isnan(a.mass) || std::isinf(a.mass) || a.mass < 0.0)
      throw std::invalid_argument("DiscreteMeasure: masses must be finite and >= 0");
    idx.push_back(a.index);
  }
  std::sort(idx.begin(), idx.end());
  if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
    throw std::invalid_argument("DiscreteMeasure: point indices must be unique");
}

double DiscreteMeasure::total_mass() const {
  double m = 0.0;
  for (const auto& a : atoms_) m += a.mass;
  return m;
}

// ---------------------------------------------------------------------------
// Basic operations

ExtendedValue evaluate(const EntropyDescriptor& F, double s) {
  if (std::isnan(s) || s < 0.0)
    throw std::invalid_argument("evaluate: s must be >= 0");
  return ExtendedValue::from_double(F.eval_raw(s));
}

ExtendedValue recession(const EntropyDescriptor& F, double r) {
  if (std::isnan(r) || r < 0.0)
    throw std::invalid_argument("recession: r must be >= 0");
  return F.recession_constant().scaled(r);
}

ExtendedValue perspective(const EntropyDescriptor& F, double r, double t) {
  if (std::isnan(r) || std::isnan(t) || r < 0.0 || t < 0.0)
    throw std::invalid_argument("perspective: arguments must be >= 0");
  if (t == 0.0) return recession(F, r);
  return evaluate(F, r / t).scaled(t);
}

EntropyDescriptor reverse(const EntropyDescriptor& F) {
  if (F.reversed_) {
    EntropyDescriptor base = F;
    base.reversed_ = false;
    // Restore the base coefficients by applying the transfer once more.
    base.f0_ = F.fpinf_;
    base.fpinf_ = F.f0_;
    base.fp0_ = std::isinf(F.aff_) ? -kInf : -F.aff_;
    base.aff_ = std::isinf(F.fp0_) ? kInf : -F.fp0_;
    return base;
  }
  switch (F.family_) {
    case EntropyFamily::PowerLike:
      return EntropyDescriptor::power_like(1.0 - F.params_[0]);
    case EntropyFamily::Indicator: {
      const double a = F.params_[0], b = F.params_[1];
      return EntropyDescriptor::indicator(std::isinf(b) ? 0.0 : 1.0 / b,
                                          a == 0.0 ? kInf : 1.0 / a);
    }
    case EntropyFamily::Matusita:
    case EntropyFamily::TotalVariationScaled:
      return F;
    case EntropyFamily::ChiAlpha:
      if (F.params_[0] == 1.0) return F;
      break;
    default:
      break;
  }
  EntropyDescriptor R = F;
  R.reversed_ = true;
  R.f0_ = F.fpinf_;
  R.fpinf_ = F.f0_;
  R.fp0_ = std::isinf(F.aff_) ? -kInf : -F.aff_;
  R.aff_ = std::isinf(F.fp0_) ? kInf : -F.fp0_;
  return R;
}

// ---------------------------------------------------------------------------
// Conjugate

namespace {

// Maximizes the concave map s -> s*phi - F(s) over s >= 0 by a coarse scan
// followed by golden-section refinement. Only called with phi strictly
// between the slope bounds, so the supremum is attained.
double conjugate_numeric(const EntropyDescriptor& F, double phi, double value_at_zero,
                         double (EntropyDescriptor::*eval)(double) const) {
  const auto g = [&](double x) {
    const double f = (F.*eval)(x);
    return std::isinf(f) ? -kInf : x * phi - f;
  };

  // g(1) = phi is always finite; expand upward while the objective rises.
  double hi = 1.0;
  double ghi = g(hi);
  while (hi < 1e80) {
    const double cand = hi * 2.0;
    const double gc = g(cand);
    if (!(gc > ghi)) break;
    hi = cand;
    ghi = gc;
  }
  hi *= 2.0;

  // Coarse unimodal scan: s = 0 plus log-spaced candidates up to hi.
  constexpr int kScan = 96;
  std::vector<double> cand(kScan + 1);
  std::vector<double> val(kScan + 1);
  cand[0] = 0.0;
  val[0] = value_at_zero;
  const double lo_exp = std::log(hi) - 40.0 * std::log(10.0);
  for (int i = 1; i <= kScan; ++i) {
    const double e = lo_exp + (std::log(hi) - lo_exp) * (i - 1) / double(kScan - 1);
    cand[i] = std::exp(e);
    val[i] = g(cand[i]);
  }
  int best = 0;
  for (int i = 1; i <= kScan; ++i)
    if (val[i] > val[best]) best = i;

  double a = cand[best > 0 ? best - 1 : 0];
  double b = cand[std::min(best + 1, kScan)];
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = g(x1), f2 = g(x2);
  for (int it = 0; it < 200 && (b - a) > 1e-12 * std::max(1.0, b); ++it) {
    if (f1 > f2) {
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
  return std::max({val[best], f1, f2});
}

double conjugate_power_like(double p, double phi) {
  if (p == 1.0) return std::expm1(phi);
  if (p == 0.0) return -std::log1p(-phi);  // phi < 1 here
  const double base = 1.0 + (p - 1.0) * phi;
  if (base <= 0.0) return -1.0 / p;  // only reachable for p > 1
  return (std::pow(base, p / (p - 1.0)) - 1.0) / p;
}

double conjugate_chi_alpha(double alpha, double phi) {
  if (alpha == 1.0) return phi;  // caps handled by the caller
  if (phi <= -alpha) return -1.0;
  const double u = std::pow(std::fabs(phi) / alpha, 1.0 / (alpha - 1.0));
  return phi + u * std::fabs(phi) * (1.0 - 1.0 / alpha);
}

}  // namespace

double conjugate(const EntropyDescriptor& F, double phi) {
  if (std::isnan(phi)) throw std::invalid_argument("conjugate: NaN argument");

  if (!std::isinf(F.fpinf_)) {
    if (phi > F.fpinf_) return kInf;
    if (phi == F.fpinf_) return F.aff_;
  }
  if (!std::isinf(F.fp0_) && phi <= F.fp0_) return -F.f0_;

  if (!F.reversed_) {
    switch (F.family_) {
      case EntropyFamily::PowerLike:
        return conjugate_power_like(F.params_[0], phi);
      case EntropyFamily::ChiAlpha:
        return conjugate_chi_alpha(F.params_[0], phi);
      case EntropyFamily::TotalVariationScaled:
        return phi;  // interior of [-c, c]
      case EntropyFamily::Indicator:
        return phi > 0.0 ? F.params_[1] * phi : F.params_[0] * phi;
      case EntropyFamily::Matusita:
        if (F.params_[0] == 1.0) return phi;
        break;
      default:
        break;
    }
  }
  return conjugate_numeric(F, phi, -F.f0_, &EntropyDescriptor::eval_raw);
}

double conjugate_inverse(const EntropyDescriptor& F, double y) {
  if (std::isnan(y)) throw std::invalid_argument("conjugate_inverse: NaN argument");
  if (y == 0.0) return 0.0;
  if (!std::isinf(F.f0_) && y <= -F.f0_)
    throw std::domain_error("conjugate_inverse: y below -F(0)");
  if (!std::isinf(F.aff_) && y >= F.aff_)
    throw std::domain_error("conjugate_inverse: y above aff F_inf");

  if (!F.reversed_) {
    switch (F.family_) {
      case EntropyFamily::PowerLike: {
        const double p = F.params_[0];
        if (p == 1.0) return std::log1p(y);
        if (p == 0.0) return 1.0 - std::exp(-y);
        return (std::pow(1.0 + p * y, (p - 1.0) / p) - 1.0) / (p - 1.0);
      }
      case EntropyFamily::TotalVariationScaled:
        return y;
      case EntropyFamily::ChiAlpha:
        if (F.params_[0] == 1.0) return y;
        break;
      case EntropyFamily::Matusita:
        if (F.params_[0] == 1.0) return y;
        break;
      case EntropyFamily::Indicator:
        return y > 0.0 ? y / F.params_[1] : y / F.params_[0];
      default:
        break;
    }
  }

  // Bracket the monotone conjugate, then bisect.
  double lo, hi;
  if (y > 0.0) {
    lo = 0.0;
    if (std::isinf(F.fpinf_)) {
      hi = 1.0;
      while (conjugate(F, hi) < y) hi *= 2.0;
    } else {
      double step = 0.5;
      hi = F.fpinf_ - std::max(std::fabs(F.fpinf_), 1.0) * step;
      while (conjugate(F, hi) < y) {
        step *= 0.5;
        hi = F.fpinf_ - std::max(std::fabs(F.fpinf_), 1.0) * step;
      }
    }
  } else {
    hi = 0.0;
    if (std::isinf(F.fp0_)) {
      lo = -1.0;
      while (conjugate(F, lo) > y) lo *= 2.0;
    } else {
      double step = 0.5;
      lo = F.fp0_ + std::max(std::fabs(F.fp0_), 1.0) * step;
      while (conjugate(F, lo) > y) {
        step *= 0.5;
        lo = F.fp0_ + std::max(std::fabs(F.fp0_), 1.0) * step;
      }
    }
  }
  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    const double c = conjugate(F, mid);
    if (std::fabs(c - y) <= 1e-11 * (1.0 + std::fabs(y))) return mid;
    (c < y ? lo : hi) = mid;
    if (hi - lo <= 1e-15 * std::max(1.0, std::fabs(mid))) break;
  }
  return mid;
}

// ---------------------------------------------------------------------------
// Derivative

double derivative(const EntropyDescriptor& F, double s) {
  if (std::isnan(s) || s < 0.0)
    throw std::invalid_argument("derivative: s must be >= 0");
  if (s == 0.0) return F.fp0_;

  if (F.reversed_) {
    // d/ds [ F(1/s) * s ] = F(u) - u F'(u) with u = 1/s.
    const double u = 1.0 / s;
    const double fu = F.eval_base(u);
    if (std::isinf(fu)) return s > 1.0 ? kInf : -kInf;
    EntropyDescriptor base = reverse(F);
    return fu - u * derivative(base, u);
  }

  switch (F.family_) {
    case EntropyFamily::Indicator: {
      const double a = F.params_[0], b = F.params_[1];
      if (s < a) return -kInf;
      if (s >= b && !std::isinf(b)) return kInf;
      return 0.0;
    }
    case EntropyFamily::ChiAlpha: {
      const double al = F.params_[0];
      if (s >= 1.0) return al * std::pow(s - 1.0, al - 1.0);
      return -al * std::pow(1.0 - s, al - 1.0);
    }
    case EntropyFamily::Matusita: {
      const double a = F.params_[0];
      if (s == 1.0) return a == 1.0 ? 1.0 : 0.0;
      if (s > 1.0) return std::pow(std::pow(s, a) - 1.0, 1.0 / a - 1.0) * std::pow(s, a - 1.0);
      return -std::pow(1.0 - std::pow(s, a), 1.0 / a - 1.0) * std::pow(s, a - 1.0);
    }
    case EntropyFamily::PowerLike: {
      const double p = F.params_[0];
      if (p == 1.0) return std::log(s);
      if (p == 0.0) return 1.0 - 1.0 / s;
      return (std::pow(s, p - 1.0) - 1.0) / (p - 1.0);
    }
    case EntropyFamily::PowerLog: {
      const double p = F.params_[0];
      return p * std::pow(s, p - 1.0) - p / s;
    }
    case EntropyFamily::DoublePower: {
      const double p = F.params_[0], q = F.params_[1];
      return p * q * (std::pow(s, p - 1.0) - std::pow(s, q - 1.0));
    }
    case EntropyFamily::TotalVariationScaled:
      return s >= 1.0 ? F.params_[0] : -F.params_[0];
    case EntropyFamily::Tabulated: {
      const auto& xs = F.tab_->s;
      const auto& vs = F.tab_->v;
      const std::size_t n = xs.size();
      std::size_t k0 = 0;
      while (k0 < n && std::isinf(vs[k0])) ++k0;
      std::size_t k1 = n - 1;
      while (k1 > k0 && std::isinf(vs[k1])) --k1;
      const double m_left = edge_slope(xs, vs, k0, std::min(k0 + 1, k1));
      const double m_right = edge_slope(xs, vs, k1 == k0 ? k0 : k1 - 1, k1);
      if (s < xs[k0]) {
        if (k0 > 0) return -kInf;  // inside the infinite block
        const double at0 = vs[0] - m_left * xs[0];
        if (at0 >= 0.0) return m_left;
        const double crossing = xs[0] - vs[0] / m_left;
        return s >= crossing ? m_left : 0.0;
      }
      if (s >= xs[k1]) {
        if (k1 + 1 < n) return kInf;  // the infinite block starts here
        return m_right >= 0.0 ? m_right : 0.0;
      }
      const auto it = std::upper_bound(xs.begin(), xs.end(), s);
      const std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
      return (vs[i + 1] - vs[i]) / (xs[i + 1] - xs[i]);
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// F-divergence

ExtendedValue f_divergence(const EntropyDescriptor& F, const DiscreteMeasure& mu1,
                           const DiscreteMeasure& mu2) {
  if (mu1.space_id() != mu2.space_id())
    throw std::invalid_argument("f_divergence: measures live on different spaces");
  std::map<int, std::pair<double, double>> joint;
  for (const auto& a : mu1.atoms()) joint[a.index].first = a.mass;
  for (const auto& a : mu2.atoms()) joint[a.index].second = a.mass;
  ExtendedValue total;
  for (const auto& [idx, rt] : joint) {
    (void)idx;
    total += perspective(F, rt.first, rt.second);
  }
  return total;
}

}  // namespace divkit
