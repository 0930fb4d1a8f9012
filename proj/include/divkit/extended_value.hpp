#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace divkit {

// Nonnegative extended real: a finite value >= 0 or +infinity.
//
// Entropy evaluations land here instead of in raw doubles because the
// library's conventions differ from IEEE in exactly one place: 0 * inf = 0
// (a vanishing mass never pays an infinite penalty). Everything else is the
// usual extended arithmetic, a + inf = inf, lambda * inf = inf for lambda > 0,
// min(a, inf) = a.
class ExtendedValue {
 public:
  ExtendedValue() : value_(0.0), infinite_(false) {}

  static ExtendedValue infinity() {
    ExtendedValue x;
    x.infinite_ = true;
    x.value_ = std::numeric_limits<double>::infinity();
    return x;
  }

  // Builds a finite value. Tiny negative inputs (rounding debris from
  // closed-form cancellations) are clamped to zero; anything more negative
  // indicates a bug upstream and is rejected.
  static ExtendedValue finite(double x) {
    if (std::isnan(x)) throw std::logic_error("ExtendedValue: NaN");
    if (std::isinf(x)) throw std::logic_error("ExtendedValue::finite on infinity");
    if (x < 0.0) {
      if (x < -kNegativeSlack) throw std::logic_error("ExtendedValue: negative value");
      x = 0.0;
    }
    ExtendedValue v;
    v.value_ = x;
    return v;
  }

  // Maps IEEE +inf to the infinite element and everything else through finite().
  static ExtendedValue from_double(double x) {
    if (std::isinf(x) && x > 0) return infinity();
    return finite(x);
  }

  bool is_infinite() const { return infinite_; }
  bool is_finite() const { return !infinite_; }

  double finite_value() const {
    if (infinite_) throw std::logic_error("ExtendedValue: finite_value of infinity");
    return value_;
  }

  // Plain double view; infinity maps to IEEE +inf.
  double as_double() const { return value_; }

  ExtendedValue operator+(const ExtendedValue& o) const {
    if (infinite_ || o.infinite_) return infinity();
    return from_double(value_ + o.value_);
  }
  ExtendedValue& operator+=(const ExtendedValue& o) { return *this = *this + o; }

  // Multiplication by a nonnegative scalar, with 0 * inf = 0.
  ExtendedValue scaled(double lambda) const {
    if (std::isnan(lambda) || lambda < 0.0)
      throw std::logic_error("ExtendedValue::scaled needs lambda >= 0");
    if (lambda == 0.0) return ExtendedValue();
    if (infinite_) return infinity();
    return from_double(value_ * lambda);
  }

  friend bool operator==(const ExtendedValue& a, const ExtendedValue& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }
  friend bool operator!=(const ExtendedValue& a, const ExtendedValue& b) { return !(a == b); }
  friend bool operator<(const ExtendedValue& a, const ExtendedValue& b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.value_ < b.value_;
  }
  friend bool operator<=(const ExtendedValue& a, const ExtendedValue& b) { return !(b < a); }
  friend bool operator>(const ExtendedValue& a, const ExtendedValue& b) { return b < a; }
  friend bool operator>=(const ExtendedValue& a, const ExtendedValue& b) { return !(a < b); }

  static ExtendedValue min(const ExtendedValue& a, const ExtendedValue& b) {
    return a <= b ? a : b;
  }

 private:
  static constexpr double kNegativeSlack = 1e-9;
  double value_;
  bool infinite_;
};

}  // namespace divkit
