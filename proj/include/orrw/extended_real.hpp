#pragma once

#include <cmath>
#include <limits>
#include <ostream>

namespace orrw {

/// A value in [0, +inf] style arithmetic: either a finite double or +infinity.
/// Infinity is carried as a tag so it propagates through sums without relying
/// on IEEE overflow behaviour.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  constexpr ExtendedReal(double v) : value_(v) {}  // NOLINT(implicit)

  static constexpr ExtendedReal infinity() {
    ExtendedReal r;
    r.infinite_ = true;
    return r;
  }

  constexpr bool is_finite() const { return !infinite_; }
  constexpr bool is_infinite() const { return infinite_; }

  /// Finite value, or +inf as a double.
  constexpr double value() const {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }

  constexpr ExtendedReal& operator+=(const ExtendedReal& o) {
    if (o.infinite_) infinite_ = true;
    if (!infinite_) value_ += o.value_;
    return *this;
  }
  friend constexpr ExtendedReal operator+(ExtendedReal a, const ExtendedReal& b) { return a += b; }

  /// Scaling by a non-negative weight. 0 * inf = 0 (measure-theoretic convention).
  friend constexpr ExtendedReal operator*(double w, const ExtendedReal& a) {
    if (a.infinite_) return w == 0.0 ? ExtendedReal(0.0) : infinity();
    return ExtendedReal(w * a.value_);
  }

  friend constexpr bool operator<(const ExtendedReal& a, const ExtendedReal& b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.value_ < b.value_;
  }
  friend constexpr bool operator>(const ExtendedReal& a, const ExtendedReal& b) { return b < a; }
  friend constexpr bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }

  friend std::ostream& operator<<(std::ostream& os, const ExtendedReal& r) {
    if (r.infinite_) return os << "inf";
    return os << r.value_;
  }

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

/// x * log(x / y) with the conventions 0 log(0/y) = 0.
inline double xlogxy(double x, double y) {
  if (x <= 0.0) return 0.0;
  return x * std::log(x / y);
}

}  // namespace orrw
