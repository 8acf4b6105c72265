#pragma once

#include <cmath>
#include <limits>
#include <ostream>

#include "mrisk/errors.hpp"

namespace mrisk {

/// A real number or +infinity. The infinite state is an explicit flag, so an
/// overflowing computation never masquerades as a legitimate +inf value.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  constexpr ExtendedReal(double v) : value_(v) {}  // NOLINT: implicit by intent

  static constexpr ExtendedReal infinity() {
    ExtendedReal r;
    r.infinite_ = true;
    return r;
  }

  constexpr bool is_finite() const { return !infinite_; }
  constexpr bool is_infinite() const { return infinite_; }

  double value() const {
    if (infinite_) throw DomainError("ExtendedReal: value() on +infinity");
    return value_;
  }

  /// +inf maps to the IEEE infinity; only for display and ordering.
  constexpr double as_double() const {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }

  friend constexpr bool operator==(ExtendedReal a, ExtendedReal b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }
  friend constexpr bool operator<(ExtendedReal a, ExtendedReal b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.value_ < b.value_;
  }
  friend constexpr bool operator<=(ExtendedReal a, ExtendedReal b) { return !(b < a); }
  friend constexpr bool operator>(ExtendedReal a, ExtendedReal b) { return b < a; }
  friend constexpr bool operator>=(ExtendedReal a, ExtendedReal b) { return !(a < b); }

  friend constexpr ExtendedReal operator+(ExtendedReal a, ExtendedReal b) {
    if (a.infinite_ || b.infinite_) return infinity();
    return a.value_ + b.value_;
  }
  friend constexpr ExtendedReal operator-(ExtendedReal a, double b) {
    if (a.infinite_) return infinity();
    return a.value_ - b;
  }

  friend std::ostream& operator<<(std::ostream& os, ExtendedReal x) {
    if (x.infinite_) return os << "+inf";
    return os << x.value_;
  }

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

}  // namespace mrisk
