#pragma once

#include <compare>
#include <limits>
#include <string>

namespace dft {

/// Extended non-negative failure time: a finite t >= 0 or +infinity (NEVER).
class ExtTime {
 public:
  /// Throws std::invalid_argument unless 0 <= t < inf.
  static ExtTime Finite(double t);
  static constexpr ExtTime Infinity() {
    return ExtTime(std::numeric_limits<double>::infinity());
  }

  constexpr ExtTime() = default;

  constexpr bool is_finite() const {
    return value_ != std::numeric_limits<double>::infinity();
  }
  /// +inf for Infinity.
  constexpr double value() const { return value_; }

  friend constexpr bool operator==(ExtTime, ExtTime) = default;
  friend constexpr std::partial_ordering operator<=>(ExtTime a, ExtTime b) {
    return a.value_ <=> b.value_;
  }

 private:
  explicit constexpr ExtTime(double v) : value_(v) {}

  double value_ = 0.0;
};

constexpr ExtTime min(ExtTime a, ExtTime b) { return b < a ? b : a; }
constexpr ExtTime max(ExtTime a, ExtTime b) { return a < b ? b : a; }

std::string to_string(ExtTime t);

}  // namespace dft
