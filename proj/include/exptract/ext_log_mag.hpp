#pragma once

#include <cmath>
#include <compare>
#include <limits>

#include "exptract/error.hpp"

namespace exptract {

// A number x in [0, 1] stored as T = log(1/x) >= 0. T = +inf encodes x = 0.
// Ordering is on T, so a larger ExtLogMag means a smaller x.
class ExtLogMag {
 public:
  constexpr ExtLogMag() = default;

  explicit ExtLogMag(double value) : value_(value) {
    if (!(value >= 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "log-magnitude must be >= 0 (got NaN or negative)");
    }
  }

  static constexpr ExtLogMag infinity() noexcept {
    ExtLogMag m;
    m.value_ = std::numeric_limits<double>::infinity();
    return m;
  }

  // x in [0, 1]; x = 0 maps to +inf.
  static ExtLogMag from_value(double x) {
    if (!(x >= 0.0 && x <= 1.0)) {
      throw Error(ErrorCode::InvalidArgument, "value must lie in [0, 1]");
    }
    return x == 0.0 ? infinity() : ExtLogMag(-std::log(x) + 0.0);
  }

  constexpr double value() const noexcept { return value_; }
  constexpr bool is_infinite() const noexcept { return value_ == std::numeric_limits<double>::infinity(); }

  // exp(-T); underflows to 0 for large T.
  double magnitude() const noexcept { return std::exp(-value_); }

  ExtLogMag half() const noexcept {
    ExtLogMag m;
    m.value_ = value_ / 2.0;
    return m;
  }

  friend ExtLogMag operator+(ExtLogMag a, ExtLogMag b) noexcept {
    ExtLogMag m;
    m.value_ = a.value_ + b.value_;
    return m;
  }
  ExtLogMag& operator+=(ExtLogMag other) noexcept {
    value_ += other.value_;
    return *this;
  }

  friend constexpr bool operator==(ExtLogMag a, ExtLogMag b) noexcept { return a.value_ == b.value_; }
  friend constexpr std::partial_ordering operator<=>(ExtLogMag a, ExtLogMag b) noexcept {
    return a.value_ <=> b.value_;
  }

 private:
  double value_ = 0.0;
};

}  // namespace exptract
