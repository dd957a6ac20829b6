#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <optional>
#include <string>

namespace inbl {

using BigInt = boost::multiprecision::cpp_int;

/// Exact signal amplitude numerator / 2^scale.
///
/// Every signal of an N noise-bit system lives on the grid 2^-N, so two
/// samples of the same system share a scale and compare as plain integers.
/// Arithmetic between samples of different scales is rejected rather than
/// silently rescaled: it always means two unrelated systems were mixed.
class DyadicSample {
 public:
  DyadicSample() = default;
  DyadicSample(BigInt numerator, unsigned scale);

  /// Builds +-2^exponent on the grid of `scale` (requires -scale <= exponent).
  static DyadicSample power_of_two(int exponent, unsigned scale, bool negative = false);

  const BigInt& numerator() const noexcept { return numerator_; }
  unsigned scale() const noexcept { return scale_; }

  bool is_zero() const noexcept { return numerator_.is_zero(); }
  /// -1, 0 or +1.
  int sign() const noexcept { return numerator_.sign(); }
  DyadicSample abs() const;

  /// r such that |value| == 2^-r, if the magnitude is an exact power of two.
  std::optional<int> magnitude_exponent() const;

  /// Approximate value; for display only.
  double to_double() const;

  /// "numerator/2^scale"
  std::string to_string() const;

  DyadicSample operator-() const;
  DyadicSample& operator+=(const DyadicSample& other);
  DyadicSample& operator-=(const DyadicSample& other);

  friend DyadicSample operator+(DyadicSample a, const DyadicSample& b) { return a += b; }
  friend DyadicSample operator-(DyadicSample a, const DyadicSample& b) { return a -= b; }

  friend bool operator==(const DyadicSample& a, const DyadicSample& b) {
    return a.scale_ == b.scale_ && a.numerator_ == b.numerator_;
  }

 private:
  void require_same_scale(const DyadicSample& other) const;

  BigInt numerator_{0};
  unsigned scale_{0};
};

}  // namespace inbl
