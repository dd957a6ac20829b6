#include "inbl/dyadic.hpp"

#include "inbl/errors.hpp"

#include <cmath>
#include <utility>

namespace inbl {

DyadicSample::DyadicSample(BigInt numerator, unsigned scale)
    : numerator_(std::move(numerator)), scale_(scale) {}

DyadicSample DyadicSample::power_of_two(int exponent, unsigned scale, bool negative) {
  const int shift = static_cast<int>(scale) + exponent;
  if (shift < 0) {
    throw ArgumentError("2^" + std::to_string(exponent) + " is not on the 2^-" +
                        std::to_string(scale) + " grid");
  }
  BigInt n = 1;
  n <<= shift;
  if (negative) n = -n;
  return {std::move(n), scale};
}

DyadicSample DyadicSample::abs() const { return {boost::multiprecision::abs(numerator_), scale_}; }

std::optional<int> DyadicSample::magnitude_exponent() const {
  if (is_zero()) return std::nullopt;
  const BigInt mag = boost::multiprecision::abs(numerator_);
  const auto msb = boost::multiprecision::msb(mag);
  if (boost::multiprecision::lsb(mag) != msb) return std::nullopt;
  return static_cast<int>(scale_) - static_cast<int>(msb);
}

double DyadicSample::to_double() const {
  return std::ldexp(numerator_.convert_to<double>(), -static_cast<int>(scale_));
}

std::string DyadicSample::to_string() const {
  return numerator_.str() + "/2^" + std::to_string(scale_);
}

DyadicSample DyadicSample::operator-() const { return {-numerator_, scale_}; }

void DyadicSample::require_same_scale(const DyadicSample& other) const {
  if (scale_ != other.scale_) {
    throw ArgumentError("dyadic scale mismatch: 2^-" + std::to_string(scale_) + " vs 2^-" +
                        std::to_string(other.scale_));
  }
}

DyadicSample& DyadicSample::operator+=(const DyadicSample& other) {
  require_same_scale(other);
  numerator_ += other.numerator_;
  return *this;
}

DyadicSample& DyadicSample::operator-=(const DyadicSample& other) {
  require_same_scale(other);
  numerator_ -= other.numerator_;
  return *this;
}

}  // namespace inbl
