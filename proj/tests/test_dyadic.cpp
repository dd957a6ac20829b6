#include "inbl/dyadic.hpp"
#include "inbl/errors.hpp"

#include <doctest.h>

using namespace inbl;

TEST_CASE("dyadic arithmetic is exact on a shared grid") {
  const DyadicSample a(3, 4);   // 3/16
  const DyadicSample b(-5, 4);  // -5/16
  CHECK((a + b) == DyadicSample(-2, 4));
  CHECK((a - b) == DyadicSample(8, 4));
  CHECK((-a) == DyadicSample(-3, 4));
  CHECK((a - a).is_zero());
  CHECK(b.abs() == DyadicSample(5, 4));
  CHECK(b.sign() == -1);
  CHECK(a.to_double() == 3.0 / 16.0);
  CHECK(a.to_string() == "3/2^4");
}

TEST_CASE("mixing grids is rejected") {
  CHECK_THROWS_AS(DyadicSample(1, 3) + DyadicSample(1, 4), ArgumentError);
  CHECK_FALSE(DyadicSample(2, 4) == DyadicSample(1, 3));
}

TEST_CASE("powers of two") {
  CHECK(DyadicSample::power_of_two(0, 8).numerator() == 256);
  CHECK(DyadicSample::power_of_two(-8, 8).numerator() == 1);
  CHECK(DyadicSample::power_of_two(-3, 8, true).magnitude_exponent() == 3);
  CHECK_THROWS_AS(DyadicSample::power_of_two(-9, 8), ArgumentError);
  CHECK_FALSE(DyadicSample(3, 4).magnitude_exponent().has_value());
  CHECK_FALSE(DyadicSample(0, 4).magnitude_exponent().has_value());
  CHECK(DyadicSample(BigInt(1) << 70, 64).magnitude_exponent() == -6);
}
