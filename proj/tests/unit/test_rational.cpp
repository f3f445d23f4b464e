#include <doctest.h>

#include "votekit/error.hpp"
#include "votekit/rational.hpp"

using namespace votekit;

TEST_CASE("rationals parse from integers, fractions and decimals") {
  CHECK(parse_rational("7") == Rational(7));
  CHECK(parse_rational("7/12") == Rational(7, 12));
  CHECK(parse_rational("0.65") == Rational(13, 20));
  CHECK(parse_rational(".5") == Rational(1, 2));
  CHECK(parse_rational("14/24") == Rational(7, 12));
}

TEST_CASE("malformed rationals are parse errors") {
  for (const char* bad : {"", "-1", "1/0", "1/", "a", "1.2.3", "3/4x", "1 / 2"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_rational(bad), ParseError);
  }
}

TEST_CASE("fraction rendering is reduced") {
  CHECK(to_fraction_string(Rational(14, 24)) == "7/12");
  CHECK(to_fraction_string(Rational(3)) == "3");
  CHECK(to_fraction_string(Rational(0)) == "0");
}

TEST_CASE("decimal rendering rounds half away from zero, exactly") {
  CHECK(to_decimal_string(Rational(1, 15)) == "0.0666667");
  CHECK(to_decimal_string(Rational(1, 60)) == "0.0166667");
  CHECK(to_decimal_string(Rational(2, 115)) == "0.0173913");
  CHECK(to_decimal_string(Rational(40, 667)) == "0.0599700");
  CHECK(to_decimal_string(Rational(1, 8), 2) == "0.13");
  CHECK(to_decimal_string(Rational(0)) == "0.0000000");
  CHECK(to_decimal_string(Rational(5, 2), 0) == "3");
}

TEST_CASE("factorial and checked conversion") {
  CHECK(factorial(0) == 1);
  CHECK(factorial(8) == 40320);
  CHECK(to_int64(BigInt(123)) == 123);
  BigInt huge = 1;
  huge <<= 70;
  CHECK_THROWS_AS(to_int64(huge), Error);
}
