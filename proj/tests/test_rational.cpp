#include <doctest.h>

#include <cmath>
#include <limits>

#include "contact_spinor/coefficient.hpp"

using namespace contact_spinor;

TEST_CASE("rational normalization and arithmetic") {
  CHECK(Rational(2, -4) == Rational(-1, 2));
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(3, 4) * Rational(4, 3) == Rational(1));
  CHECK((Rational(1, 3) / Rational(-2)).str() == "-1/6");
  CHECK(Rational::parse("-7/21") == Rational(-1, 3));
  CHECK(Rational::parse("5") == Rational(5));
  CHECK(Rational(-1, 2) < Rational(1, 3));
  CHECK_THROWS(Rational(1, 0));
}

TEST_CASE("rational overflow throws instead of wrapping") {
  Rational big(std::numeric_limits<std::int64_t>::max());
  CHECK_THROWS_AS(big * Rational(2), std::overflow_error);
  CHECK_THROWS_AS(big + Rational(1), std::overflow_error);
}

TEST_CASE("sqrt3 field arithmetic") {
  Coefficient s = Coefficient::sqrt3();
  CHECK(s * s == Coefficient(3));
  Coefficient x(Rational(1), Rational(2));  // 1 + 2 sqrt3
  CHECK(x * x.inverse() == Coefficient(1));
  CHECK(std::abs(x.to_double() - (1 + 2 * std::sqrt(3.0))) < 1e-14);
  CHECK(Coefficient(Rational(2), Rational(-1)).is_negative() == false);  // 2 - sqrt3 > 0
  CHECK(Coefficient(Rational(1), Rational(-1)).is_negative());           // 1 - sqrt3 < 0
  CHECK(Coefficient(Rational(-2), Rational(1)).is_negative());
  CHECK(Coefficient(Rational(1, 2)).str() == "1/2");
  CHECK(s.str() == "sqrt3");
  CHECK(Coefficient(Rational(0), Rational(-2)).str() == "-2 sqrt3");
  CHECK(Coefficient(Rational(1), Rational(-1)).str() == "(1 - sqrt3)");
  CHECK_THROWS(Coefficient().inverse());
}
