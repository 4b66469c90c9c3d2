#include <catch2/catch_amalgamated.hpp>

#include "plegma/rational.hpp"

using plegma::Rational;

TEST_CASE("rational normalization and accessors") {
  CHECK(Rational(6, 8) == Rational(3, 4));
  CHECK(Rational(-6, 8) == Rational(3, -4));
  CHECK(Rational(0, 5) == Rational(0));
  CHECK(Rational(3, 4).num() == 3);
  CHECK(Rational(3, 4).den() == 4);
  CHECK(Rational(3, -4).den() == 4);
  CHECK_THROWS_AS(Rational(1, 0), std::invalid_argument);
}

TEST_CASE("rational arithmetic") {
  Rational a(1, 6), b(1, 10);
  CHECK(a + b == Rational(4, 15));
  CHECK(a - b == Rational(1, 15));
  CHECK(a * b == Rational(1, 60));
  CHECK(a / b == Rational(5, 3));
  CHECK(-a == Rational(-1, 6));
  CHECK(abs(Rational(-7, 2)) == Rational(7, 2));
  CHECK_THROWS_AS(a / Rational(0), std::invalid_argument);
}

TEST_CASE("rational comparisons avoid overflow traps") {
  Rational big(3037000499LL, 3037000500LL);
  Rational bigger(3037000500LL, 3037000501LL);
  CHECK(big < bigger);
  CHECK(bigger > big);
  CHECK(big <= big);
}

TEST_CASE("rational floor and ceil") {
  CHECK(Rational(7, 2).floor() == 3);
  CHECK(Rational(7, 2).ceil() == 4);
  CHECK(Rational(-7, 2).floor() == -4);
  CHECK(Rational(-7, 2).ceil() == -3);
  CHECK(Rational(6, 2).floor() == 3);
  CHECK(Rational(6, 2).ceil() == 3);
}

TEST_CASE("rational parsing") {
  CHECK(Rational::parse("3/4") == Rational(3, 4));
  CHECK(Rational::parse("-3/4") == Rational(-3, 4));
  CHECK(Rational::parse("7") == Rational(7));
  CHECK(Rational::parse("0.8") == Rational(4, 5));
  CHECK(Rational::parse("-1.25") == Rational(-5, 4));
  CHECK(Rational::parse("0.125") == Rational(1, 8));
  CHECK_THROWS_AS(Rational::parse("abc"), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse(""), std::invalid_argument);
}

TEST_CASE("rational string form") {
  CHECK(Rational(3, 4).to_string() == "3/4");
  CHECK(Rational(5).to_string() == "5");
  CHECK(Rational(-1, 3).to_string() == "-1/3");
}

TEST_CASE("rational overflow is an error, not a wrap") {
  Rational huge((long long)4e18, 1);
  CHECK_THROWS_AS(huge * huge, std::overflow_error);
  CHECK_NOTHROW(huge + Rational(1));
}

TEST_CASE("rational to_double") {
  CHECK(Rational(1, 4).to_double() == 0.25);
  CHECK(Rational(1, 3).to_double() == Catch::Approx(1.0 / 3.0));
}
