#include <random>

#include "doctest.h"
#include "kx/rational.hpp"

using kx::Rational;

TEST_CASE("construction normalizes sign and gcd") {
  CHECK(Rational(6, 4) == Rational(3, 2));
  CHECK(Rational(-6, 4) == Rational(-3, 2));
  CHECK(Rational(6, -4) == Rational(-3, 2));
  CHECK(Rational(0, 7) == Rational(0));
  CHECK_THROWS_AS(Rational(1, 0), kx::DomainError);
}

TEST_CASE("arithmetic and comparison are exact") {
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(1, 2) - Rational(1, 3) == Rational(1, 6));
  CHECK(Rational(2, 3) * Rational(9, 4) == Rational(3, 2));
  CHECK(Rational(1, 2) / Rational(1, 4) == Rational(2));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(-1, 2) < Rational(-1, 3));
  CHECK_THROWS_AS(Rational(1) / Rational(0), kx::DomainError);
}

TEST_CASE("floor and floor_div handle negatives") {
  CHECK(Rational(7, 2).floor() == 3);
  CHECK(Rational(-7, 2).floor() == -4);
  CHECK(Rational(6, 3).floor() == 2);
  CHECK(Rational(5, 2).floor_div(Rational(1, 4)) == 10);
  CHECK(Rational(1, 3).floor_div(Rational(1, 2)) == 0);
  CHECK_THROWS_AS(Rational(1).floor_div(Rational(0)), kx::ContractError);
}

TEST_CASE("parse accepts integers, fractions and decimals") {
  CHECK(Rational::parse("3") == Rational(3));
  CHECK(Rational::parse("3/4") == Rational(3, 4));
  CHECK(Rational::parse("0.25") == Rational(1, 4));
  CHECK(Rational::parse("-1.5") == Rational(-3, 2));
  CHECK_THROWS_AS(Rational::parse("x"), kx::DomainError);
  CHECK_THROWS_AS(Rational::parse("1/"), kx::DomainError);
}

TEST_CASE("decimal rendering") {
  CHECK(Rational(5, 2).decimal(6) == "2.500000");
  CHECK(Rational(1, 3).decimal(6) == "0.333333");
  CHECK(Rational(2, 3).decimal(6) == "0.666667");
  CHECK(Rational(-1, 8).decimal(3) == "-0.125");
}

TEST_CASE("overflow raises instead of wrapping") {
  Rational huge(INT64_MAX, 1);
  CHECK_THROWS_AS(huge * huge, kx::OverflowError);
  CHECK_THROWS_AS(huge + Rational(1), kx::OverflowError);
}

TEST_CASE("random field identities") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    Rational a(static_cast<long long>(rng() % 200) - 100,
               1 + static_cast<long long>(rng() % 20));
    Rational b(static_cast<long long>(rng() % 200) - 100,
               1 + static_cast<long long>(rng() % 20));
    CHECK((a + b) - b == a);
    CHECK(a + b == b + a);
    if (!b.is_zero()) CHECK((a / b) * b == a);
  }
}
