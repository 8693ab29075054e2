#include <catch2/catch_amalgamated.hpp>

#include "tsparse/rational.hpp"

using tsparse::Rational;

TEST_CASE("rational parsing") {
    REQUIRE(Rational::parse("0") == Rational(0, 1));
    REQUIRE(Rational::parse("2") == Rational(2, 1));
    REQUIRE(Rational::parse("1.5") == Rational(3, 2));
    REQUIRE(Rational::parse("0.25") == Rational(1, 4));
    REQUIRE(Rational::parse(".25") == Rational(1, 4));
    REQUIRE(Rational::parse("2.") == Rational(2, 1));
    REQUIRE(Rational::parse("0.333") == Rational(333, 1000));
    REQUIRE(Rational::parse("1.5").to_double() == 1.5);
    REQUIRE(Rational::parse("3").is_integer());
    REQUIRE_FALSE(Rational::parse("0.5").is_integer());

    REQUIRE_THROWS_AS(Rational::parse(""), std::invalid_argument);
    REQUIRE_THROWS_AS(Rational::parse("."), std::invalid_argument);
    REQUIRE_THROWS_AS(Rational::parse("1.2.3"), std::invalid_argument);
    REQUIRE_THROWS_AS(Rational::parse("-1"), std::invalid_argument);
    REQUIRE_THROWS_AS(Rational::parse("1e3"), std::invalid_argument);
    REQUIRE_THROWS_AS(Rational::parse("12345678901234567890"), std::invalid_argument);
}

TEST_CASE("rational arithmetic helpers") {
    // floor(t * k / 2): the edge quota used throughout the solver
    REQUIRE(Rational::parse("1").floor_mul_div(13, 2) == 6);
    REQUIRE(Rational::parse("1").floor_mul_div(14, 2) == 7);
    REQUIRE(Rational::parse("0.5").floor_mul_div(10, 2) == 2);
    REQUIRE(Rational::parse("0").floor_mul_div(99, 2) == 0);
    REQUIRE(Rational::parse("2.5").floor_mul_div(7, 2) == 8);  // 17.5/2
    REQUIRE(Rational(1, 3) < Rational(1, 2));
    REQUIRE(Rational(2, 4) == Rational(1, 2));
    REQUIRE(Rational(0, 7) == Rational(0, 1));
    REQUIRE(Rational::parse("1.5").str() == "3/2");
    REQUIRE(Rational::parse("4").str() == "4");
}
