#include <catch2/catch.hpp>

#include "pwc/scalar.hpp"

using namespace pwc;

TEST_CASE("parse_rational reads fractions, integers and decimals exactly") {
    CHECK(parse_rational("3/4") == Rational(3, 4));
    CHECK(parse_rational("-1/4") == Rational(-1, 4));
    CHECK(parse_rational("0") == Rational(0));
    CHECK(parse_rational("2") == Rational(2));
    CHECK(parse_rational("0.375") == Rational(3, 8));
    CHECK(parse_rational("-1.5") == Rational(-3, 2));
    CHECK(parse_rational(".25") == Rational(1, 4));
    CHECK(parse_rational(" 7/9 ") == Rational(7, 9));
    // decimals are read as decimal fractions, not binary floats
    CHECK(parse_rational("0.1") == Rational(1, 10));
}

TEST_CASE("parse_rational rejects malformed input") {
    CHECK_THROWS_AS(parse_rational(""), Error);
    CHECK_THROWS_AS(parse_rational("1/0"), Error);
    CHECK_THROWS_AS(parse_rational("a/b"), Error);
    CHECK_THROWS_AS(parse_rational("1.2.3"), Error);
    CHECK_THROWS_AS(parse_rational("-"), Error);
    CHECK_THROWS_AS(parse_rational("1/ 2"), Error);
}

TEST_CASE("fraction rendering is canonical") {
    CHECK(to_fraction_string(Rational(1, 2)) == "1/2");
    CHECK(to_fraction_string(Rational(-3, 9)) == "-1/3");
    CHECK(to_fraction_string(Rational(0)) == "0/1");
}

TEST_CASE("floor_int rounds toward minus infinity") {
    CHECK(floor_int(Rational(7, 2)) == 3);
    CHECK(floor_int(Rational(-7, 2)) == -4);
    CHECK(floor_int(Rational(4)) == 4);
    CHECK(floor_int(Rational(-4)) == -4);
    CHECK(ceil_int(Rational(7, 2)) == 4);
    CHECK(ceil_int(Rational(-7, 2)) == -3);
}

TEST_CASE("directed float bounds bracket the exact value") {
    for (const Rational& r :
         {Rational(1, 3), Rational(2, 7), Rational(1, 2), Rational(99, 100), Rational(1, 1048576)}) {
        Float below = float_below(r);
        Float above = float_above(r);
        CHECK(to_rational_exact(below) <= r);
        CHECK(to_rational_exact(above) >= r);
        CHECK(above - below <= boost::multiprecision::ldexp(Float(1), -100));
    }
}

TEST_CASE("float to rational round trip is exact for dyadics") {
    Float f = Float(3) / 4;
    CHECK(to_rational_exact(f) == Rational(3, 4));
    Float tiny = boost::multiprecision::ldexp(Float(1), -200);
    CHECK(to_rational_exact(tiny) == Rational(BigInt(1), pow(BigInt(2), 200)));
}
