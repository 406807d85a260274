#include <arbkit/rational.hpp>

#include <doctest.h>

#include <random>

using namespace arbkit;

TEST_CASE("accepted rational spellings parse exactly") {
    CHECK(parse_rational("3/4") == Rat(3, 4));
    CHECK(parse_rational("3/-6") == Rat(-1, 2)); // normalized sign
    CHECK(parse_rational("-8/4") == Rat(-2));
    CHECK(parse_rational("123") == Rat(123));
    CHECK(parse_rational("-7") == Rat(-7));
    CHECK(parse_rational("0") == Rat(0));
    CHECK(parse_rational("0.5") == Rat(1, 2));
    CHECK(parse_rational("-0.625") == Rat(-5, 8));
    CHECK(parse_rational("2.50") == Rat(5, 2));
    CHECK(parse_rational(".25") == Rat(1, 4));
    // Well beyond 64 bits, still exact.
    CHECK(parse_rational("36893488147419103232") ==
          Rat(Int("36893488147419103232")));
}

TEST_CASE("everything else is rejected, never rounded") {
    CHECK(!parse_rational(""));
    CHECK(!parse_rational("abc"));
    CHECK(!parse_rational("1/0"));
    CHECK(!parse_rational("1e3"));
    CHECK(!parse_rational("1.5e-2"));
    CHECK(!parse_rational("0.333..."));
    CHECK(!parse_rational("nan"));
    CHECK(!parse_rational("inf"));
    CHECK(!parse_rational("1/2/3"));
    CHECK(!parse_rational("1 2"));
    CHECK(!parse_rational("0x10"));
}

TEST_CASE("format emits lowest terms with positive denominator") {
    CHECK(format_rational(Rat(4, 8)) == "1/2");
    CHECK(format_rational(Rat(-4, 8)) == "-1/2");
    CHECK(format_rational(Rat(-3, 6)) == "-1/2");
    CHECK(format_rational(Rat(14, 7)) == "2");
    CHECK(format_rational(Rat(0)) == "0");
}

TEST_CASE("parse is a left inverse of format") {
    std::mt19937_64 rng(7);
    for (int k = 0; k < 500; ++k) {
        long p = static_cast<long>(rng() % 20001) - 10000;
        long q = static_cast<long>(rng() % 999) + 1;
        Rat x(p, q);
        auto back = parse_rational(format_rational(x));
        REQUIRE(back);
        CHECK(*back == x);
    }
}
