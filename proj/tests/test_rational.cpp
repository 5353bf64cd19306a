#include "exactfit/rational.hpp"

#include <doctest.h>

#include <random>
#include <stdexcept>

using exactfit::Rat;
using exactfit::rat_from_string;
using exactfit::rat_to_string;

TEST_CASE("rationals stay in lowest terms with positive denominator") {
  std::mt19937_64 rng(7001);
  std::uniform_int_distribution<int> num(-50, 50);
  std::uniform_int_distribution<int> den(1, 50);
  for (int i = 0; i < 500; ++i) {
    Rat a = Rat(num(rng)) / Rat(den(rng) * (rng() % 2 ? 1 : -1));
    Rat b = Rat(num(rng)) / Rat(den(rng));
    for (Rat v : {Rat(a + b), Rat(a - b), Rat(a * b)}) {
      CHECK(denominator(v) > 0);
      CHECK(gcd(exactfit::BigInt(abs(numerator(v))), exactfit::BigInt(denominator(v))) ==
            (numerator(v) == 0 ? denominator(v) : 1));
    }
  }
}

TEST_CASE("arithmetic is exact") {
  Rat third = Rat(1) / Rat(3);
  CHECK(third + third + third == 1);
  CHECK(Rat(2) / Rat(4) == Rat(1) / Rat(2));
  CHECK(Rat(7) / Rat(3) - Rat(1) / Rat(3) == 2);
}

TEST_CASE("division by zero is an error") {
  CHECK_THROWS_AS(Rat(1) / Rat(0), std::overflow_error);
}

TEST_CASE("string form is p/q or p") {
  CHECK(rat_to_string(Rat(3)) == "3");
  CHECK(rat_to_string(Rat(-6) / Rat(4)) == "-3/2");
  CHECK(rat_to_string(Rat(0)) == "0");
}

TEST_CASE("parsing accepts exactly the interchange forms") {
  CHECK(rat_from_string("12") == 12);
  CHECK(rat_from_string("-7/21") == Rat(-1) / Rat(3));
  CHECK(rat_from_string("0") == 0);
  CHECK(rat_from_string("007") == 7);
  CHECK_THROWS_AS(rat_from_string(""), std::invalid_argument);
  CHECK_THROWS_AS(rat_from_string("1.5"), std::invalid_argument);
  CHECK_THROWS_AS(rat_from_string("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(rat_from_string("3/-4"), std::invalid_argument);
  CHECK_THROWS_AS(rat_from_string("a/3"), std::invalid_argument);
  CHECK_THROWS_AS(rat_from_string("1/2/3"), std::invalid_argument);
  CHECK_THROWS_AS(rat_from_string(" 1"), std::invalid_argument);
}

TEST_CASE("string round-trip is lossless") {
  std::mt19937_64 rng(7002);
  std::uniform_int_distribution<long long> num(-1000000, 1000000);
  std::uniform_int_distribution<long long> den(1, 1000000);
  for (int i = 0; i < 500; ++i) {
    Rat v = Rat(num(rng)) / Rat(den(rng));
    CHECK(rat_from_string(rat_to_string(v)) == v);
  }
}
