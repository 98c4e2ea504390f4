#include "dimlab/rational.hpp"

#include <doctest.h>

using namespace dimlab;

TEST_CASE("parse and format round-trip") {
  CHECK(rat_to_string(parse_rat("3/4")) == "3/4");
  CHECK(rat_to_string(parse_rat("-6/8")) == "-3/4");
  CHECK(rat_to_string(parse_rat("7")) == "7");
  CHECK(rat_to_string(parse_rat(" 1 / 2 ")) == "1/2");
  CHECK_THROWS_AS(parse_rat("a/b"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rat("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rat(""), std::invalid_argument);
}

TEST_CASE("double conversion is exact for dyadics") {
  CHECK(rat_from_double(0.5) == Rat(1, 2));
  CHECK(rat_from_double(-0.75) == Rat(-3, 4));
  CHECK(to_double(rat_from_double(0.1)) == 0.1);
}

TEST_CASE("pow_rat with negative exponents") {
  CHECK(pow_rat(Rat(2, 3), 3) == Rat(8, 27));
  CHECK(pow_rat(Rat(2, 3), -2) == Rat(9, 4));
  CHECK(pow_rat(Rat(5), 0) == Rat(1));
  CHECK_THROWS_AS(pow_rat(Rat(0), -1), std::domain_error);
}

TEST_CASE("floor and ceil") {
  CHECK(floor_rat(Rat(7, 2)) == 3);
  CHECK(floor_rat(Rat(-7, 2)) == -4);
  CHECK(ceil_rat(Rat(7, 2)) == 4);
  CHECK(ceil_rat(Rat(-7, 2)) == -3);
  CHECK(floor_rat(Rat(6)) == 6);
  CHECK(ceil_rat(Rat(6)) == 6);
}

TEST_CASE("integer k-th roots") {
  CHECK(kth_root_floor(Rat(8), 3) == 2);
  CHECK(kth_root_floor(Rat(9), 3) == 2);
  CHECK(kth_root_floor(Rat(26), 3) == 2);
  CHECK(kth_root_floor(Rat(27), 3) == 3);
  CHECK(kth_root_floor(Rat(1, 2), 2) == 0);
  CHECK(kth_root_floor(Rat(1000000), 2) == 1000);
}

TEST_CASE("power comparisons are exact at the boundary") {
  // (2/14000)^(1/2) vs 1/70: 4900 vs 7000 after squaring
  Power lhs{Rat(1), Rat(2, 14000), 1, 2};
  Power rhs = Power::plain(Rat(1, 70));
  CHECK(power_lt(lhs, rhs));

  // (2/4)^(1/2) vs 1/20 fails by a wide margin
  Power bad{Rat(1), Rat(2, 4), 1, 2};
  CHECK(!power_lt(bad, Power::plain(Rat(1, 20))));

  // exact tie: 2 * (1/4)^(1/2) == 1
  Power tie{Rat(2), Rat(1, 4), 1, 2};
  CHECK(compare_powers(tie, Power::plain(Rat(1))) == 0);
  CHECK(power_le(tie, Power::plain(Rat(1))));
  CHECK(!power_lt(tie, Power::plain(Rat(1))));
}

TEST_CASE("power comparison with differing exponent denominators") {
  // 2^(1/2) vs 2^(1/3): lcm denominator 6, 8 vs 4
  Power a{Rat(1), Rat(2), 1, 2};
  Power b{Rat(1), Rat(2), 1, 3};
  CHECK(compare_powers(a, b) > 0);
  // coefficients scale correctly: (1/2) * 4^(1/2) == 1
  Power c{Rat(1, 2), Rat(4), 1, 2};
  CHECK(compare_powers(c, Power::plain(Rat(1))) == 0);
}

TEST_CASE("zero coefficients compare as zero") {
  Power zero{Rat(0), Rat(5), 3, 2};
  CHECK(compare_powers(zero, Power::plain(Rat(1, 1000000))) < 0);
  CHECK(compare_powers(zero, Power{Rat(0), Rat(7), 1, 1}) == 0);
}
