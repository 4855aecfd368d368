#include "doctest.h"
#include "ucc/rational.hpp"

using namespace ucc;

TEST_CASE("parse_rat accepts integers and fractions") {
  CHECK(parse_rat("0") == Rat(0));
  CHECK(parse_rat("7") == Rat(7));
  CHECK(parse_rat("-3") == Rat(-3));
  CHECK(parse_rat("1/2") == Rat(1, 2));
  CHECK(parse_rat("-2/4") == Rat(-1, 2));
  CHECK(parse_rat("6/4") == Rat(3, 2));
}

TEST_CASE("parse_rat rejects malformed input") {
  CHECK_THROWS(parse_rat(""));
  CHECK_THROWS(parse_rat("1/0"));
  CHECK_THROWS(parse_rat("a"));
  CHECK_THROWS(parse_rat("1.5"));
  CHECK_THROWS(parse_rat("1/ 2"));
}

TEST_CASE("rat_str is canonical and round trips") {
  CHECK(rat_str(Rat(0)) == "0");
  CHECK(rat_str(Rat(-5)) == "-5");
  CHECK(rat_str(Rat(4, 8)) == "1/2");
  CHECK(rat_str(Rat(-4, 8)) == "-1/2");
  for (const char* s : {"0", "17", "-3/7", "355/113"}) CHECK(rat_str(parse_rat(s)) == s);
}

TEST_CASE("rat_floor handles negatives") {
  CHECK(rat_floor(Rat(7, 2)) == 3);
  CHECK(rat_floor(Rat(-7, 2)) == -4);
  CHECK(rat_floor(Rat(4)) == 4);
  CHECK(rat_floor(Rat(-4)) == -4);
  CHECK(rat_floor(Rat(0)) == 0);
}

TEST_CASE("pow2_neg is exact") {
  CHECK(pow2_neg(0) == Rat(1));
  CHECK(pow2_neg(1) == Rat(1, 2));
  CHECK(pow2_neg(10) == Rat(1, 1024));
  Rat sum = 0;
  for (int i = 1; i <= 20; ++i) sum += pow2_neg(i);
  CHECK(Rat(1) - sum == pow2_neg(20));
}

TEST_CASE("rat_abs") {
  CHECK(rat_abs(Rat(-3, 4)) == Rat(3, 4));
  CHECK(rat_abs(Rat(3, 4)) == Rat(3, 4));
  CHECK(rat_abs(Rat(0)) == Rat(0));
}
