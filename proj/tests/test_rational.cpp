#include <doctest.h>

#include "qmart/rational.hpp"

using qmart::Error;
using qmart::ParseError;
using qmart::Rat;

TEST_CASE("rational parse accepts the grammar and normalizes") {
  CHECK(Rat::parse("3/4").str() == "3/4");
  CHECK(Rat::parse("6/8").str() == "3/4");
  CHECK(Rat::parse("-6/8").str() == "-3/4");
  CHECK(Rat::parse("0").str() == "0");
  CHECK(Rat::parse("0/7").str() == "0");
  CHECK(Rat::parse("12").str() == "12");
  CHECK(Rat::parse("-12/3").str() == "-4");
  CHECK(Rat::parse("007/014").str() == "1/2");
}

TEST_CASE("rational parse rejects malformed input") {
  CHECK_THROWS_AS(Rat::parse("1/0"), ParseError);
  CHECK_THROWS_AS(Rat::parse("1/00"), ParseError);
  CHECK_THROWS_AS(Rat::parse(""), ParseError);
  CHECK_THROWS_AS(Rat::parse("-"), ParseError);
  CHECK_THROWS_AS(Rat::parse("1/"), ParseError);
  CHECK_THROWS_AS(Rat::parse("/2"), ParseError);
  CHECK_THROWS_AS(Rat::parse("1/-2"), ParseError);
  CHECK_THROWS_AS(Rat::parse("+1"), ParseError);
  CHECK_THROWS_AS(Rat::parse("1.5"), ParseError);
  CHECK_THROWS_AS(Rat::parse("1 / 2"), ParseError);
  CHECK_THROWS_AS(Rat::parse("0x10"), ParseError);
}

TEST_CASE("rational arithmetic is exact and canonical") {
  const Rat half(1, 2), third(1, 3);
  CHECK((half + third).str() == "5/6");
  CHECK((half - third).str() == "1/6");
  CHECK((half * third).str() == "1/6");
  CHECK((half / third).str() == "3/2");
  CHECK(Rat(6, -8).str() == "-3/4");
  CHECK(Rat(2, 4) == Rat(1, 2));
  CHECK(Rat(-1, 2) < Rat(1, 3));
  CHECK(Rat(-1, 2).abs() == half);
  CHECK(Rat(-3, 4).pos_part() == Rat(0));
  CHECK(Rat(-3, 4).neg_part() == Rat(3, 4));
  CHECK(Rat(3, 4).pos_part() == Rat(3, 4));
  CHECK_THROWS_AS(Rat(1, 0), Error);
  CHECK_THROWS_AS(half / Rat(0), Error);

  // no overflow at depth: (1/3)^40 summed back up
  Rat acc(1);
  for (int i = 0; i < 40; ++i) acc *= third;
  Rat back = acc;
  for (int i = 0; i < 40; ++i) back *= Rat(3);
  CHECK(back == Rat(1));
}
