#include <doctest.h>

#include "adtree/error.hpp"
#include "adtree/query.hpp"
#include "fixtures.hpp"

using namespace adtree;

TEST_CASE("query: terms are kept sorted by attribute") {
  const Query q({{2, 1}, {0, 2}});
  REQUIRE(q.size() == 2);
  CHECK(q.terms()[0] == Term{0, 2});
  CHECK(q.terms()[1] == Term{2, 1});
  CHECK(q.mentions(2));
  CHECK_FALSE(q.mentions(1));
  CHECK_THROWS_AS(Query({{1, 1}, {1, 2}}), QueryError);
}

TEST_CASE("query: matching rows") {
  const Query q({{0, 2}, {2, 1}});
  const std::vector<Value> yes{2, 3, 1}, no{2, 3, 2};
  CHECK(q.matches(yes));
  CHECK_FALSE(q.matches(no));
  CHECK(Query().matches(no));
}

TEST_CASE("query: validation against the schema") {
  const auto d = test::toy();
  CHECK_NOTHROW(Query({{1, 4}}).validate(*d));
  CHECK_THROWS_AS(Query({{1, 5}}).validate(*d), QueryError);
  CHECK_THROWS_AS(Query({{1, 0}}).validate(*d), QueryError);
  CHECK_THROWS_AS(Query({{3, 1}}).validate(*d), QueryError);
}

TEST_CASE("query text: names, positional form and blanks") {
  const auto d = test::toy();
  CHECK(parse_query("a2=3,a3=1", *d) == Query({{1, 3}, {2, 1}}));
  CHECK(parse_query(" a3 = 1 , a2=3 ", *d) == Query({{1, 3}, {2, 1}}));
  CHECK(parse_query("@0=2,a3=2", *d) == Query({{0, 2}, {2, 2}}));
  CHECK(parse_query("", *d).empty());
  CHECK(parse_query("   ", *d).empty());
  CHECK(format_query(Query({{1, 3}, {2, 1}}), *d) == "a2 = 3, a3 = 1");
  CHECK(format_query(Query(), *d).empty());
}

TEST_CASE("query text: errors are not zero counts") {
  const auto d = test::toy();
  CHECK_THROWS_AS(parse_query("zz=1", *d), QueryError);
  CHECK_THROWS_AS(parse_query("a1=9", *d), QueryError);
  CHECK_THROWS_AS(parse_query("a1", *d), QueryError);
  CHECK_THROWS_AS(parse_query("a1=1,a1=2", *d), QueryError);
  CHECK_THROWS_AS(parse_query("@7=1", *d), QueryError);
  CHECK_THROWS_AS(parse_query("@0=3", *d), QueryError);
  CHECK_THROWS_AS(parse_query("@x=1", *d), QueryError);
  CHECK_THROWS_AS(parse_query("a1=1,", *d), QueryError);
}
