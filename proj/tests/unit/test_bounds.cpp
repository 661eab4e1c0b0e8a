#include <doctest.h>

#include <cmath>

#include "adtree/bounds.hpp"
#include "adtree/error.hpp"

using namespace adtree;

TEST_CASE("bounds: row-limited sum") {
  CHECK(memory_bounds({40, 15, 1, {}}).row_limited == 10701);
  CHECK(memory_bounds({40, 1, 1, {}}).row_limited == 1);  // floor(log2 1) = 0
  CHECK(memory_bounds({3, 1000, 1, {}}).row_limited == 8);  // terms past k = M vanish
}

TEST_CASE("bounds: build cost") {
  CHECK(memory_bounds({3, 8, 1, {}}).build_cost == 27);
  // R = 5: ceil(log2 5) = 3, sum 5 + 5/2*3 + 5/4*3 + 5/8 = 16.875, rounded up.
  CHECK(memory_bounds({3, 5, 1, {}}).build_cost == 17);
}

TEST_CASE("bounds: skewed and correlated") {
  const auto b = memory_bounds({10, 256, 1, 0.25});
  REQUIRE(b.skewed.has_value());
  CHECK(*b.skewed == 386);
  CHECK(*b.q_skewed == doctest::Approx(0.25));
  CHECK(*b.q_correlated == doctest::Approx(std::sqrt(2 * 0.25 * 0.75)));
  // p and 1 - p give the same q.
  CHECK(*memory_bounds({10, 256, 1, 0.75}).skewed == 386);
  // p = 0.5: q = sqrt(0.5), exponent 16, clamped to M.
  CHECK(*memory_bounds({10, 256, 1, 0.5}).correlated == 1024);
}

TEST_CASE("bounds: leaf-list variants use R / r_min") {
  const auto b = memory_bounds({40, 15, 4, 0.25});
  CHECK(b.row_limited_leaf == memory_bounds({40, 3, 1, {}}).row_limited);
  const auto tiny = memory_bounds({40, 15, 32, 0.25});
  CHECK(tiny.row_limited_leaf == 1);  // R / r_min = 0 clamps the range at k = 0
  CHECK(*tiny.skewed_leaf == 1);
}

TEST_CASE("bounds: worst cases") {
  const auto b = memory_bounds({40, 15, 1, {}});
  CHECK(b.full_worst_case == BigInt(1) << 40);
  CHECK(to_string(b.dense_worst_case) == "12157665459056928801");
  CHECK(to_string(memory_bounds({100, 2, 1, {}}).full_worst_case) == "1267650600228229401496703205376");
}

TEST_CASE("bounds: argument errors") {
  CHECK_THROWS_AS(memory_bounds({0, 5, 1, {}}), ArgumentError);
  CHECK_THROWS_AS(memory_bounds({5, 0, 1, {}}), ArgumentError);
  CHECK_THROWS_AS(memory_bounds({5, 5, 0, {}}), ArgumentError);
  CHECK_THROWS_AS(memory_bounds({5, 5, 1, 0.0}), ArgumentError);
  CHECK_THROWS_AS(memory_bounds({5, 5, 1, 1.0}), ArgumentError);
}

TEST_CASE("bounds: helpers") {
  CHECK(binomial(40, 3) == 9880);
  CHECK(binomial(5, 7) == 0);
  CHECK(binomial_prefix_sum(10, 4) == 386);
  CHECK(floor_log2(1) == 0);
  CHECK(floor_log2(15) == 3);
  CHECK(ceil_log2(15) == 4);
  CHECK(ceil_log2(16) == 4);
  CHECK(decay_exponent(256, 0.25) == 4);
  CHECK(decay_exponent(8, 0.5) == 3);
}
