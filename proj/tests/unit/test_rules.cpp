#include <doctest.h>

#include <algorithm>
#include <random>

#include "adtree/mlapps.hpp"
#include "fixtures.hpp"

using namespace adtree;

namespace {

// Every antecedent over n attributes other than out, from the raw records.
std::vector<Rule> brute_rules(const Dataset& d, Attr out, Value v_out, std::size_t n, Count s_min) {
  std::vector<Attr> others;
  for (Attr a = 0; a < d.num_attributes(); ++a) {
    if (a != out) others.push_back(a);
  }
  std::vector<Rule> rules;
  for_each_subset(std::span<const Attr>(others), n, [&](std::span<const Attr> attrs) {
    const std::vector<Attr> set(attrs.begin(), attrs.end());
    for (const auto& [key, support] : test::brute_table(d, set)) {
      if (support < s_min) continue;
      std::vector<Term> terms;
      std::vector<std::pair<Attr, Value>> cond;
      for (std::size_t i = 0; i < set.size(); ++i) {
        terms.push_back({set[i], key[i]});
        cond.emplace_back(set[i], key[i]);
      }
      cond.emplace_back(out, v_out);
      rules.push_back({Query(terms), out, v_out, support, test::brute_count(d, cond)});
    }
  });
  return rules;
}

}  // namespace

TEST_CASE("rule_search: toy dataset") {
  const ADTree t = ADTree::build(test::toy(), 1);
  const auto rules = rule_search(TreeCounter(t), 2, 1, 1, 2, 0);
  REQUIRE_FALSE(rules.empty());
  CHECK(rules[0].assign == Query({{1, 3}}));
  CHECK(rules[0].score() == 1.0);
  CHECK(rules[0].support == 4);
  CHECK(rules[0].hits == 4);
  // a1=1 also scores 1.0 but has less support.
  CHECK(rules[1].assign == Query({{0, 1}}));
  CHECK(rule_search(TreeCounter(t), 2, 1, 1, 7, 0).empty());
}

TEST_CASE("rule_search: top_k keeps the head of the full ranking") {
  const ADTree t = ADTree::build(test::toy(), 1);
  const auto all = rule_search(TreeCounter(t), 2, 1, 2, 1, 0);
  const auto top = rule_search(TreeCounter(t), 2, 1, 2, 1, 2);
  REQUIRE(top.size() == 2);
  CHECK(std::equal(top.begin(), top.end(), all.begin()));
}

TEST_CASE("properties: rule lists match brute force and both backends") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 40; ++trial) {
    auto spec = test::random_spec(rng, 6, 200, 4);
    spec.m = std::max<std::size_t>(spec.m, 2);
    const auto d = std::make_shared<const Dataset>(test::random_dataset(rng, spec));
    const ADTree t = ADTree::build(d, 4);
    const Attr out = static_cast<Attr>(rng() % d->num_attributes());
    if (d->arity(out) == 0) continue;
    const Value v_out = static_cast<Value>(1 + rng() % d->arity(out));
    const Count s_min = 1 + rng() % 10;
    for (std::size_t n = 1; n < d->num_attributes() && n <= 3; ++n) {
      RuleSearchStats st;
      const auto got = rule_search(TreeCounter(t), out, v_out, n, s_min, 0, &st);
      CHECK(got == rule_search(LinearCounter(*d), out, v_out, n, s_min, 0));
      auto expect = brute_rules(*d, out, v_out, n, s_min);
      std::sort(expect.begin(), expect.end(), rule_before);
      CHECK(got == expect);
      for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(got[i].support >= s_min);
        CHECK(got[i].hits <= got[i].support);
        if (i > 0) CHECK(rule_before(got[i - 1], got[i]));
      }
      const auto top = rule_search(TreeCounter(t), out, v_out, n, s_min, 3);
      CHECK(top.size() == std::min<std::size_t>(3, got.size()));
      CHECK(std::equal(top.begin(), top.end(), got.begin()));
      CHECK(st.emitted == got.size());
    }
  }
}

TEST_CASE("for_each_subset: lexicographic order") {
  const std::vector<Attr> items{1, 3, 5, 7};
  std::vector<std::vector<Attr>> seen;
  for_each_subset(std::span<const Attr>(items), 2, [&](std::span<const Attr> s) { seen.emplace_back(s.begin(), s.end()); });
  CHECK(seen == std::vector<std::vector<Attr>>{{1, 3}, {1, 5}, {1, 7}, {3, 5}, {3, 7}, {5, 7}});
  int zero = 0;
  for_each_subset(std::span<const Attr>(items), 0, [&](std::span<const Attr>) { ++zero; });
  CHECK(zero == 1);
  int none = 0;
  for_each_subset(std::span<const Attr>(items), 5, [&](std::span<const Attr>) { ++none; });
  CHECK(none == 0);
}
