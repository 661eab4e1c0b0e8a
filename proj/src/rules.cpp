#include <algorithm>
#include <queue>
#include <string>

#include "adtree/error.hpp"
#include "adtree/mlapps.hpp"
#include "table_groups.hpp"

namespace adtree {

bool rule_before(const Rule& a, const Rule& b) {
  // hits/support compared exactly by cross-multiplication.
  const auto lhs = static_cast<unsigned __int128>(a.hits) * b.support;
  const auto rhs = static_cast<unsigned __int128>(b.hits) * a.support;
  if (lhs != rhs) return lhs > rhs;
  if (a.support != b.support) return a.support > b.support;
  return a.assign.terms() < b.assign.terms();
}

std::vector<Rule> rule_search(const Counter& counter, Attr a_out, Value v_out, std::size_t n, Count s_min,
                              std::size_t top_k, RuleSearchStats* stats) {
  const Dataset& d = counter.dataset();
  const std::size_t m = d.num_attributes();
  if (a_out >= m) throw ArgumentError("rule_search: target attribute out of range");
  if (v_out < 1 || v_out > d.arity(a_out)) throw ArgumentError("rule_search: target value out of range");
  if (n < 1) throw ArgumentError("rule_search: n must be at least 1");
  if (s_min < 1) throw ArgumentError("rule_search: s_min must be at least 1");

  RuleSearchStats local;
  RuleSearchStats& st = stats ? *stats : local;
  std::vector<Attr> inputs;
  for (Attr a = 0; a < m; ++a) {
    if (a != a_out) inputs.push_back(a);
  }

  // Max-heap on rank: top() is the worst rule kept so far.
  std::priority_queue<Rule, std::vector<Rule>, decltype(&rule_before)> kept(&rule_before);
  std::vector<Rule> all;

  for_each_subset(std::span<const Attr>(inputs), n, [&](std::span<const Attr> subset) {
    std::vector<Attr> attrs(subset.begin(), subset.end());
    attrs.push_back(a_out);
    const ContingencyTable ct = counter.contab(attrs);
    ++st.tables;
    const std::size_t pos = detail::position_of(ct.attrs(), a_out);
    for (const auto& g : detail::group_rows(ct, pos)) {
      ++st.antecedents;
      if (g.total < s_min) continue;
      ++st.emitted;
      Count hits = 0;
      for (const auto& [v, c] : g.entries) {
        if (v == v_out) hits = c;
      }
      std::vector<Term> terms;
      for (std::size_t i = 0; i < subset.size(); ++i) terms.push_back({subset[i], g.key[i]});
      Rule rule{Query(std::move(terms)), a_out, v_out, g.total, hits};
      if (top_k == 0) {
        all.push_back(std::move(rule));
      } else if (kept.size() < top_k) {
        kept.push(std::move(rule));
      } else if (rule_before(rule, kept.top())) {
        kept.pop();
        kept.push(std::move(rule));
      }
    }
  });

  if (top_k != 0) {
    while (!kept.empty()) {
      all.push_back(kept.top());
      kept.pop();
    }
  }
  std::sort(all.begin(), all.end(), rule_before);
  return all;
}

}  // namespace adtree
