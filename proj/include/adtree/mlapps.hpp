#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "adtree/counter.hpp"
#include "adtree/query.hpp"

namespace adtree {

// ---- feature selection ------------------------------------------------------

struct FeatureScore {
  std::vector<Attr> attrs;  // ascending
  double gain = 0.0;        // bits
  friend bool operator==(const FeatureScore&, const FeatureScore&) = default;
};

// Information gain of a_out given attrs, read from ct(a_out, attrs), log base 2.
// ArgumentError if a_out is among attrs.
FeatureScore info_gain(const Counter& counter, Attr a_out, std::span<const Attr> attrs);

// Every n-subset of the other attributes, best gain first; ties by attribute
// indices. ArgumentError unless 1 <= n <= M-1.
std::vector<FeatureScore> feature_select(const Counter& counter, Attr a_out, std::size_t n);

// ---- Bayes nets -------------------------------------------------------------

// DAG over M attributes, kept consistent with an explicit total order: every
// edge goes from an earlier to a later position.
class BayesNet {
 public:
  BayesNet() = default;
  explicit BayesNet(std::vector<std::uint32_t> arities);  // identity order, no edges
  BayesNet(std::vector<std::uint32_t> arities, std::vector<Attr> order);

  std::size_t size() const { return arities_.size(); }
  const std::vector<Attr>& order() const { return order_; }
  std::size_t position(Attr a) const { return position_[a]; }
  const std::vector<Attr>& parents(Attr j) const { return parents_[j]; }
  const std::vector<std::uint32_t>& arities() const { return arities_; }
  bool has_edge(Attr from, Attr to) const;
  std::size_t num_edges() const;

  // ArgumentError if the edge exists or runs against the order.
  void add_edge(Attr from, Attr to);
  void remove_edge(Attr from, Attr to);
  // Swaps the nodes at two order positions and reverses every edge the new
  // order contradicts. Returns the nodes whose parent sets changed.
  std::vector<Attr> swap_positions(std::size_t i, std::size_t j);

  // Probability-table entries of node j: n_j * prod over parents of n_p.
  std::uint64_t node_params(Attr j) const;
  std::uint64_t num_params() const;

  // InternalError unless every parent precedes its child in the order.
  void check_acyclic() const;

  friend bool operator==(const BayesNet& a, const BayesNet& b) {
    return a.arities_ == b.arities_ && a.order_ == b.order_ && a.parents_ == b.parents_;
  }

 private:
  std::vector<std::uint32_t> arities_;
  std::vector<Attr> order_;
  std::vector<std::size_t> position_;
  std::vector<std::vector<Attr>> parents_;
};

struct CptRow {
  std::vector<Value> parent_values;  // in ascending parent-attribute order
  Count parent_count = 0;
  std::vector<double> probs;         // probs[v - 1] = P(a_j = v | parents)
};

// Maximum-likelihood table for one node. Parent assignments that never occur
// have no row.
struct Cpt {
  Attr attr = 0;
  std::vector<Attr> parents;
  std::vector<CptRow> rows;  // odometer order of parent values
};

std::vector<Cpt> bn_prob_tables(const Counter& counter, const BayesNet& net);

// Sum over parent assignments and values of C(v, A) ln(C(v, A) / C(A)), the
// node's share of the likelihood term (natural log, 0 ln 0 = 0).
double node_log_likelihood(const Counter& counter, Attr j, std::span<const Attr> parents);

struct BnScore {
  double total = 0.0;
  double penalty = 0.0;                 // N_params ln(R) / 2
  std::vector<double> node_likelihood;  // per attribute
  std::vector<std::uint64_t> node_params;
};

// Penalized log-likelihood -N_params ln(R)/2 + sum_j node_log_likelihood(j).
// ArgumentError when R = 0.
BnScore bn_score_detail(const Counter& counter, const BayesNet& net);
double bn_score(const Counter& counter, const BayesNet& net);

struct HillClimbConfig {
  std::uint64_t iterations = 1000;
  std::uint32_t restarts = 1;
  std::uint64_t seed = 1;
  std::size_t max_parents = 8;
};

struct HillClimbResult {
  BayesNet best;
  double best_score = 0.0;
  std::uint32_t best_restart = 0;
  // One entry per iteration, restarts concatenated.
  std::vector<double> best_trace;     // best score seen so far overall
  std::vector<double> current_trace;  // score of the restart's current network
  std::uint64_t tables_built = 0;     // node tables evaluated
  std::uint64_t accepted = 0;
};

// Random-restart stochastic hill climbing over (order, edges). Each step picks
// add-edge, remove-edge or swap-two-positions uniformly and keeps the result
// only if the score strictly improves. Deterministic for a fixed seed.
HillClimbResult bn_hill_climb(const Counter& counter, const HillClimbConfig& cfg);

// ---- rules ------------------------------------------------------------------

struct Rule {
  Query assign;
  Attr target = 0;
  Value target_value = 0;
  Count support = 0;  // C(assign)
  Count hits = 0;     // C(target = value, assign)
  double score() const { return support ? static_cast<double>(hits) / static_cast<double>(support) : 0.0; }
  friend bool operator==(const Rule&, const Rule&) = default;
};

struct RuleSearchStats {
  std::uint64_t tables = 0;      // contingency tables built
  std::uint64_t antecedents = 0; // antecedents with nonzero support examined
  std::uint64_t emitted = 0;     // antecedents meeting the support threshold
};

// Exhaustive search over n-attribute conjunctions predicting a_out = v_out.
// Rules need support >= s_min; result sorted by score, then support, then
// antecedent; top_k = 0 keeps all.
std::vector<Rule> rule_search(const Counter& counter, Attr a_out, Value v_out, std::size_t n, Count s_min,
                              std::size_t top_k, RuleSearchStats* stats = nullptr);

// Strict ranking order used by rule_search.
bool rule_before(const Rule& a, const Rule& b);

// Calls fn(subset) for every k-subset of items in lexicographic order.
template <typename Fn>
void for_each_subset(std::span<const Attr> items, std::size_t k, Fn&& fn) {
  if (k > items.size()) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  std::vector<Attr> subset(k);
  while (true) {
    for (std::size_t i = 0; i < k; ++i) subset[i] = items[idx[i]];
    fn(std::span<const Attr>(subset));
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == items.size() - k + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace adtree
