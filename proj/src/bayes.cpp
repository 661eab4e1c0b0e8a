#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <string>

#include "adtree/error.hpp"
#include "adtree/mlapps.hpp"
#include "table_groups.hpp"

namespace adtree {

BayesNet::BayesNet(std::vector<std::uint32_t> arities) : BayesNet(arities, [&] {
  std::vector<Attr> order(arities.size());
  std::iota(order.begin(), order.end(), Attr{0});
  return order;
}()) {}

BayesNet::BayesNet(std::vector<std::uint32_t> arities, std::vector<Attr> order)
    : arities_(std::move(arities)), order_(std::move(order)), position_(arities_.size()), parents_(arities_.size()) {
  if (order_.size() != arities_.size()) throw ArgumentError("BayesNet: order is not a permutation");
  std::vector<bool> seen(arities_.size(), false);
  for (std::size_t p = 0; p < order_.size(); ++p) {
    if (order_[p] >= arities_.size() || seen[order_[p]]) throw ArgumentError("BayesNet: order is not a permutation");
    seen[order_[p]] = true;
    position_[order_[p]] = p;
  }
}

bool BayesNet::has_edge(Attr from, Attr to) const {
  const auto& p = parents_[to];
  return std::binary_search(p.begin(), p.end(), from);
}

std::size_t BayesNet::num_edges() const {
  std::size_t e = 0;
  for (const auto& p : parents_) e += p.size();
  return e;
}

void BayesNet::add_edge(Attr from, Attr to) {
  if (from >= size() || to >= size() || from == to) throw ArgumentError("BayesNet: bad edge");
  if (position_[from] >= position_[to]) throw ArgumentError("BayesNet: edge runs against the order");
  auto& p = parents_[to];
  auto it = std::lower_bound(p.begin(), p.end(), from);
  if (it != p.end() && *it == from) throw ArgumentError("BayesNet: edge already present");
  p.insert(it, from);
}

void BayesNet::remove_edge(Attr from, Attr to) {
  if (to >= size()) throw ArgumentError("BayesNet: bad edge");
  auto& p = parents_[to];
  auto it = std::lower_bound(p.begin(), p.end(), from);
  if (it == p.end() || *it != from) throw ArgumentError("BayesNet: no such edge");
  p.erase(it);
}

std::vector<Attr> BayesNet::swap_positions(std::size_t i, std::size_t j) {
  if (i >= size() || j >= size()) throw ArgumentError("BayesNet: swap position out of range");
  std::swap(order_[i], order_[j]);
  position_[order_[i]] = i;
  position_[order_[j]] = j;
  std::vector<std::pair<Attr, Attr>> flipped;
  for (Attr to = 0; to < size(); ++to) {
    for (Attr from : parents_[to]) {
      if (position_[from] > position_[to]) flipped.emplace_back(from, to);
    }
  }
  std::set<Attr> changed;
  for (auto [from, to] : flipped) {
    remove_edge(from, to);
    add_edge(to, from);
    changed.insert(from);
    changed.insert(to);
  }
  return {changed.begin(), changed.end()};
}

std::uint64_t BayesNet::node_params(Attr j) const {
  std::uint64_t n = arities_[j];
  for (Attr p : parents_[j]) n *= arities_[p];
  return n;
}

std::uint64_t BayesNet::num_params() const {
  std::uint64_t n = 0;
  for (Attr j = 0; j < size(); ++j) n += node_params(j);
  return n;
}

void BayesNet::check_acyclic() const {
  for (Attr to = 0; to < size(); ++to) {
    for (Attr from : parents_[to]) {
      if (position_[from] >= position_[to])
        throw InternalError("BayesNet: edge " + std::to_string(from) + " -> " + std::to_string(to) + " violates the order");
    }
  }
}

std::vector<Cpt> bn_prob_tables(const Counter& counter, const BayesNet& net) {
  std::vector<Cpt> out;
  const Dataset& d = counter.dataset();
  for (Attr j = 0; j < net.size(); ++j) {
    std::vector<Attr> attrs = net.parents(j);
    attrs.push_back(j);
    const ContingencyTable ct = counter.contab(attrs);
    const std::size_t pos = detail::position_of(ct.attrs(), j);
    Cpt cpt{j, net.parents(j), {}};
    for (const auto& g : detail::group_rows(ct, pos)) {
      CptRow row{g.key, g.total, std::vector<double>(d.arity(j), 0.0)};
      for (const auto& [v, c] : g.entries) row.probs[v - 1] = static_cast<double>(c) / static_cast<double>(g.total);
      cpt.rows.push_back(std::move(row));
    }
    out.push_back(std::move(cpt));
  }
  return out;
}

double node_log_likelihood(const Counter& counter, Attr j, std::span<const Attr> parents) {
  std::vector<Attr> attrs(parents.begin(), parents.end());
  attrs.push_back(j);
  const ContingencyTable ct = counter.contab(attrs);
  const std::size_t pos = detail::position_of(ct.attrs(), j);
  double ll = 0.0;
  for (const auto& g : detail::group_rows(ct, pos)) {
    const double ca = static_cast<double>(g.total);
    for (const auto& [v, c] : g.entries) {
      const double cv = static_cast<double>(c);
      ll += cv * std::log(cv / ca);
    }
  }
  return ll;
}

namespace {

double total_score(const BayesNet& net, std::span<const double> node_ll, double log_r) {
  double s = -static_cast<double>(net.num_params()) * log_r / 2.0;
  for (double v : node_ll) s += v;
  return s;
}

}  // namespace

BnScore bn_score_detail(const Counter& counter, const BayesNet& net) {
  const Count r = counter.num_records();
  if (r == 0) throw ArgumentError("bn_score: dataset has no records");
  if (net.size() != counter.num_attributes()) throw ArgumentError("bn_score: network size differs from dataset");
  BnScore s;
  const double log_r = std::log(static_cast<double>(r));
  for (Attr j = 0; j < net.size(); ++j) {
    s.node_likelihood.push_back(node_log_likelihood(counter, j, net.parents(j)));
    s.node_params.push_back(net.node_params(j));
  }
  s.penalty = static_cast<double>(net.num_params()) * log_r / 2.0;
  s.total = total_score(net, s.node_likelihood, log_r);
  return s;
}

double bn_score(const Counter& counter, const BayesNet& net) { return bn_score_detail(counter, net).total; }

HillClimbResult bn_hill_climb(const Counter& counter, const HillClimbConfig& cfg) {
  const Dataset& d = counter.dataset();
  const std::size_t m = d.num_attributes();
  if (counter.num_records() == 0) throw ArgumentError("bn_hill_climb: dataset has no records");
  const double log_r = std::log(static_cast<double>(counter.num_records()));
  const std::uint32_t restarts = std::max<std::uint32_t>(cfg.restarts, 1);

  HillClimbResult result;
  result.best_trace.reserve(cfg.iterations * restarts);
  result.current_trace.reserve(cfg.iterations * restarts);
  bool have_best = false;

  for (std::uint32_t restart = 0; restart < restarts; ++restart) {
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32), restart};
    std::mt19937_64 rng(seq);
    std::vector<Attr> order(m);
    std::iota(order.begin(), order.end(), Attr{0});
    std::shuffle(order.begin(), order.end(), rng);

    BayesNet net(d.arities(), order);
    std::vector<double> node_ll(m);
    for (Attr j = 0; j < m; ++j) node_ll[j] = node_log_likelihood(counter, j, {});
    result.tables_built += m;
    double score = total_score(net, node_ll, log_r);
    if (!have_best || score > result.best_score) {
      result.best = net;
      result.best_score = score;
      result.best_restart = restart;
      have_best = true;
    }

    std::uniform_int_distribution<int> pick_move(0, 2);
    for (std::uint64_t it = 0; it < cfg.iterations; ++it) {
      BayesNet cand = net;
      std::vector<Attr> changed;
      const int move = pick_move(rng);
      if (move == 0) {
        std::vector<std::pair<Attr, Attr>> options;
        for (std::size_t p = 0; p < m; ++p) {
          for (std::size_t q = p + 1; q < m; ++q) {
            const Attr from = net.order()[p], to = net.order()[q];
            if (!net.has_edge(from, to) && net.parents(to).size() < cfg.max_parents) options.emplace_back(from, to);
          }
        }
        if (!options.empty()) {
          const auto [from, to] = options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
          cand.add_edge(from, to);
          changed.push_back(to);
        }
      } else if (move == 1) {
        std::vector<std::pair<Attr, Attr>> edges;
        for (Attr to = 0; to < m; ++to) {
          for (Attr from : net.parents(to)) edges.emplace_back(from, to);
        }
        if (!edges.empty()) {
          const auto [from, to] = edges[std::uniform_int_distribution<std::size_t>(0, edges.size() - 1)(rng)];
          cand.remove_edge(from, to);
          changed.push_back(to);
        }
      } else if (m >= 2) {
        const std::size_t i = std::uniform_int_distribution<std::size_t>(0, m - 1)(rng);
        std::size_t j = std::uniform_int_distribution<std::size_t>(0, m - 2)(rng);
        if (j >= i) ++j;
        changed = cand.swap_positions(i, j);
        bool over_cap = false;
        for (Attr a : changed) over_cap = over_cap || cand.parents(a).size() > cfg.max_parents;
        // Over-cap swaps are rejected unscored. A swap that flips no edge
        // leaves changed empty: the score cannot move.
        if (over_cap) changed.clear();
      }

      if (!changed.empty()) {
        cand.check_acyclic();
        std::vector<double> cand_ll = node_ll;
        for (Attr a : changed) cand_ll[a] = node_log_likelihood(counter, a, cand.parents(a));
        result.tables_built += changed.size();
        const double cand_score = total_score(cand, cand_ll, log_r);
        if (cand_score > score) {
          net = std::move(cand);
          node_ll = std::move(cand_ll);
          score = cand_score;
          ++result.accepted;
          if (score > result.best_score) {
            result.best = net;
            result.best_score = score;
            result.best_restart = restart;
          }
        }
      }
      result.current_trace.push_back(score);
      result.best_trace.push_back(result.best_score);
    }
  }
  return result;
}

}  // namespace adtree
