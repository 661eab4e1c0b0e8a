#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#ifndef ADTREE_TEST_DATA_DIR
#error "ADTREE_TEST_DATA_DIR must be defined"
#endif

namespace adtree::test {

std::filesystem::path data_path(const std::string& name) { return std::filesystem::path(ADTREE_TEST_DATA_DIR) / name; }

std::shared_ptr<const Dataset> toy() {
  return std::make_shared<const Dataset>(std::vector<std::string>{"a1", "a2", "a3"}, std::vector<std::uint32_t>{2, 4, 2},
                                         std::vector<Value>{1, 1, 1, 2, 3, 1, 2, 4, 2, 1, 3, 1, 2, 3, 1, 1, 3, 1});
}

Dataset random_dataset(std::mt19937_64& rng, const RandomSpec& spec) {
  std::vector<std::string> names;
  std::vector<std::uint32_t> arities;
  std::vector<std::discrete_distribution<int>> dists;
  for (std::size_t a = 0; a < spec.m; ++a) {
    names.push_back("x" + std::to_string(a));
    const auto k = std::uniform_int_distribution<std::uint32_t>(1, spec.max_arity)(rng);
    arities.push_back(k);
    std::vector<double> w(k);
    for (std::uint32_t v = 0; v < k; ++v) w[v] = std::pow(spec.skew, v);
    dists.emplace_back(w.begin(), w.end());
  }
  std::bernoulli_distribution copy(spec.correlation);
  std::vector<Value> codes;
  codes.reserve(spec.m * spec.r);
  for (std::size_t r = 0; r < spec.r; ++r) {
    for (std::size_t a = 0; a < spec.m; ++a) {
      Value v = static_cast<Value>(dists[a](rng) + 1);
      if (a > 0 && copy(rng)) {
        const Value prev = codes.back();
        if (prev <= arities[a]) v = prev;
      }
      codes.push_back(v);
    }
  }
  return Dataset(std::move(names), std::move(arities), std::move(codes));
}

RandomSpec random_spec(std::mt19937_64& rng, std::size_t max_m, std::size_t max_r, std::uint32_t max_arity) {
  static constexpr double kSkews[] = {1.0, 0.7, 0.4, 0.15};
  static constexpr double kCorrelations[] = {0.0, 0.0, 0.3, 0.7};
  RandomSpec s;
  s.m = std::uniform_int_distribution<std::size_t>(1, max_m)(rng);
  s.r = std::uniform_int_distribution<std::size_t>(0, max_r)(rng);
  s.max_arity = std::uniform_int_distribution<std::uint32_t>(1, max_arity)(rng);
  s.skew = kSkews[std::uniform_int_distribution<int>(0, 3)(rng)];
  s.correlation = kCorrelations[std::uniform_int_distribution<int>(0, 3)(rng)];
  return s;
}

Dataset all_binary_records(std::size_t m, std::size_t padding) {
  std::vector<std::string> names;
  std::vector<std::uint32_t> arities;
  for (std::size_t a = 0; a < m; ++a) {
    names.push_back("b" + std::to_string(a));
    arities.push_back(2);
  }
  for (std::size_t a = 0; a < padding; ++a) {
    names.push_back("pad" + std::to_string(a));
    arities.push_back(1);
  }
  std::vector<Value> codes;
  for (std::uint64_t r = 0; r < (std::uint64_t{1} << m); ++r) {
    for (std::size_t a = 0; a < m; ++a) codes.push_back(static_cast<Value>(((r >> (m - 1 - a)) & 1) + 1));
    for (std::size_t a = 0; a < padding; ++a) codes.push_back(1);
  }
  return Dataset(std::move(names), std::move(arities), std::move(codes));
}

std::vector<Query> all_queries(const Dataset& d) {
  // Odometer over (0 = don't care, 1..n_i).
  const std::size_t m = d.num_attributes();
  std::vector<Value> digit(m, 0);
  std::vector<Query> out;
  while (true) {
    std::vector<Term> terms;
    for (std::size_t a = 0; a < m; ++a) {
      if (digit[a] != 0) terms.push_back({static_cast<Attr>(a), digit[a]});
    }
    out.emplace_back(std::move(terms));
    std::size_t a = m;
    while (a > 0 && digit[a - 1] == d.arity(static_cast<Attr>(a - 1))) digit[--a] = 0;
    if (a == 0) return out;
    ++digit[a - 1];
  }
}

Query random_query(std::mt19937_64& rng, const Dataset& d) {
  std::vector<Term> terms;
  for (std::size_t a = 0; a < d.num_attributes(); ++a) {
    const auto n = d.arity(static_cast<Attr>(a));
    const auto pick = std::uniform_int_distribution<std::uint32_t>(0, n)(rng);
    if (pick != 0) terms.push_back({static_cast<Attr>(a), static_cast<Value>(pick)});
  }
  return Query(std::move(terms));
}

Count brute_count(const Dataset& d, const std::vector<std::pair<Attr, Value>>& terms) {
  Count c = 0;
  for (std::size_t r = 0; r < d.num_records(); ++r) {
    bool ok = true;
    for (const auto& [a, v] : terms) ok = ok && d.value(static_cast<RecordIndex>(r), a) == v;
    c += ok ? 1 : 0;
  }
  return c;
}

Cells brute_table(const Dataset& d, std::vector<Attr> attrs, const std::vector<std::pair<Attr, Value>>& cond) {
  std::sort(attrs.begin(), attrs.end());
  Cells cells;
  for (std::size_t r = 0; r < d.num_records(); ++r) {
    const auto ri = static_cast<RecordIndex>(r);
    bool ok = true;
    for (const auto& [a, v] : cond) ok = ok && d.value(ri, a) == v;
    if (!ok) continue;
    std::vector<Value> key;
    for (Attr a : attrs) key.push_back(d.value(ri, a));
    ++cells[key];
  }
  return cells;
}

Cells cells_of(const ContingencyTable& ct) {
  Cells out;
  for (std::size_t i = 0; i < ct.size(); ++i) {
    const auto k = ct.key(i);
    out[std::vector<Value>(k.begin(), k.end())] = ct.count(i);
  }
  return out;
}

namespace {

double entropy_bits(const std::map<std::vector<Value>, double>& weights, double total) {
  double h = 0.0;
  for (const auto& [k, w] : weights) {
    if (w > 0) h -= (w / total) * std::log2(w / total);
  }
  return h;
}

}  // namespace

double brute_info_gain(const Dataset& d, Attr out, const std::vector<Attr>& inputs) {
  // IG = H(out) + H(inputs) - H(out, inputs).
  const double r = static_cast<double>(d.num_records());
  if (r == 0) return 0.0;
  std::map<std::vector<Value>, double> h_out, h_in, h_joint;
  for (std::size_t i = 0; i < d.num_records(); ++i) {
    const auto ri = static_cast<RecordIndex>(i);
    std::vector<Value> in;
    for (Attr a : inputs) in.push_back(d.value(ri, a));
    std::vector<Value> joint = in;
    joint.push_back(d.value(ri, out));
    h_out[{d.value(ri, out)}] += 1;
    h_in[in] += 1;
    h_joint[joint] += 1;
  }
  return entropy_bits(h_out, r) + entropy_bits(h_in, r) - entropy_bits(h_joint, r);
}

double brute_bn_score(const Dataset& d, const std::vector<std::vector<Attr>>& parents) {
  // Sum over records of ln P(x_j | parents) with ML estimates, minus the penalty.
  const std::size_t m = d.num_attributes();
  const double r = static_cast<double>(d.num_records());
  double np = 0;
  for (std::size_t j = 0; j < m; ++j) {
    double t = d.arity(static_cast<Attr>(j));
    for (Attr p : parents[j]) t *= d.arity(p);
    np += t;
  }
  double ll = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    std::map<std::vector<Value>, double> joint, marg;
    for (std::size_t i = 0; i < d.num_records(); ++i) {
      const auto ri = static_cast<RecordIndex>(i);
      std::vector<Value> key;
      for (Attr p : parents[j]) key.push_back(d.value(ri, p));
      marg[key] += 1;
      key.push_back(d.value(ri, static_cast<Attr>(j)));
      joint[key] += 1;
    }
    for (std::size_t i = 0; i < d.num_records(); ++i) {
      const auto ri = static_cast<RecordIndex>(i);
      std::vector<Value> key;
      for (Attr p : parents[j]) key.push_back(d.value(ri, p));
      const double c_par = marg[key];
      key.push_back(d.value(ri, static_cast<Attr>(j)));
      ll += std::log(joint[key] / c_par);
    }
  }
  return -np * std::log(r) / 2.0 + ll;
}

double brute_best_bn_score(const Dataset& d, std::size_t max_parents) {
  const std::size_t m = d.num_attributes();
  std::vector<Attr> order(m);
  std::iota(order.begin(), order.end(), Attr{0});
  // Every DAG is consistent with some order, so order x edge-subset covers all DAGs.
  double best = -INFINITY;
  do {
    std::vector<std::pair<Attr, Attr>> candidates;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) candidates.emplace_back(order[i], order[j]);
    }
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << candidates.size()); ++mask) {
      std::vector<std::vector<Attr>> parents(m);
      for (std::size_t e = 0; e < candidates.size(); ++e) {
        if (mask >> e & 1) parents[candidates[e].second].push_back(candidates[e].first);
      }
      bool ok = true;
      for (auto& ps : parents) {
        std::sort(ps.begin(), ps.end());
        ok = ok && ps.size() <= max_parents;
      }
      if (ok) best = std::max(best, brute_bn_score(d, parents));
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

}  // namespace adtree::test
