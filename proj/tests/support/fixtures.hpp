#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "adtree/contab.hpp"
#include "adtree/dataset.hpp"
#include "adtree/query.hpp"

namespace adtree::test {

std::filesystem::path data_path(const std::string& name);

// The six-record, three-attribute example with arities (2, 4, 2).
std::shared_ptr<const Dataset> toy();

struct RandomSpec {
  std::size_t m = 4;
  std::size_t r = 100;
  std::uint32_t max_arity = 3;
  double skew = 1.0;         // weight of value v is skew^(v-1); 1 is uniform
  double correlation = 0.0;  // chance a cell copies the previous attribute's code
};

Dataset random_dataset(std::mt19937_64& rng, const RandomSpec& spec);

// A spec with M, R, arities and skew drawn from the given ranges.
RandomSpec random_spec(std::mt19937_64& rng, std::size_t max_m, std::size_t max_r, std::uint32_t max_arity);

// All 2^m binary records, then `padding` constant arity-1 columns.
Dataset all_binary_records(std::size_t m, std::size_t padding = 0);

// Every query over d: prod(n_i + 1) of them.
std::vector<Query> all_queries(const Dataset& d);

Query random_query(std::mt19937_64& rng, const Dataset& d);

// ---- brute-force oracles, written independently of the library ----

using Cells = std::map<std::vector<Value>, Count>;

Count brute_count(const Dataset& d, const std::vector<std::pair<Attr, Value>>& terms);

// Nonzero cells keyed by value tuple in ascending-attribute order.
Cells brute_table(const Dataset& d, std::vector<Attr> attrs, const std::vector<std::pair<Attr, Value>>& cond = {});

Cells cells_of(const ContingencyTable& ct);

// Information gain in bits from entropies over the raw records.
double brute_info_gain(const Dataset& d, Attr out, const std::vector<Attr>& inputs);

// Penalized log-likelihood with natural logs, from per-record probabilities.
double brute_bn_score(const Dataset& d, const std::vector<std::vector<Attr>>& parents);

// Best score over every network consistent with some attribute order.
double brute_best_bn_score(const Dataset& d, std::size_t max_parents = 8);

}  // namespace adtree::test
