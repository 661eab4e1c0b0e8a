#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "adtree/query.hpp"
#include "adtree/tree.hpp"
#include "adtree/types.hpp"

namespace adtree {

// Sparse contingency table over an ascending list of attributes. Rows are
// full value tuples kept in odometer order (last attribute fastest); only
// positive counts are stored.
class ContingencyTable {
 public:
  ContingencyTable() = default;
  ContingencyTable(std::vector<Attr> attrs, std::vector<std::uint32_t> arities, Query condition = {});

  // keys holds size() tuples of attrs.size() codes each, strictly increasing
  // in odometer order; every count positive. Checked.
  static ContingencyTable from_sorted(std::vector<Attr> attrs, std::vector<std::uint32_t> arities, Query condition,
                                      std::vector<Value> keys, std::vector<Count> counts);

  const std::vector<Attr>& attrs() const { return attrs_; }
  const std::vector<std::uint32_t>& arities() const { return arities_; }
  const Query& condition() const { return condition_; }
  std::size_t width() const { return attrs_.size(); }
  std::size_t size() const { return counts_.size(); }
  bool empty() const { return counts_.empty(); }

  std::span<const Value> key(std::size_t i) const { return {keys_.data() + i * width(), width()}; }
  Count count(std::size_t i) const { return counts_[i]; }
  const std::vector<Value>& keys() const { return keys_; }
  const std::vector<Count>& counts() const { return counts_; }

  // 0 for tuples not stored.
  Count at(std::span<const Value> tuple) const;
  Count total() const;

  friend bool operator==(const ContingencyTable& a, const ContingencyTable& b) {
    return a.attrs_ == b.attrs_ && a.keys_ == b.keys_ && a.counts_ == b.counts_;
  }

 private:
  std::vector<Attr> attrs_;
  std::vector<std::uint32_t> arities_;
  Query condition_;
  std::vector<Value> keys_;
  std::vector<Count> counts_;
};

// Work counters for one table construction.
struct ContabStats {
  std::uint64_t calls = 0;             // recursive MakeContab invocations
  std::uint64_t base_calls = 0;        // invocations with no attributes left
  std::uint64_t subtracted_cells = 0;  // cells of subtrahend tables consumed by MCV subtraction
  std::uint64_t leaf_scans = 0;        // leaf-list records scanned
};

// C(q) by descending the tree, recovering MCV branches by subtraction.
// Throws QueryError if q does not fit the tree's schema.
Count count(const ADTree& t, const Query& q);

// ct(attrs). attrs may be unsorted; ArgumentError on duplicates or attributes
// out of range.
ContingencyTable make_contab(const ADTree& t, std::span<const Attr> attrs, ContabStats* stats = nullptr);

// ct(attrs | cond). attrs must not mention cond's attributes.
ContingencyTable make_contab_conditional(const ADTree& t, std::span<const Attr> attrs, const Query& cond,
                                         ContabStats* stats = nullptr);

// Cellwise a - b with zeros dropped. ArgumentError on different attribute
// lists; InternalError if any cell would go negative.
ContingencyTable ct_subtract(const ContingencyTable& a, const ContingencyTable& b);

inline constexpr std::uint64_t kDefaultDenseCap = 1'000'000;

// All prod(arities) cells in odometer order, zeros included. SizeError above cap.
std::vector<Count> ct_to_dense(const ContingencyTable& ct, std::uint64_t cap = kDefaultDenseCap);

// Worst-case table cost for n attributes of arity k: 1 for n = 0, otherwise
// (1 + n(k-1)) k^(n-1). ArgumentError for k < 2, SizeError on overflow.
std::uint64_t contab_cost(std::uint64_t n, std::uint64_t k);
// The recurrence C(0) = 1, C(n) = k C(n-1) + (k-1) k^(n-1), evaluated directly.
std::uint64_t contab_cost_recurrence(std::uint64_t n, std::uint64_t k);

// Sorts and aggregates raw tuples (width codes each) into a table.
ContingencyTable tabulate(std::vector<Attr> attrs, std::vector<std::uint32_t> arities, Query condition,
                          std::vector<Value> tuples);

}  // namespace adtree
