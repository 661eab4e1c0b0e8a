#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "adtree/contab.hpp"
#include "adtree/dataset.hpp"
#include "adtree/query.hpp"

namespace adtree {

// Reference counting by scanning every record. Deliberately simple.
Count linear_count(const Dataset& d, const Query& q);

ContingencyTable linear_contab(const Dataset& d, std::span<const Attr> attrs, const Query& cond = {});

inline constexpr std::uint64_t kDefaultDenseTreeCap = 10'000'000;

// The unpruned all-dimensions tree: one node per query, Vary children for
// every value. With zero pruning, nodes for zero-count queries are dropped.
// Test and reference use only; its size is prod(n_i + 1).
class DenseTree {
 public:
  static DenseTree build(const Dataset& d, bool zero_pruned, std::uint64_t cap = kDefaultDenseTreeCap);

  bool zero_pruned() const { return zero_pruned_; }
  // Number of counts held, i.e. number of nodes.
  std::uint64_t stored_counts() const { return nodes_.size(); }
  Count lookup(const Query& q) const;

 private:
  struct Node {
    std::uint32_t count;
    std::uint32_t first_attr;
    std::uint64_t slot_offset;  // children for (attr j >= first_attr, value v)
  };
  static constexpr std::int64_t kAbsent = -1;

  std::int64_t make(const Dataset& d, Attr first_attr, const std::vector<RecordIndex>& records);

  bool zero_pruned_ = false;
  std::vector<std::uint32_t> arities_;
  std::vector<std::uint64_t> attr_slot_base_;  // per first_attr: offset of attr j within a node's slot block
  std::vector<Node> nodes_;
  std::vector<std::int64_t> slots_;
};

}  // namespace adtree
