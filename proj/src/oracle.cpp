#include "adtree/oracle.hpp"

#include <algorithm>
#include <string>

#include "adtree/error.hpp"

namespace adtree {

Count linear_count(const Dataset& d, const Query& q) {
  q.validate(d);
  Count c = 0;
  for (std::size_t r = 0; r < d.num_records(); ++r) c += q.matches(d.row(static_cast<RecordIndex>(r))) ? 1 : 0;
  return c;
}

ContingencyTable linear_contab(const Dataset& d, std::span<const Attr> attrs, const Query& cond) {
  cond.validate(d);
  std::vector<Attr> sorted(attrs.begin(), attrs.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] >= d.num_attributes()) throw ArgumentError("attribute index out of range");
    if (i > 0 && sorted[i] == sorted[i - 1]) throw ArgumentError("attribute listed twice");
    if (cond.mentions(sorted[i])) throw ArgumentError("attribute both tabulated and conditioned on");
  }
  std::vector<std::uint32_t> arities;
  for (auto a : sorted) arities.push_back(d.arity(a));

  std::vector<Value> tuples;
  Count matched = 0;
  for (std::size_t r = 0; r < d.num_records(); ++r) {
    const auto row = d.row(static_cast<RecordIndex>(r));
    if (!cond.matches(row)) continue;
    ++matched;
    for (auto a : sorted) tuples.push_back(row[a]);
  }
  if (sorted.empty()) {
    std::vector<Count> counts;
    if (matched) counts.push_back(matched);
    return ContingencyTable::from_sorted({}, {}, cond, {}, std::move(counts));
  }
  return tabulate(std::move(sorted), std::move(arities), cond, std::move(tuples));
}

DenseTree DenseTree::build(const Dataset& d, bool zero_pruned, std::uint64_t cap) {
  const std::size_t m = d.num_attributes();
  std::uint64_t nodes = 1;
  for (std::size_t a = 0; a < m; ++a) {
    const std::uint64_t f = d.arity(static_cast<Attr>(a)) + 1;
    if (nodes > cap / f) throw SizeError("dense tree exceeds cap of " + std::to_string(cap) + " nodes");
    nodes *= f;
  }
  DenseTree t;
  t.zero_pruned_ = zero_pruned;
  t.arities_ = d.arities();
  // attr_slot_base_[j] = sum of arities of attributes before j.
  t.attr_slot_base_.assign(m + 1, 0);
  for (std::size_t a = 0; a < m; ++a) t.attr_slot_base_[a + 1] = t.attr_slot_base_[a] + t.arities_[a];
  std::vector<RecordIndex> all(d.num_records());
  for (std::size_t r = 0; r < all.size(); ++r) all[r] = static_cast<RecordIndex>(r);
  t.make(d, 0, all);
  return t;
}

std::int64_t DenseTree::make(const Dataset& d, Attr first_attr, const std::vector<RecordIndex>& records) {
  if (zero_pruned_ && records.empty()) return kAbsent;
  const auto idx = static_cast<std::int64_t>(nodes_.size());
  const std::size_t m = d.num_attributes();
  const std::uint64_t block = attr_slot_base_[m] - attr_slot_base_[first_attr];
  const std::uint64_t offset = slots_.size();
  nodes_.push_back({static_cast<std::uint32_t>(records.size()), first_attr, offset});
  slots_.resize(offset + block, kAbsent);
  for (Attr j = first_attr; j < m; ++j) {
    std::vector<std::vector<RecordIndex>> split(arities_[j] + 1);
    for (auto r : records) split[d.value(r, j)].push_back(r);
    for (Value v = 1; v <= arities_[j]; ++v) {
      const auto child = make(d, j + 1, split[v]);
      slots_[offset + (attr_slot_base_[j] - attr_slot_base_[first_attr]) + (v - 1)] = child;
    }
  }
  return idx;
}

Count DenseTree::lookup(const Query& q) const {
  for (const auto& t : q.terms()) {
    if (t.attr >= arities_.size() || t.value < 1 || t.value > arities_[t.attr]) throw QueryError("query outside schema");
  }
  // Zero-pruned tree of an empty dataset has no root.
  if (nodes_.empty()) return 0;
  std::int64_t node = 0;
  for (const auto& t : q.terms()) {
    const Node& n = nodes_[static_cast<std::size_t>(node)];
    node = slots_[n.slot_offset + (attr_slot_base_[t.attr] - attr_slot_base_[n.first_attr]) + (t.value - 1)];
    if (node == kAbsent) return 0;
  }
  return nodes_[static_cast<std::size_t>(node)].count;
}

}  // namespace adtree
