#include "adtree/tree.hpp"

#include <algorithm>
#include <chrono>
#include <string>

#include "adtree/error.hpp"

namespace adtree {

// Recursive MakeADTree / MakeVaryNode over a record-index list. MCV ties go to
// the smallest code; record sets smaller than r_min become leaf-lists.
class ADTree::Builder {
 public:
  explicit Builder(ADTree& t) : t_(t), d_(*t.dataset_), m_(d_.num_attributes()) {}

  std::uint32_t make_node(Attr first_attr, std::span<const RecordIndex> records) {
    const auto idx = static_cast<std::uint32_t>(t_.nodes_.size());
    const auto count = static_cast<std::uint32_t>(records.size());
    t_.nodes_.push_back({count, first_attr, 0, false});
    if (count == 0) return idx;
    if (count < t_.r_min_) {
      t_.nodes_[idx].leaf = true;
      t_.nodes_[idx].offset = static_cast<std::uint32_t>(t_.leaf_records_.size());
      t_.leaf_records_.insert(t_.leaf_records_.end(), records.begin(), records.end());
      return idx;
    }
    const auto vary_base = static_cast<std::uint32_t>(t_.varies_.size());
    t_.nodes_[idx].offset = vary_base;
    t_.varies_.resize(vary_base + (m_ - first_attr));

    std::vector<std::uint32_t> counts;
    std::vector<std::uint32_t> starts;
    std::vector<RecordIndex> buckets;
    for (Attr j = first_attr; j < m_; ++j) {
      const std::uint32_t arity = d_.arity(j);
      const auto child_base = static_cast<std::uint32_t>(t_.children_.size());
      t_.children_.resize(child_base + arity, kAbsent);

      counts.assign(arity + 1, 0);
      for (auto r : records) ++counts[d_.value(r, j)];
      Value mcv = 1;
      for (Value k = 2; k <= arity; ++k) {
        if (counts[k] > counts[mcv]) mcv = k;
      }
      t_.varies_[vary_base + (j - first_attr)] = {j, mcv, child_base};

      // Counting sort of the non-MCV records by value of a_j.
      starts.assign(arity + 2, 0);
      for (Value k = 1; k <= arity; ++k) starts[k + 1] = starts[k] + (k == mcv ? 0 : counts[k]);
      buckets.resize(starts[arity + 1]);
      {
        std::vector<std::uint32_t> fill(starts.begin(), starts.end());
        for (auto r : records) {
          const Value v = d_.value(r, j);
          if (v != mcv) buckets[fill[v]++] = r;
        }
      }
      for (Value k = 1; k <= arity; ++k) {
        if (k == mcv || counts[k] == 0) continue;
        const auto child = make_node(j + 1, std::span<const RecordIndex>(buckets).subspan(starts[k], counts[k]));
        t_.children_[child_base + k - 1] = static_cast<std::int32_t>(child);
      }
    }
    return idx;
  }

 private:
  ADTree& t_;
  const Dataset& d_;
  std::size_t m_;
};

ADTree ADTree::build(std::shared_ptr<const Dataset> data, std::uint32_t r_min) {
  if (!data) throw ArgumentError("build: null dataset");
  if (r_min < 1) throw ArgumentError("build: r_min must be at least 1");
  const auto t0 = std::chrono::steady_clock::now();
  ADTree t;
  t.dataset_ = std::move(data);
  t.r_min_ = r_min;
  std::vector<RecordIndex> all(t.dataset_->num_records());
  for (std::size_t r = 0; r < all.size(); ++r) all[r] = static_cast<RecordIndex>(r);
  Builder(t).make_node(0, all);
  t.build_seconds_ = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return t;
}

TreeStats ADTree::stats() const {
  TreeStats s;
  s.ad_nodes = nodes_.size();
  s.vary_nodes = varies_.size();
  s.leaf_lists = static_cast<std::uint64_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const NodeData& n) { return n.leaf; }));
  s.leaf_list_entries = leaf_records_.size();
  s.estimated_bytes = s.ad_nodes * kBytesPerAdNode + s.vary_nodes * kBytesPerVaryNode +
                      children_.size() * kBytesPerChildSlot + s.leaf_list_entries * kBytesPerLeafEntry;
  s.build_seconds = build_seconds_;
  return s;
}

namespace {

[[noreturn]] void broken(const std::string& what, std::uint32_t node) {
  throw InternalError("adtree invariant violated at node " + std::to_string(node) + ": " + what);
}

}  // namespace

void ADTree::check_invariants() const {
  const Dataset& d = *dataset_;
  const std::size_t m = d.num_attributes();
  if (nodes_.empty()) broken("no root", 0);
  if (r_min_ < 1) broken("r_min < 1", 0);
  if (nodes_[0].count != d.num_records()) broken("root count differs from R", 0);
  if (nodes_[0].first_attr != 0) broken("root must vary every attribute", 0);

  std::vector<RecordIndex> all(d.num_records());
  for (std::size_t r = 0; r < all.size(); ++r) all[r] = static_cast<RecordIndex>(r);

  std::uint64_t visited = 0;
  // records: exactly the rows matching the node's implicit query.
  auto walk = [&](auto&& self, std::uint32_t idx, const std::vector<RecordIndex>& records) -> void {
    ++visited;
    const NodeData& n = nodes_[idx];
    if (n.count != records.size()) broken("count does not match the records of its query", idx);
    if (n.count == 0) {
      if (idx != 0) broken("zero-count node below the root", idx);
      return;
    }
    const bool want_leaf = n.count < r_min_;
    if (n.leaf != want_leaf) broken("leaf-list rule violated", idx);
    if (n.leaf) {
      std::vector<RecordIndex> listed(leaf_records_.begin() + n.offset, leaf_records_.begin() + n.offset + n.count);
      std::sort(listed.begin(), listed.end());
      if (listed != records) broken("leaf-list differs from matching records", idx);
      return;
    }
    for (Attr j = n.first_attr; j < m; ++j) {
      const VaryData& v = varies_[n.offset + (j - n.first_attr)];
      if (v.attr != j) broken("vary node attribute out of sequence", idx);
      const std::uint32_t arity = d.arity(j);
      std::vector<std::vector<RecordIndex>> split(arity + 1);
      for (auto r : records) split[d.value(r, j)].push_back(r);
      if (v.mcv < 1 || v.mcv > arity) broken("mcv out of range", idx);
      if (children_[v.child_offset + v.mcv - 1] != kAbsent) broken("mcv child present", idx);
      for (Value k = 1; k <= arity; ++k) {
        if (split[k].size() > split[v.mcv].size()) broken("mcv is not a most common value", idx);
        if (split[k].size() == split[v.mcv].size() && k < v.mcv) broken("mcv tie not broken toward smallest code", idx);
        if (k == v.mcv) continue;
        const auto slot = children_[v.child_offset + k - 1];
        if (split[k].empty()) {
          if (slot != kAbsent) broken("child present for a value with no records", idx);
          continue;
        }
        if (slot == kAbsent) broken("child missing for a value with records", idx);
        if (nodes_[slot].first_attr != j + 1) broken("child varies the wrong attributes", idx);
        self(self, static_cast<std::uint32_t>(slot), split[k]);
      }
    }
  };
  walk(walk, 0, all);
  if (visited != nodes_.size()) broken("unreachable nodes in arena", 0);
}

bool operator==(const ADTree& a, const ADTree& b) {
  return a.dataset_->checksum() == b.dataset_->checksum() && a.r_min_ == b.r_min_ && a.nodes_ == b.nodes_ &&
         a.varies_ == b.varies_ && a.children_ == b.children_ && a.leaf_records_ == b.leaf_records_;
}

}  // namespace adtree
