#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "adtree/dataset.hpp"
#include "adtree/types.hpp"

namespace adtree {

inline constexpr std::uint32_t kDefaultRMin = 16;

// Size report. Counts are exact; bytes follow a fixed accounting model
// (see kBytesPer* below), not the allocator.
struct TreeStats {
  std::uint64_t ad_nodes = 0;
  std::uint64_t vary_nodes = 0;
  std::uint64_t leaf_lists = 0;
  std::uint64_t leaf_list_entries = 0;
  std::uint64_t estimated_bytes = 0;
  double build_seconds = 0.0;

  friend bool operator==(const TreeStats& a, const TreeStats& b) {
    return a.ad_nodes == b.ad_nodes && a.vary_nodes == b.vary_nodes && a.leaf_lists == b.leaf_lists &&
           a.leaf_list_entries == b.leaf_list_entries && a.estimated_bytes == b.estimated_bytes;
  }
};

inline constexpr std::uint64_t kBytesPerAdNode = 16;     // count, first attribute, body offset, body size
inline constexpr std::uint64_t kBytesPerVaryNode = 8;    // mcv, child block offset
inline constexpr std::uint64_t kBytesPerChildSlot = 4;   // one per value of the varied attribute
inline constexpr std::uint64_t kBytesPerLeafEntry = 4;   // one record index

// Sparse all-dimensions tree with most-common-value pruning and leaf-lists.
//
// Every ADnode stands for a query. An expanded ADnode owns one Vary node per
// attribute from first_attr() to M-1; the Vary node for attribute j holds a
// child ADnode for every value of j except its most common value and except
// values matching no records. ADnodes matching fewer than r_min records keep
// the list of matching record indices instead of expanding.
//
// Nodes live in flat arenas in preorder. The tree is immutable after build()
// and safe to read from any number of threads.
class ADTree {
 public:
  static constexpr std::int32_t kAbsent = -1;

  struct NodeData {
    std::uint32_t count = 0;
    std::uint32_t first_attr = 0;
    std::uint32_t offset = 0;  // first Vary node, or first leaf-list entry
    bool leaf = false;
    friend bool operator==(const NodeData&, const NodeData&) = default;
  };
  struct VaryData {
    Attr attr = 0;
    Value mcv = 0;
    std::uint32_t child_offset = 0;  // slots [child_offset, child_offset + arity)
    friend bool operator==(const VaryData&, const VaryData&) = default;
  };

  class VaryRef;

  class NodeRef {
   public:
    NodeRef(const ADTree* t, std::uint32_t index) : tree_(t), index_(index) {}
    std::uint32_t index() const { return index_; }
    Count count() const { return data().count; }
    bool is_leaf() const { return data().leaf; }
    Attr first_attr() const { return data().first_attr; }
    std::size_t num_vary() const {
      const auto& d = data();
      if (d.leaf || d.count == 0) return 0;
      return tree_->num_attributes() - d.first_attr;
    }
    // Only for leaf nodes.
    std::span<const RecordIndex> leaf_records() const {
      const auto& d = data();
      return {tree_->leaf_records_.data() + d.offset, d.leaf ? d.count : 0u};
    }
    // Vary node for attribute a; requires an expanded node and a >= first_attr().
    VaryRef vary(Attr a) const;

   private:
    const NodeData& data() const { return tree_->nodes_[index_]; }
    const ADTree* tree_;
    std::uint32_t index_;
  };

  class VaryRef {
   public:
    VaryRef(const ADTree* t, std::uint32_t index) : tree_(t), index_(index) {}
    Attr attr() const { return tree_->varies_[index_].attr; }
    Value mcv() const { return tree_->varies_[index_].mcv; }
    std::uint32_t arity() const { return tree_->dataset_->arity(attr()); }
    std::optional<NodeRef> child(Value k) const {
      const auto slot = tree_->children_[tree_->varies_[index_].child_offset + k - 1];
      if (slot == kAbsent) return std::nullopt;
      return NodeRef(tree_, static_cast<std::uint32_t>(slot));
    }

   private:
    const ADTree* tree_;
    std::uint32_t index_;
  };

  // r_min = 1 disables leaf-lists. Throws ArgumentError for r_min < 1.
  static ADTree build(std::shared_ptr<const Dataset> data, std::uint32_t r_min = kDefaultRMin);

  NodeRef root() const { return NodeRef(this, 0); }
  const Dataset& dataset() const { return *dataset_; }
  const std::shared_ptr<const Dataset>& dataset_ptr() const { return dataset_; }
  std::size_t num_attributes() const { return dataset_->num_attributes(); }
  std::uint32_t r_min() const { return r_min_; }
  double build_seconds() const { return build_seconds_; }

  TreeStats stats() const;

  // Walks the whole tree and throws InternalError on the first violated
  // structural invariant (counts, MCV slots, leaf-list rule, no zero nodes).
  void check_invariants() const;

  // Structural equality; ignores build time.
  friend bool operator==(const ADTree& a, const ADTree& b);

  // Raw arenas, exposed for serialization.
  std::span<const NodeData> node_data() const { return nodes_; }
  std::span<const VaryData> vary_data() const { return varies_; }
  std::span<const std::int32_t> child_slots() const { return children_; }
  std::span<const RecordIndex> leaf_data() const { return leaf_records_; }

 private:
  friend ADTree load_tree(const std::filesystem::path&, std::shared_ptr<const Dataset>);
  friend ADTree load_tree_from_bytes(const std::string&, std::shared_ptr<const Dataset>);
  ADTree() = default;

  class Builder;

  std::shared_ptr<const Dataset> dataset_;
  std::uint32_t r_min_ = 1;
  double build_seconds_ = 0.0;
  std::vector<NodeData> nodes_;
  std::vector<VaryData> varies_;
  std::vector<std::int32_t> children_;
  std::vector<RecordIndex> leaf_records_;
};

inline ADTree::VaryRef ADTree::NodeRef::vary(Attr a) const {
  return VaryRef(tree_, data().offset + (a - data().first_attr));
}

}  // namespace adtree
