#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "adtree/tree.hpp"

namespace adtree {

// Binary tree file, all integers little-endian:
//
//   magic      8 bytes  "ADTREE\0\0"
//   version    u32      1
//   M          u32
//   arities    u32 x M
//   R          u64
//   r_min      u32
//   data_sum   u64      Dataset::checksum() of the data the tree was built on
//   ad_nodes   u64
//   vary_nodes u64
//   root       node record (preorder, see below)
//   file_sum   u64      FNV-1a of every preceding byte
//
// node record:  u8 kind (0 expanded, 1 leaf-list), u32 count, then
//   leaf-list:  u32 x count record indices
//   expanded:   for each attribute j from the node's first attribute to M-1:
//               u16 mcv, u8 x n_j presence flags (value order), then the
//               present children's node records in value order.
//               A count-0 root (R = 0) has no body.
inline constexpr std::uint32_t kTreeFormatVersion = 1;

void save_tree(const ADTree& t, const std::filesystem::path& path);
std::string save_tree_to_bytes(const ADTree& t);

// The dataset must be the one the tree was built from (same M, arities, R and
// checksum); otherwise IntegrityError. Bad magic or version: FormatError.
ADTree load_tree(const std::filesystem::path& path, std::shared_ptr<const Dataset> data);
ADTree load_tree_from_bytes(const std::string& bytes, std::shared_ptr<const Dataset> data);

// True if the file starts with the tree magic.
bool is_tree_file(const std::filesystem::path& path);

}  // namespace adtree
