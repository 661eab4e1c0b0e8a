#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "adtree/contab.hpp"

namespace adtree::detail {

// Rows of a table sharing the same codes everywhere except at one position.
struct RowGroup {
  std::vector<Value> key;                         // codes without the split position
  std::vector<std::pair<Value, Count>> entries;   // (code at split position, count), ascending code
  Count total = 0;
};

// Groups in odometer order of the reduced key.
inline std::vector<RowGroup> group_rows(const ContingencyTable& ct, std::size_t split) {
  const std::size_t w = ct.width();
  auto reduced_less = [&](std::size_t a, std::size_t b) {
    const auto ka = ct.key(a), kb = ct.key(b);
    for (std::size_t i = 0; i < w; ++i) {
      if (i == split) continue;
      if (ka[i] != kb[i]) return ka[i] < kb[i];
    }
    return ka[split] < kb[split];
  };
  std::vector<std::size_t> order(ct.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), reduced_less);

  std::vector<RowGroup> groups;
  for (auto i : order) {
    const auto k = ct.key(i);
    std::vector<Value> reduced;
    reduced.reserve(w - 1);
    for (std::size_t p = 0; p < w; ++p) {
      if (p != split) reduced.push_back(k[p]);
    }
    if (groups.empty() || groups.back().key != reduced) groups.push_back({std::move(reduced), {}, 0});
    groups.back().entries.emplace_back(k[split], ct.count(i));
    groups.back().total += ct.count(i);
  }
  return groups;
}

// Table attributes = attrs plus target, sorted; returns target's position.
inline std::size_t position_of(const std::vector<Attr>& sorted, Attr target) {
  return static_cast<std::size_t>(std::find(sorted.begin(), sorted.end(), target) - sorted.begin());
}

}  // namespace adtree::detail
