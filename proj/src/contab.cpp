#include "adtree/contab.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "adtree/error.hpp"

namespace adtree {

namespace {

bool key_less(std::span<const Value> a, std::span<const Value> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Rows of a (sub)table whose width is tracked by the caller.
struct Rows {
  std::vector<Value> keys;
  std::vector<Count> counts;
  std::size_t size() const { return counts.size(); }
};

// Sort-and-aggregate raw tuples. Uses a dense histogram when the domain is
// small relative to the input.
Rows aggregate(std::vector<Value> tuples, std::size_t width, std::span<const std::uint32_t> arities) {
  Rows out;
  if (width == 0) {
    if (!tuples.empty()) throw InternalError("aggregate: non-empty tuples of width 0");
    return out;
  }
  const std::size_t n = tuples.size() / width;
  if (n == 0) return out;

  std::uint64_t domain = 1;
  for (auto a : arities) {
    domain *= a;
    if (domain > (std::uint64_t{1} << 20)) break;
  }
  if (domain <= 4 * n + 64) {
    std::vector<Count> hist(domain, 0);
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t idx = 0;
      for (std::size_t w = 0; w < width; ++w) idx = idx * arities[w] + (tuples[i * width + w] - 1);
      ++hist[idx];
    }
    std::vector<Value> key(width);
    for (std::uint64_t idx = 0; idx < domain; ++idx) {
      if (hist[idx] == 0) continue;
      std::uint64_t rem = idx;
      for (std::size_t w = width; w-- > 0;) {
        key[w] = static_cast<Value>(rem % arities[w] + 1);
        rem /= arities[w];
      }
      out.keys.insert(out.keys.end(), key.begin(), key.end());
      out.counts.push_back(hist[idx]);
    }
    return out;
  }

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  auto tuple = [&](std::uint32_t i) { return std::span<const Value>(tuples.data() + std::size_t{i} * width, width); };
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) { return key_less(tuple(a), tuple(b)); });
  for (std::size_t i = 0; i < n; ++i) {
    auto t = tuple(order[i]);
    if (!out.counts.empty() &&
        std::equal(t.begin(), t.end(), out.keys.end() - static_cast<std::ptrdiff_t>(width))) {
      ++out.counts.back();
    } else {
      out.keys.insert(out.keys.end(), t.begin(), t.end());
      out.counts.push_back(1);
    }
  }
  return out;
}

// a - b over sorted rows of equal width. Every row of b must exist in a with
// a count at least as large.
Rows subtract_rows(const Rows& a, const Rows& b, std::size_t width) {
  Rows out;
  out.keys.reserve(a.keys.size());
  out.counts.reserve(a.counts.size());
  auto ka = [&](std::size_t i) { return std::span<const Value>(a.keys.data() + i * width, width); };
  auto kb = [&](std::size_t i) { return std::span<const Value>(b.keys.data() + i * width, width); };
  std::size_t i = 0;
  for (std::size_t j = 0; j < b.size(); ++j) {
    while (i < a.size() && key_less(ka(i), kb(j))) {
      out.keys.insert(out.keys.end(), ka(i).begin(), ka(i).end());
      out.counts.push_back(a.counts[i]);
      ++i;
    }
    if (i == a.size() || !std::equal(ka(i).begin(), ka(i).end(), kb(j).begin()))
      throw InternalError("table subtraction: subtrahend cell missing from minuend");
    if (a.counts[i] < b.counts[j]) throw InternalError("table subtraction: negative cell");
    const Count diff = a.counts[i] - b.counts[j];
    if (diff > 0) {
      out.keys.insert(out.keys.end(), ka(i).begin(), ka(i).end());
      out.counts.push_back(diff);
    }
    ++i;
  }
  for (; i < a.size(); ++i) {
    out.keys.insert(out.keys.end(), ka(i).begin(), ka(i).end());
    out.counts.push_back(a.counts[i]);
  }
  return out;
}

// One position of a generalized table request: a free attribute (value 0)
// contributes a table dimension, a fixed one restricts to attr = value.
struct Slot {
  Attr attr;
  Value value;
};

class TableMaker {
 public:
  TableMaker(const ADTree& t, ContabStats& stats) : t_(t), d_(t.dataset()), stats_(stats) {}

  // free_arities: arities of the free slots, in order.
  Rows make(std::span<const Slot> slots, std::span<const std::uint32_t> free_arities, ADTree::NodeRef node) {
    ++stats_.calls;
    if (node.count() == 0) return {};
    if (slots.empty()) {
      ++stats_.base_calls;
      return Rows{{}, {node.count()}};
    }
    if (node.is_leaf()) return scan(slots, free_arities, node);

    const Slot s = slots.front();
    const auto rest = slots.subspan(1);
    const auto vary = node.vary(s.attr);
    const Value mcv = vary.mcv();
    const std::uint32_t arity = vary.arity();

    if (s.value != 0) {
      if (s.value != mcv) {
        auto child = vary.child(s.value);
        return child ? make(rest, free_arities, *child) : Rows{};
      }
      Rows acc = make(rest, free_arities, node);
      for (Value k = 1; k <= arity; ++k) {
        if (k == mcv) continue;
        if (auto child = vary.child(k)) acc = subtract(acc, make(rest, free_arities, *child), free_arities.size());
      }
      return acc;
    }

    const auto sub_arities = free_arities.subspan(1);
    const std::size_t sub_width = sub_arities.size();
    std::vector<Rows> parts(arity + 1);
    for (Value k = 1; k <= arity; ++k) {
      if (k == mcv) continue;
      if (auto child = vary.child(k)) parts[k] = make(rest, sub_arities, *child);
    }
    Rows mcv_rows = make(rest, sub_arities, node);
    for (Value k = 1; k <= arity; ++k) {
      if (k != mcv && parts[k].size() > 0) mcv_rows = subtract(mcv_rows, parts[k], sub_width);
    }
    parts[mcv] = std::move(mcv_rows);

    Rows out;
    for (Value k = 1; k <= arity; ++k) {
      const Rows& p = parts[k];
      for (std::size_t i = 0; i < p.size(); ++i) {
        out.keys.push_back(k);
        out.keys.insert(out.keys.end(), p.keys.begin() + static_cast<std::ptrdiff_t>(i * sub_width),
                        p.keys.begin() + static_cast<std::ptrdiff_t>((i + 1) * sub_width));
        out.counts.push_back(p.counts[i]);
      }
    }
    return out;
  }

 private:
  Rows subtract(const Rows& a, const Rows& b, std::size_t width) {
    stats_.subtracted_cells += b.size();
    return subtract_rows(a, b, width);
  }

  Rows scan(std::span<const Slot> slots, std::span<const std::uint32_t> free_arities, ADTree::NodeRef node) {
    const auto records = node.leaf_records();
    stats_.leaf_scans += records.size();
    const std::size_t width = free_arities.size();
    std::vector<Value> tuples;
    tuples.reserve(records.size() * width);
    Count matched = 0;
    for (auto r : records) {
      const auto row = d_.row(r);
      bool ok = true;
      for (const auto& s : slots) {
        if (s.value != 0 && row[s.attr] != s.value) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      ++matched;
      for (const auto& s : slots) {
        if (s.value == 0) tuples.push_back(row[s.attr]);
      }
    }
    if (width == 0) return matched ? Rows{{}, {matched}} : Rows{};
    return aggregate(std::move(tuples), width, free_arities);
  }

  const ADTree& t_;
  const Dataset& d_;
  ContabStats& stats_;
};

Count count_rec(std::span<const Term> terms, ADTree::NodeRef node, const Dataset& d) {
  if (node.count() == 0) return 0;
  if (terms.empty()) return node.count();
  if (node.is_leaf()) {
    Count c = 0;
    for (auto r : node.leaf_records()) {
      const auto row = d.row(r);
      bool ok = true;
      for (const auto& t : terms) ok = ok && row[t.attr] == t.value;
      c += ok ? 1 : 0;
    }
    return c;
  }
  const Term first = terms.front();
  const auto rest = terms.subspan(1);
  const auto vary = node.vary(first.attr);
  if (first.value != vary.mcv()) {
    auto child = vary.child(first.value);
    return child ? count_rec(rest, *child, d) : 0;
  }
  Count c = count_rec(rest, node, d);
  for (Value k = 1; k <= vary.arity(); ++k) {
    if (k == vary.mcv()) continue;
    if (auto child = vary.child(k)) {
      const Count sub = count_rec(rest, *child, d);
      if (sub > c) throw InternalError("count: MCV subtraction went negative");
      c -= sub;
    }
  }
  return c;
}

std::vector<Attr> checked_sorted_attrs(std::span<const Attr> attrs, const Dataset& d) {
  std::vector<Attr> sorted(attrs.begin(), attrs.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] >= d.num_attributes())
      throw ArgumentError("attribute index " + std::to_string(sorted[i]) + " out of range");
    if (i > 0 && sorted[i] == sorted[i - 1])
      throw ArgumentError("attribute " + std::to_string(sorted[i]) + " listed twice");
  }
  return sorted;
}

ContingencyTable run(const ADTree& t, std::span<const Attr> attrs, const Query& cond, ContabStats* stats) {
  const Dataset& d = t.dataset();
  cond.validate(d);
  auto sorted = checked_sorted_attrs(attrs, d);
  for (auto a : sorted) {
    if (cond.mentions(a)) throw ArgumentError("attribute " + d.names()[a] + " is both tabulated and conditioned on");
  }
  std::vector<Slot> slots;
  for (auto a : sorted) slots.push_back({a, 0});
  for (const auto& term : cond.terms()) slots.push_back({term.attr, term.value});
  std::sort(slots.begin(), slots.end(), [](const Slot& a, const Slot& b) { return a.attr < b.attr; });

  std::vector<std::uint32_t> arities;
  for (auto a : sorted) arities.push_back(d.arity(a));

  ContabStats local;
  Rows rows = TableMaker(t, stats ? *stats : local).make(slots, arities, t.root());
  return ContingencyTable::from_sorted(std::move(sorted), std::move(arities), cond, std::move(rows.keys),
                                       std::move(rows.counts));
}

}  // namespace

ContingencyTable::ContingencyTable(std::vector<Attr> attrs, std::vector<std::uint32_t> arities, Query condition)
    : attrs_(std::move(attrs)), arities_(std::move(arities)), condition_(std::move(condition)) {
  if (attrs_.size() != arities_.size()) throw ArgumentError("table: attribute and arity lists differ in length");
  for (std::size_t i = 1; i < attrs_.size(); ++i) {
    if (attrs_[i] <= attrs_[i - 1]) throw ArgumentError("table: attributes must be strictly ascending");
  }
}

ContingencyTable ContingencyTable::from_sorted(std::vector<Attr> attrs, std::vector<std::uint32_t> arities,
                                               Query condition, std::vector<Value> keys, std::vector<Count> counts) {
  ContingencyTable ct(std::move(attrs), std::move(arities), std::move(condition));
  const std::size_t w = ct.width();
  if (keys.size() != counts.size() * w) throw InternalError("table: key array does not match row count");
  if (w == 0 && counts.size() > 1) throw InternalError("table: zero-width table with several cells");
  ct.keys_ = std::move(keys);
  ct.counts_ = std::move(counts);
  for (std::size_t i = 0; i < ct.size(); ++i) {
    if (ct.counts_[i] == 0) throw InternalError("table: stored zero cell");
    for (std::size_t j = 0; j < w; ++j) {
      const Value v = ct.keys_[i * w + j];
      if (v < 1 || v > ct.arities_[j]) throw InternalError("table: cell value out of range");
    }
    if (i > 0 && !key_less(ct.key(i - 1), ct.key(i))) throw InternalError("table: rows not in strict odometer order");
  }
  return ct;
}

Count ContingencyTable::at(std::span<const Value> tuple) const {
  if (tuple.size() != width()) throw ArgumentError("table lookup: tuple has the wrong length");
  std::size_t lo = 0, hi = size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (key_less(key(mid), tuple)) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo < size() && std::equal(tuple.begin(), tuple.end(), key(lo).begin())) return counts_[lo];
  return 0;
}

Count ContingencyTable::total() const { return std::accumulate(counts_.begin(), counts_.end(), Count{0}); }

Count count(const ADTree& t, const Query& q) {
  q.validate(t.dataset());
  return count_rec(q.terms(), t.root(), t.dataset());
}

ContingencyTable make_contab(const ADTree& t, std::span<const Attr> attrs, ContabStats* stats) {
  return run(t, attrs, Query{}, stats);
}

ContingencyTable make_contab_conditional(const ADTree& t, std::span<const Attr> attrs, const Query& cond,
                                         ContabStats* stats) {
  return run(t, attrs, cond, stats);
}

ContingencyTable ct_subtract(const ContingencyTable& a, const ContingencyTable& b) {
  if (a.attrs() != b.attrs()) throw ArgumentError("ct_subtract: tables cover different attributes");
  Rows ra{a.keys(), a.counts()};
  Rows rb{b.keys(), b.counts()};
  Rows diff = subtract_rows(ra, rb, a.width());
  return ContingencyTable::from_sorted(a.attrs(), a.arities(), a.condition(), std::move(diff.keys),
                                       std::move(diff.counts));
}

std::vector<Count> ct_to_dense(const ContingencyTable& ct, std::uint64_t cap) {
  std::uint64_t cells = 1;
  for (auto a : ct.arities()) {
    if (a != 0 && cells > cap / a) throw SizeError("dense table exceeds cap of " + std::to_string(cap) + " cells");
    cells *= a;
  }
  if (cells > cap) throw SizeError("dense table exceeds cap of " + std::to_string(cap) + " cells");
  std::vector<Count> dense(cells, 0);
  for (std::size_t i = 0; i < ct.size(); ++i) {
    std::uint64_t idx = 0;
    const auto k = ct.key(i);
    for (std::size_t w = 0; w < ct.width(); ++w) idx = idx * ct.arities()[w] + (k[w] - 1);
    dense[idx] = ct.count(i);
  }
  return dense;
}

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) throw SizeError("contab cost overflows 64 bits");
  return r;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  if (__builtin_add_overflow(a, b, &r)) throw SizeError("contab cost overflows 64 bits");
  return r;
}

std::uint64_t checked_pow(std::uint64_t k, std::uint64_t e) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < e; ++i) r = checked_mul(r, k);
  return r;
}

}  // namespace

std::uint64_t contab_cost(std::uint64_t n, std::uint64_t k) {
  if (k < 2) throw ArgumentError("contab_cost: arity must be at least 2");
  if (n == 0) return 1;
  return checked_mul(checked_add(1, checked_mul(n, k - 1)), checked_pow(k, n - 1));
}

std::uint64_t contab_cost_recurrence(std::uint64_t n, std::uint64_t k) {
  if (k < 2) throw ArgumentError("contab_cost: arity must be at least 2");
  std::uint64_t c = 1;
  for (std::uint64_t i = 1; i <= n; ++i) c = checked_add(checked_mul(k, c), checked_mul(k - 1, checked_pow(k, i - 1)));
  return c;
}

ContingencyTable tabulate(std::vector<Attr> attrs, std::vector<std::uint32_t> arities, Query condition,
                          std::vector<Value> tuples) {
  const std::size_t w = attrs.size();
  Rows rows = aggregate(std::move(tuples), w, arities);
  return ContingencyTable::from_sorted(std::move(attrs), std::move(arities), std::move(condition),
                                       std::move(rows.keys), std::move(rows.counts));
}

}  // namespace adtree
