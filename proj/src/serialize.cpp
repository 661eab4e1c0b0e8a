#include "adtree/serialize.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include "adtree/error.hpp"

namespace adtree {

namespace {

constexpr char kMagic[8] = {'A', 'D', 'T', 'R', 'E', 'E', '\0', '\0'};

std::uint64_t fnv1a(const char* data, std::size_t n) {
  std::uint64_t h = 14695981039346656037ull;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= static_cast<unsigned char>(data[i]);
    h *= 1099511628211ull;
  }
  return h;
}

class Writer {
 public:
  template <typename T>
  void put(T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i) buf_.push_back(static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xff));
  }
  void raw(const char* p, std::size_t n) { buf_.append(p, n); }
  std::string& buffer() { return buf_; }

 private:
  std::string buf_;
};

class Reader {
 public:
  Reader(const std::string& s, std::size_t end) : s_(s), end_(end) {}
  template <typename T>
  T get() {
    if (pos_ + sizeof(T) > end_) throw IntegrityError("tree file truncated");
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(s_[pos_ + i])) << (8 * i);
    pos_ += sizeof(T);
    return static_cast<T>(v);
  }
  std::size_t pos() const { return pos_; }

 private:
  const std::string& s_;
  std::size_t end_;
  std::size_t pos_ = 0;
};

void write_node(Writer& w, ADTree::NodeRef n, const Dataset& d) {
  w.put<std::uint8_t>(n.is_leaf() ? 1 : 0);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(n.count()));
  if (n.is_leaf()) {
    for (auto r : n.leaf_records()) w.put<std::uint32_t>(r);
    return;
  }
  if (n.count() == 0) return;
  for (Attr j = n.first_attr(); j < d.num_attributes(); ++j) {
    const auto vary = n.vary(j);
    w.put<std::uint16_t>(vary.mcv());
    for (Value k = 1; k <= d.arity(j); ++k) w.put<std::uint8_t>(vary.child(k) ? 1 : 0);
    for (Value k = 1; k <= d.arity(j); ++k) {
      if (auto c = vary.child(k)) write_node(w, *c, d);
    }
  }
}

}  // namespace

std::string save_tree_to_bytes(const ADTree& t) {
  const Dataset& d = t.dataset();
  const auto st = t.stats();
  Writer w;
  w.raw(kMagic, sizeof kMagic);
  w.put<std::uint32_t>(kTreeFormatVersion);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(d.num_attributes()));
  for (auto a : d.arities()) w.put<std::uint32_t>(a);
  w.put<std::uint64_t>(d.num_records());
  w.put<std::uint32_t>(t.r_min());
  w.put<std::uint64_t>(d.checksum());
  w.put<std::uint64_t>(st.ad_nodes);
  w.put<std::uint64_t>(st.vary_nodes);
  write_node(w, t.root(), d);
  const auto sum = fnv1a(w.buffer().data(), w.buffer().size());
  w.put<std::uint64_t>(sum);
  return std::move(w.buffer());
}

void save_tree(const ADTree& t, const std::filesystem::path& path) {
  const auto bytes = save_tree_to_bytes(t);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write '" + path.string() + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FormatError("write to '" + path.string() + "' failed");
}

ADTree load_tree_from_bytes(const std::string& bytes, std::shared_ptr<const Dataset> data) {
  if (!data) throw ArgumentError("load_tree: null dataset");
  const Dataset& d = *data;
  if (bytes.size() < sizeof kMagic + 4 || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0)
    throw FormatError("not an adtree file");
  {
    // Version precedes the checksum so newer layouts are reported as such.
    std::uint32_t version = 0;
    for (int i = 0; i < 4; ++i)
      version |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[sizeof kMagic + i])) << (8 * i);
    if (version != kTreeFormatVersion) throw FormatError("unsupported tree file version " + std::to_string(version));
  }
  if (bytes.size() < 8 + sizeof kMagic + 4) throw IntegrityError("tree file truncated");
  const std::size_t body_end = bytes.size() - 8;
  {
    // The file checksum sits in the last 8 bytes.
    std::uint64_t stored = 0;
    for (int i = 0; i < 8; ++i) stored |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[body_end + i])) << (8 * i);
    if (stored != fnv1a(bytes.data(), body_end)) throw IntegrityError("tree file checksum mismatch (corrupt file)");
  }
  Reader r(bytes, body_end);
  for (std::size_t i = 0; i < sizeof kMagic; ++i) r.get<std::uint8_t>();
  r.get<std::uint32_t>();
  const auto m = r.get<std::uint32_t>();
  if (m != d.num_attributes()) throw IntegrityError("tree was built for " + std::to_string(m) + " attributes, dataset has " + std::to_string(d.num_attributes()));
  for (std::uint32_t a = 0; a < m; ++a) {
    if (r.get<std::uint32_t>() != d.arity(a)) throw IntegrityError("arity of '" + d.names()[a] + "' differs from the saved tree");
  }
  const auto rec = r.get<std::uint64_t>();
  if (rec != d.num_records()) throw IntegrityError("tree was built for R = " + std::to_string(rec) + ", dataset has R = " + std::to_string(d.num_records()));
  const auto r_min = r.get<std::uint32_t>();
  if (r_min < 1) throw IntegrityError("saved r_min is 0");
  if (r.get<std::uint64_t>() != d.checksum()) throw IntegrityError("dataset checksum differs from the saved tree");
  const auto n_ad = r.get<std::uint64_t>();
  const auto n_vary = r.get<std::uint64_t>();

  ADTree t;
  t.dataset_ = std::move(data);
  t.r_min_ = r_min;
  t.nodes_.reserve(n_ad);
  t.varies_.reserve(n_vary);

  // Mirrors ADTree::Builder allocation order so arenas come out identical.
  auto read_node = [&](auto&& self, Attr first_attr) -> std::uint32_t {
    const auto kind = r.get<std::uint8_t>();
    const auto count = r.get<std::uint32_t>();
    if (kind > 1) throw IntegrityError("bad node kind in tree file");
    const auto idx = static_cast<std::uint32_t>(t.nodes_.size());
    t.nodes_.push_back({count, first_attr, 0, kind == 1});
    if (kind == 1) {
      t.nodes_[idx].offset = static_cast<std::uint32_t>(t.leaf_records_.size());
      for (std::uint32_t i = 0; i < count; ++i) {
        const auto rec_idx = r.get<std::uint32_t>();
        if (rec_idx >= d.num_records()) throw IntegrityError("leaf-list entry out of range");
        t.leaf_records_.push_back(rec_idx);
      }
      return idx;
    }
    if (count == 0) return idx;
    const auto vary_base = static_cast<std::uint32_t>(t.varies_.size());
    t.nodes_[idx].offset = vary_base;
    t.varies_.resize(vary_base + (m - first_attr));
    for (Attr j = first_attr; j < m; ++j) {
      const std::uint32_t arity = d.arity(j);
      const auto child_base = static_cast<std::uint32_t>(t.children_.size());
      t.children_.resize(child_base + arity, ADTree::kAbsent);
      const auto mcv = r.get<std::uint16_t>();
      if (mcv < 1 || mcv > arity) throw IntegrityError("mcv out of range in tree file");
      t.varies_[vary_base + (j - first_attr)] = {j, mcv, child_base};
      std::vector<bool> present(arity + 1, false);
      for (Value k = 1; k <= arity; ++k) present[k] = r.get<std::uint8_t>() != 0;
      for (Value k = 1; k <= arity; ++k) {
        if (!present[k]) continue;
        const auto child = self(self, j + 1);
        t.children_[child_base + k - 1] = static_cast<std::int32_t>(child);
      }
    }
    return idx;
  };
  read_node(read_node, 0);
  if (r.pos() != body_end) throw IntegrityError("trailing bytes in tree file");
  if (t.nodes_.size() != n_ad || t.varies_.size() != n_vary) throw IntegrityError("node counts differ from header");
  return t;
}

ADTree load_tree(const std::filesystem::path& path, std::shared_ptr<const Dataset> data) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_tree_from_bytes(ss.str(), std::move(data));
}

bool is_tree_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  char head[sizeof kMagic] = {};
  if (!in.read(head, sizeof head)) return false;
  return std::memcmp(head, kMagic, sizeof kMagic) == 0;
}

}  // namespace adtree
