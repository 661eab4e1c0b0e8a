#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "adtree/types.hpp"

namespace adtree {

// Per-attribute bijection between source strings and codes 1..n.
// strings[c - 1] is the string for code c.
class ValueMap {
 public:
  ValueMap() = default;
  explicit ValueMap(std::vector<std::string> strings);

  std::uint32_t size() const { return static_cast<std::uint32_t>(strings_.size()); }
  const std::string& string_of(Value code) const;
  std::optional<Value> code_of(const std::string& s) const;
  const std::vector<std::string>& strings() const { return strings_; }

  // Appends s if unseen and returns its code.
  Value intern(const std::string& s);

  friend bool operator==(const ValueMap& a, const ValueMap& b) { return a.strings_ == b.strings_; }

 private:
  std::vector<std::string> strings_;
  std::unordered_map<std::string, Value> index_;
};

// R records over M categorical attributes, stored row-major as value codes.
// Immutable once constructed.
class Dataset {
 public:
  // Validates every code against its arity. value_maps may be empty, in which
  // case each attribute gets the identity map "1".."n".
  Dataset(std::vector<std::string> names, std::vector<std::uint32_t> arities,
          std::vector<Value> codes, std::vector<ValueMap> value_maps = {});

  std::size_t num_attributes() const { return names_.size(); }
  std::size_t num_records() const { return num_records_; }
  std::uint32_t arity(Attr a) const { return arities_[a]; }
  const std::vector<std::uint32_t>& arities() const { return arities_; }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<ValueMap>& value_maps() const { return value_maps_; }
  const ValueMap& value_map(Attr a) const { return value_maps_[a]; }

  Value value(RecordIndex r, Attr a) const { return codes_[static_cast<std::size_t>(r) * names_.size() + a]; }
  std::span<const Value> row(RecordIndex r) const {
    return {codes_.data() + static_cast<std::size_t>(r) * names_.size(), names_.size()};
  }
  const std::vector<Value>& codes() const { return codes_; }

  // Throws ArgumentError for unknown names.
  Attr attribute_index(const std::string& name) const;

  // FNV-1a over M, R, arities and all codes. Used to bind saved trees to data.
  std::uint64_t checksum() const;

  friend bool operator==(const Dataset& a, const Dataset& b);

 private:
  std::vector<std::string> names_;
  std::vector<std::uint32_t> arities_;
  std::vector<Value> codes_;
  std::vector<ValueMap> value_maps_;
  std::size_t num_records_ = 0;
};

struct CsvOptions {
  char delimiter = ',';
  std::string missing_marker = "?";
  // Declared domains, keyed by attribute name. A declared attribute takes its
  // codes (and arity) from the list order; values outside it are rejected.
  std::unordered_map<std::string, std::vector<std::string>> declared_domains;
};

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});
Dataset parse_csv(const std::string& text, const CsvOptions& options = {});

void write_csv(const Dataset& d, const std::filesystem::path& path, char delimiter = ',');

// Value-map sidecar: {"attr": ["s1", "s2", ...], ...} in code order.
std::string value_maps_to_json(const Dataset& d);
std::unordered_map<std::string, std::vector<std::string>> value_maps_from_json(const std::string& json);
std::unordered_map<std::string, std::vector<std::string>> load_value_maps(const std::filesystem::path& path);

struct DatasetStats {
  std::size_t num_attributes = 0;
  std::size_t num_records = 0;
  std::vector<std::uint32_t> arities;
  // frequencies[a][c - 1] = number of records with attribute a = c.
  std::vector<std::vector<Count>> frequencies;
};

DatasetStats dataset_stats(const Dataset& d);

// Synthetic binary data from a three-kind Bayes net: triangles are Bernoulli
// (P(1) = 0.8), squares are parity functions of four triangles, circles are
// noisy copies of one parent.
struct SynthConfig {
  std::uint32_t n_triangle = 8;
  std::uint32_t n_square = 8;
  std::uint32_t n_circle = 8;
  std::uint64_t n_records = 30000;
  std::uint64_t seed = 1;
  // square_parents[s]: four distinct triangle indices. Empty = default wiring.
  std::vector<std::vector<std::uint32_t>> square_parents;
  // circle_parents[c]: global attribute index of a triangle or square. Empty = default.
  std::vector<std::uint32_t> circle_parents;

  // Fills empty wiring with the default: square s <- triangles s..s+3 (mod
  // n_triangle), circle c <- square c (mod n_square).
  SynthConfig with_default_wiring() const;
};

SynthConfig synth_config_from_json(const std::string& json, SynthConfig base = {});

Dataset synth_generate(const SynthConfig& cfg);

}  // namespace adtree
