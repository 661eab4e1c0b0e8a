#include "adtree/dataset.hpp"

#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "adtree/error.hpp"

namespace adtree {

namespace {

constexpr std::uint64_t kFnvOffset = 14695981039346656037ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

void fnv_mix(std::uint64_t& h, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) {
    h ^= (v >> (8 * i)) & 0xffu;
    h *= kFnvPrime;
  }
}

// RFC-4180 tokenizer: quoted fields, doubled quotes, CRLF or LF line ends.
// Returns rows; a trailing newline does not produce an empty row.
std::vector<std::vector<std::string>> tokenize_csv(const std::string& text, char delim) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  const std::size_t n = text.size();
  for (std::size_t i = 0; i < n; ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < n && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && field.empty()) {
      in_quotes = true;
      field_started = true;
    } else if (c == delim) {
      row.push_back(std::move(field));
      field.clear();
      field_started = true;
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < n && text[i + 1] == '\n') ++i;
      if (field_started || !field.empty() || !row.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      } else {
        rows.emplace_back();  // blank line, rejected later with its row number
      }
      row.clear();
      field.clear();
      field_started = false;
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
  if (in_quotes) throw FormatError("csv: unterminated quoted field");
  if (field_started || !field.empty() || !row.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

ValueMap::ValueMap(std::vector<std::string> strings) : strings_(std::move(strings)) {
  if (strings_.size() > kMaxArity) throw FormatError("value map exceeds maximum arity");
  for (std::size_t i = 0; i < strings_.size(); ++i) {
    if (!index_.emplace(strings_[i], static_cast<Value>(i + 1)).second)
      throw FormatError("value map lists '" + strings_[i] + "' twice");
  }
}

const std::string& ValueMap::string_of(Value code) const {
  if (code < 1 || code > strings_.size()) throw QueryError("value code " + std::to_string(code) + " out of range");
  return strings_[code - 1];
}

std::optional<Value> ValueMap::code_of(const std::string& s) const {
  auto it = index_.find(s);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Value ValueMap::intern(const std::string& s) {
  auto it = index_.find(s);
  if (it != index_.end()) return it->second;
  if (strings_.size() >= kMaxArity) throw FormatError("attribute exceeds maximum arity");
  strings_.push_back(s);
  const auto code = static_cast<Value>(strings_.size());
  index_.emplace(s, code);
  return code;
}

Dataset::Dataset(std::vector<std::string> names, std::vector<std::uint32_t> arities, std::vector<Value> codes,
                 std::vector<ValueMap> value_maps)
    : names_(std::move(names)), arities_(std::move(arities)), codes_(std::move(codes)), value_maps_(std::move(value_maps)) {
  const std::size_t m = names_.size();
  if (m == 0) throw FormatError("dataset needs at least one attribute");
  if (arities_.size() != m) throw FormatError("arity list length differs from attribute count");
  if (codes_.size() % m != 0) throw FormatError("code array is not a whole number of records");
  num_records_ = codes_.size() / m;
  if (num_records_ > std::numeric_limits<RecordIndex>::max()) throw FormatError("too many records");
  for (std::size_t a = 0; a < m; ++a) {
    if (arities_[a] > kMaxArity) throw FormatError("arity of '" + names_[a] + "' exceeds maximum");
    if (arities_[a] == 0 && num_records_ > 0) throw FormatError("attribute '" + names_[a] + "' has arity 0");
  }
  for (std::size_t i = 0; i < codes_.size(); ++i) {
    const std::size_t a = i % m;
    if (codes_[i] < 1 || codes_[i] > arities_[a])
      throw FormatError("record " + std::to_string(i / m) + ": code " + std::to_string(codes_[i]) +
                        " outside 1.." + std::to_string(arities_[a]) + " for '" + names_[a] + "'");
  }
  if (value_maps_.empty()) {
    value_maps_.reserve(m);
    for (std::size_t a = 0; a < m; ++a) {
      std::vector<std::string> s;
      for (std::uint32_t c = 1; c <= arities_[a]; ++c) s.push_back(std::to_string(c));
      value_maps_.emplace_back(std::move(s));
    }
  }
  if (value_maps_.size() != m) throw FormatError("value map count differs from attribute count");
  for (std::size_t a = 0; a < m; ++a) {
    if (value_maps_[a].size() != arities_[a])
      throw FormatError("value map of '" + names_[a] + "' is not a bijection onto 1..arity");
  }
  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (!seen.insert(n).second) throw FormatError("duplicate attribute name '" + n + "'");
  }
}

Attr Dataset::attribute_index(const std::string& name) const {
  for (std::size_t a = 0; a < names_.size(); ++a) {
    if (names_[a] == name) return static_cast<Attr>(a);
  }
  throw ArgumentError("unknown attribute '" + name + "'");
}

std::uint64_t Dataset::checksum() const {
  std::uint64_t h = kFnvOffset;
  fnv_mix(h, names_.size(), 8);
  fnv_mix(h, num_records_, 8);
  for (auto n : arities_) fnv_mix(h, n, 4);
  for (auto c : codes_) fnv_mix(h, c, 2);
  return h;
}

bool operator==(const Dataset& a, const Dataset& b) {
  return a.names_ == b.names_ && a.arities_ == b.arities_ && a.codes_ == b.codes_ && a.value_maps_ == b.value_maps_;
}

Dataset parse_csv(const std::string& text, const CsvOptions& options) {
  auto rows = tokenize_csv(text, options.delimiter);
  while (rows.size() > 1 && rows.back().empty()) rows.pop_back();
  if (rows.empty() || (rows.size() == 1 && rows[0].empty())) throw FormatError("csv: empty file");
  const auto& header = rows[0];
  const std::size_t m = header.size();
  if (m == 0 || (m == 1 && header[0].empty())) throw FormatError("csv: empty header");

  std::vector<ValueMap> maps(m);
  std::vector<bool> declared(m, false);
  for (std::size_t a = 0; a < m; ++a) {
    auto it = options.declared_domains.find(header[a]);
    if (it != options.declared_domains.end()) {
      maps[a] = ValueMap(it->second);
      declared[a] = true;
    }
  }

  std::vector<Value> codes;
  codes.reserve((rows.size() - 1) * m);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    // Row numbers are 1-based file lines, header = line 1.
    if (row.size() != m)
      throw FormatError("csv: row " + std::to_string(r + 1) + " has " + std::to_string(row.size()) +
                        " fields, expected " + std::to_string(m));
    for (std::size_t a = 0; a < m; ++a) {
      const auto& s = row[a];
      if (!options.missing_marker.empty() && s == options.missing_marker)
        throw FormatError("csv: row " + std::to_string(r + 1) + ": missing value in '" + header[a] + "'");
      if (declared[a]) {
        auto code = maps[a].code_of(s);
        if (!code)
          throw FormatError("csv: row " + std::to_string(r + 1) + ": '" + s + "' is not in the declared domain of '" +
                            header[a] + "'");
        codes.push_back(*code);
      } else {
        codes.push_back(maps[a].intern(s));
      }
    }
  }
  std::vector<std::uint32_t> arities(m);
  for (std::size_t a = 0; a < m; ++a) arities[a] = maps[a].size();
  return Dataset(header, std::move(arities), std::move(codes), std::move(maps));
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str(), options);
}

namespace {

std::string csv_field(const std::string& s, char delim) {
  if (s.find_first_of(std::string{delim, '"', '\n', '\r'}) == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

void write_csv(const Dataset& d, const std::filesystem::path& path, char delimiter) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write '" + path.string() + "'");
  const std::size_t m = d.num_attributes();
  for (std::size_t a = 0; a < m; ++a) out << (a ? std::string(1, delimiter) : "") << csv_field(d.names()[a], delimiter);
  out << '\n';
  for (std::size_t r = 0; r < d.num_records(); ++r) {
    for (std::size_t a = 0; a < m; ++a) {
      if (a) out << delimiter;
      out << csv_field(d.value_map(static_cast<Attr>(a)).string_of(d.value(static_cast<RecordIndex>(r), static_cast<Attr>(a))),
                       delimiter);
    }
    out << '\n';
  }
}

std::string value_maps_to_json(const Dataset& d) {
  // ordered_json keeps column order in the document.
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (std::size_t a = 0; a < d.num_attributes(); ++a) j[d.names()[a]] = d.value_map(static_cast<Attr>(a)).strings();
  return j.dump(2);
}

std::unordered_map<std::string, std::vector<std::string>> value_maps_from_json(const std::string& json) {
  std::unordered_map<std::string, std::vector<std::string>> out;
  try {
    auto j = nlohmann::json::parse(json);
    if (!j.is_object()) throw FormatError("value map: expected a JSON object");
    for (auto& [k, v] : j.items()) out[k] = v.get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("value map: ") + e.what());
  }
  return out;
}

std::unordered_map<std::string, std::vector<std::string>> load_value_maps(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return value_maps_from_json(ss.str());
}

DatasetStats dataset_stats(const Dataset& d) {
  DatasetStats s;
  s.num_attributes = d.num_attributes();
  s.num_records = d.num_records();
  s.arities = d.arities();
  s.frequencies.resize(s.num_attributes);
  for (std::size_t a = 0; a < s.num_attributes; ++a) s.frequencies[a].assign(s.arities[a], 0);
  for (std::size_t r = 0; r < s.num_records; ++r) {
    auto row = d.row(static_cast<RecordIndex>(r));
    for (std::size_t a = 0; a < s.num_attributes; ++a) ++s.frequencies[a][row[a] - 1];
  }
  return s;
}

SynthConfig SynthConfig::with_default_wiring() const {
  SynthConfig c = *this;
  if (c.square_parents.empty() && c.n_square > 0) {
    if (c.n_triangle < 4) throw ConfigError("synth: squares need at least 4 triangles");
    for (std::uint32_t s = 0; s < c.n_square; ++s) {
      std::vector<std::uint32_t> p;
      for (std::uint32_t i = 0; i < 4; ++i) p.push_back((s + i) % c.n_triangle);
      c.square_parents.push_back(std::move(p));
    }
  }
  if (c.circle_parents.empty() && c.n_circle > 0) {
    for (std::uint32_t i = 0; i < c.n_circle; ++i) {
      if (c.n_square > 0) {
        c.circle_parents.push_back(c.n_triangle + i % c.n_square);
      } else if (c.n_triangle > 0) {
        c.circle_parents.push_back(i % c.n_triangle);
      } else {
        throw ConfigError("synth: circles need a triangle or square parent");
      }
    }
  }
  return c;
}

SynthConfig synth_config_from_json(const std::string& json, SynthConfig base) {
  try {
    auto j = nlohmann::json::parse(json);
    if (j.contains("n_triangle")) base.n_triangle = j.at("n_triangle").get<std::uint32_t>();
    if (j.contains("n_square")) base.n_square = j.at("n_square").get<std::uint32_t>();
    if (j.contains("n_circle")) base.n_circle = j.at("n_circle").get<std::uint32_t>();
    if (j.contains("square_parents"))
      base.square_parents = j.at("square_parents").get<std::vector<std::vector<std::uint32_t>>>();
    if (j.contains("circle_parents")) base.circle_parents = j.at("circle_parents").get<std::vector<std::uint32_t>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("synth wiring: ") + e.what());
  }
  return base;
}

Dataset synth_generate(const SynthConfig& config) {
  const SynthConfig cfg = config.with_default_wiring();
  const std::uint32_t nt = cfg.n_triangle, ns = cfg.n_square, nc = cfg.n_circle;
  const std::size_t m = std::size_t{nt} + ns + nc;
  if (m == 0) throw ConfigError("synth: no attributes");
  if (cfg.square_parents.size() != ns) throw ConfigError("synth: need one parent list per square");
  for (std::uint32_t s = 0; s < ns; ++s) {
    const auto& p = cfg.square_parents[s];
    if (p.size() != 4) throw ConfigError("synth: square " + std::to_string(s) + " needs exactly 4 parents");
    std::set<std::uint32_t> distinct(p.begin(), p.end());
    if (distinct.size() != 4) throw ConfigError("synth: square " + std::to_string(s) + " has repeated parents");
    for (auto t : p) {
      if (t >= nt) throw ConfigError("synth: square " + std::to_string(s) + " has a non-triangle parent");
    }
  }
  if (cfg.circle_parents.size() != nc) throw ConfigError("synth: need one parent per circle");
  for (std::uint32_t c = 0; c < nc; ++c) {
    if (cfg.circle_parents[c] >= nt + ns)
      throw ConfigError("synth: circle " + std::to_string(c) + " parent must be a triangle or square");
  }

  std::vector<std::string> names;
  for (std::uint32_t i = 0; i < nt; ++i) names.push_back("t" + std::to_string(i + 1));
  for (std::uint32_t i = 0; i < ns; ++i) names.push_back("s" + std::to_string(i + 1));
  for (std::uint32_t i = 0; i < nc; ++i) names.push_back("c" + std::to_string(i + 1));

  std::mt19937_64 rng(cfg.seed);
  std::vector<Value> codes;
  codes.reserve(cfg.n_records * m);
  std::vector<Value> row(m);
  for (std::uint64_t r = 0; r < cfg.n_records; ++r) {
    for (std::uint32_t t = 0; t < nt; ++t) row[t] = unit_uniform(rng) < 0.8 ? 1 : 2;
    for (std::uint32_t s = 0; s < ns; ++s) {
      unsigned sum = 0;
      for (auto t : cfg.square_parents[s]) sum += row[t];
      row[nt + s] = (sum % 2 == 0) ? 2 : 1;
    }
    for (std::uint32_t c = 0; c < nc; ++c) {
      const double u = unit_uniform(rng);
      row[nt + ns + c] = (row[cfg.circle_parents[c]] == 2 && u < 0.4) ? 2 : 1;
    }
    codes.insert(codes.end(), row.begin(), row.end());
  }
  return Dataset(std::move(names), std::vector<std::uint32_t>(m, 2), std::move(codes));
}

}  // namespace adtree
