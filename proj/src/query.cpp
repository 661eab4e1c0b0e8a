#include "adtree/query.hpp"

#include <algorithm>
#include <charconv>

#include "adtree/dataset.hpp"
#include "adtree/error.hpp"

namespace adtree {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::uint64_t parse_number(const std::string& s, const std::string& what) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) throw QueryError("bad " + what + " '" + s + "'");
  return v;
}

}  // namespace

Query::Query(std::vector<Term> terms) : terms_(std::move(terms)) {
  std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.attr < b.attr; });
  for (std::size_t i = 1; i < terms_.size(); ++i) {
    if (terms_[i].attr == terms_[i - 1].attr)
      throw QueryError("attribute " + std::to_string(terms_[i].attr) + " appears twice in query");
  }
}

bool Query::matches(std::span<const Value> row) const {
  for (const auto& t : terms_) {
    if (row[t.attr] != t.value) return false;
  }
  return true;
}

bool Query::mentions(Attr a) const {
  return std::any_of(terms_.begin(), terms_.end(), [a](const Term& t) { return t.attr == a; });
}

void Query::validate(const Dataset& d) const {
  for (const auto& t : terms_) {
    if (t.attr >= d.num_attributes())
      throw QueryError("attribute index " + std::to_string(t.attr) + " out of range (M = " +
                       std::to_string(d.num_attributes()) + ")");
    if (t.value < 1 || t.value > d.arity(t.attr))
      throw QueryError("value " + std::to_string(t.value) + " outside 1.." + std::to_string(d.arity(t.attr)) +
                       " for '" + d.names()[t.attr] + "'");
  }
}

Query parse_query(const std::string& text, const Dataset& d) {
  std::vector<Term> terms;
  std::size_t start = 0;
  const std::string body = trim(text);
  if (body.empty()) return {};
  while (start <= body.size()) {
    auto end = body.find(',', start);
    if (end == std::string::npos) end = body.size();
    const std::string item = trim(std::string_view(body).substr(start, end - start));
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw QueryError("query term '" + item + "' lacks '='");
    const std::string lhs = trim(std::string_view(item).substr(0, eq));
    const std::string rhs = trim(std::string_view(item).substr(eq + 1));
    Term t;
    if (!lhs.empty() && lhs[0] == '@') {
      const auto a = parse_number(lhs.substr(1), "attribute index");
      const auto c = parse_number(rhs, "value code");
      if (a >= d.num_attributes()) throw QueryError("attribute index " + lhs + " out of range");
      if (c > kMaxArity) throw QueryError("value code " + rhs + " out of range");
      t = {static_cast<Attr>(a), static_cast<Value>(c)};
    } else {
      Attr a = 0;
      try {
        a = d.attribute_index(lhs);
      } catch (const ArgumentError& e) {
        throw QueryError(e.what());
      }
      auto code = d.value_map(a).code_of(rhs);
      if (!code) throw QueryError("'" + rhs + "' is not a value of '" + lhs + "'");
      t = {a, *code};
    }
    terms.push_back(t);
    start = end + 1;
  }
  Query q(std::move(terms));
  q.validate(d);
  return q;
}

std::string format_query(const Query& q, const Dataset& d) {
  std::string out;
  for (const auto& t : q.terms()) {
    if (!out.empty()) out += ", ";
    out += d.names()[t.attr] + " = " + d.value_map(t.attr).string_of(t.value);
  }
  return out;
}

}  // namespace adtree
