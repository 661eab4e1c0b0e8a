#pragma once

#include <span>
#include <string>
#include <vector>

#include "adtree/types.hpp"

namespace adtree {

class Dataset;

struct Term {
  Attr attr = 0;
  Value value = 0;
  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term&, const Term&) = default;
};

// A conjunction of (attribute = value) pairs with strictly increasing
// attributes. The empty query matches every record.
class Query {
 public:
  Query() = default;
  // Sorts by attribute; throws QueryError on a repeated attribute.
  Query(std::vector<Term> terms);  // NOLINT(google-explicit-constructor)
  Query(std::initializer_list<Term> terms) : Query(std::vector<Term>(terms)) {}

  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  bool matches(std::span<const Value> row) const;
  bool mentions(Attr a) const;

  // Throws QueryError if an attribute or value lies outside the schema.
  void validate(const Dataset& d) const;

  friend bool operator==(const Query&, const Query&) = default;

 private:
  std::vector<Term> terms_;
};

// "name=value,name=value" with names from the header and values from the
// value maps, or "@i=c" with a 0-based column index and a raw code. Forms can
// be mixed. An empty or blank string is the empty query.
Query parse_query(const std::string& text, const Dataset& d);

std::string format_query(const Query& q, const Dataset& d);

}  // namespace adtree
