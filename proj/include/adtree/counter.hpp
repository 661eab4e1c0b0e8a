#pragma once

#include <span>

#include "adtree/contab.hpp"
#include "adtree/dataset.hpp"
#include "adtree/oracle.hpp"
#include "adtree/query.hpp"
#include "adtree/tree.hpp"

namespace adtree {

// Source of counts and contingency tables for the learning algorithms. The
// ADtree and the linear scan must give identical answers.
class Counter {
 public:
  virtual ~Counter() = default;
  virtual const Dataset& dataset() const = 0;
  virtual Count count(const Query& q) const = 0;
  virtual ContingencyTable contab(std::span<const Attr> attrs, const Query& cond = {}) const = 0;

  std::size_t num_records() const { return dataset().num_records(); }
  std::size_t num_attributes() const { return dataset().num_attributes(); }
};

class TreeCounter final : public Counter {
 public:
  explicit TreeCounter(const ADTree& tree) : tree_(tree) {}
  const Dataset& dataset() const override { return tree_.dataset(); }
  Count count(const Query& q) const override { return adtree::count(tree_, q); }
  ContingencyTable contab(std::span<const Attr> attrs, const Query& cond = {}) const override {
    return cond.empty() ? make_contab(tree_, attrs) : make_contab_conditional(tree_, attrs, cond);
  }

 private:
  const ADTree& tree_;
};

class LinearCounter final : public Counter {
 public:
  explicit LinearCounter(const Dataset& data) : data_(data) {}
  const Dataset& dataset() const override { return data_; }
  Count count(const Query& q) const override { return linear_count(data_, q); }
  ContingencyTable contab(std::span<const Attr> attrs, const Query& cond = {}) const override {
    return linear_contab(data_, attrs, cond);
  }

 private:
  const Dataset& data_;
};

}  // namespace adtree
