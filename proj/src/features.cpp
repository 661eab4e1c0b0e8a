#include <algorithm>
#include <cmath>
#include <string>

#include "adtree/error.hpp"
#include "adtree/mlapps.hpp"
#include "table_groups.hpp"

namespace adtree {

namespace {

double f(double x) { return x > 0.0 ? -x * std::log2(x) : 0.0; }

}  // namespace

FeatureScore info_gain(const Counter& counter, Attr a_out, std::span<const Attr> attrs) {
  const Dataset& d = counter.dataset();
  if (a_out >= d.num_attributes()) throw ArgumentError("info_gain: output attribute out of range");
  if (std::find(attrs.begin(), attrs.end(), a_out) != attrs.end())
    throw ArgumentError("info_gain: output attribute is also an input");

  std::vector<Attr> all(attrs.begin(), attrs.end());
  all.push_back(a_out);
  const ContingencyTable ct = counter.contab(all);
  FeatureScore out;
  out.attrs.assign(attrs.begin(), attrs.end());
  std::sort(out.attrs.begin(), out.attrs.end());

  const Count r = counter.num_records();
  if (r == 0) return out;
  const double rd = static_cast<double>(r);
  const std::size_t pos = detail::position_of(ct.attrs(), a_out);

  std::vector<Count> marginal(d.arity(a_out) + 1, 0);
  for (std::size_t i = 0; i < ct.size(); ++i) marginal[ct.key(i)[pos]] += ct.count(i);
  double h_out = 0.0;
  for (Value v = 1; v <= d.arity(a_out); ++v) h_out += f(static_cast<double>(marginal[v]) / rd);

  double h_cond = 0.0;
  for (const auto& g : detail::group_rows(ct, pos)) {
    const double ca = static_cast<double>(g.total);
    double inner = 0.0;
    for (const auto& [v, c] : g.entries) inner += f(static_cast<double>(c) / ca);
    h_cond += ca / rd * inner;
  }
  out.gain = h_out - h_cond;
  return out;
}

std::vector<FeatureScore> feature_select(const Counter& counter, Attr a_out, std::size_t n) {
  const std::size_t m = counter.num_attributes();
  if (a_out >= m) throw ArgumentError("feature_select: output attribute out of range");
  if (n < 1 || n + 1 > m) throw ArgumentError("feature_select: need 1 <= n <= M-1");
  std::vector<Attr> inputs;
  for (Attr a = 0; a < m; ++a) {
    if (a != a_out) inputs.push_back(a);
  }
  std::vector<FeatureScore> scores;
  for_each_subset(std::span<const Attr>(inputs), n,
                  [&](std::span<const Attr> s) { scores.push_back(info_gain(counter, a_out, s)); });
  std::stable_sort(scores.begin(), scores.end(), [](const FeatureScore& a, const FeatureScore& b) {
    if (a.gain != b.gain) return a.gain > b.gain;
    return a.attrs < b.attrs;
  });
  return scores;
}

}  // namespace adtree
