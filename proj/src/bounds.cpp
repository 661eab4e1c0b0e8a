#include "adtree/bounds.hpp"

#include <bit>
#include <cmath>

#include "adtree/error.hpp"

namespace adtree {

BigInt binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

BigInt binomial_prefix_sum(std::uint64_t m, std::uint64_t top) {
  BigInt sum = 0;
  BigInt c = 1;  // C(m, 0)
  for (std::uint64_t k = 0; k <= std::min(top, m); ++k) {
    sum += c;
    c = c * (m - k) / (k + 1);
  }
  return sum;
}

std::uint64_t floor_log2(std::uint64_t x) {
  if (x == 0) throw ArgumentError("log2 of 0");
  return static_cast<std::uint64_t>(std::bit_width(x) - 1);
}

std::uint64_t ceil_log2(std::uint64_t x) {
  const auto f = floor_log2(x);
  return std::has_single_bit(x) ? f : f + 1;
}

std::uint64_t decay_exponent(std::uint64_t r, double q) {
  if (r < 1) return 0;
  const double ratio = std::log2(static_cast<double>(r)) / -std::log2(q);
  // Guard against 7.9999999 for ratios that are integers in exact arithmetic.
  return static_cast<std::uint64_t>(std::floor(ratio + 1e-9));
}

std::string to_string(const BigInt& v) { return v.str(); }

namespace {

// sum_{k=0}^{ceil(log2 R)} R C(M,k) / 2^k, as an exact rational rounded up.
BigInt build_cost_bound(std::uint64_t m, std::uint64_t r) {
  const std::uint64_t top = ceil_log2(r);
  BigInt numer = 0;  // over the common denominator 2^top
  for (std::uint64_t k = 0; k <= top; ++k) numer += BigInt(r) * binomial(m, k) * (BigInt(1) << (top - k));
  const BigInt denom = BigInt(1) << top;
  return (numer + denom - 1) / denom;
}

}  // namespace

BoundsReport memory_bounds(const BoundParams& bp) {
  if (bp.m < 1) throw ArgumentError("bounds: M must be at least 1");
  if (bp.r < 1) throw ArgumentError("bounds: R must be at least 1");
  if (bp.r_min < 1) throw ArgumentError("bounds: r_min must be at least 1");
  if (bp.p && !(*bp.p > 0.0 && *bp.p < 1.0)) throw ArgumentError("bounds: p must lie in (0, 1)");

  BoundsReport out;
  out.m = bp.m;
  out.r = bp.r;
  out.r_min = bp.r_min;
  out.full_worst_case = BigInt(1) << bp.m;
  out.dense_worst_case = boost::multiprecision::pow(BigInt(3), static_cast<unsigned>(bp.m));
  out.row_limited = binomial_prefix_sum(bp.m, floor_log2(bp.r));
  out.build_cost = build_cost_bound(bp.m, bp.r);

  const std::uint64_t r_leaf = bp.r / bp.r_min;
  out.row_limited_leaf = r_leaf >= 1 ? binomial_prefix_sum(bp.m, floor_log2(r_leaf)) : BigInt(1);

  if (bp.p) {
    const double p = *bp.p;
    const double qs = std::min(p, 1.0 - p);
    const double qc = std::sqrt(2.0 * p * (1.0 - p));
    out.q_skewed = qs;
    out.q_correlated = qc;
    out.skewed = binomial_prefix_sum(bp.m, decay_exponent(bp.r, qs));
    out.skewed_leaf = binomial_prefix_sum(bp.m, decay_exponent(r_leaf, qs));
    out.correlated = binomial_prefix_sum(bp.m, decay_exponent(bp.r, qc));
    out.correlated_leaf = binomial_prefix_sum(bp.m, decay_exponent(r_leaf, qc));
  }
  return out;
}

}  // namespace adtree
