#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace adtree {

using BigInt = boost::multiprecision::cpp_int;

// Inputs for the binary-attribute node-count bounds.
struct BoundParams {
  std::uint64_t m = 1;      // attributes
  std::uint64_t r = 1;      // records
  std::uint64_t r_min = 1;  // leaf-list threshold
  // P(value 2) per attribute; required for the skewed and correlated bounds.
  std::optional<double> p;
};

struct BoundsReport {
  std::uint64_t m = 0;
  std::uint64_t r = 0;
  std::uint64_t r_min = 1;
  BigInt full_worst_case;   // 2^M
  BigInt dense_worst_case;  // 3^M, the tree without MCV pruning
  BigInt row_limited;       // sum_{k=0}^{floor(log2 R)} C(M,k)
  BigInt build_cost;        // sum_{k=0}^{ceil(log2 R)} (R/2^k) C(M,k), rounded up
  std::optional<double> q_skewed;
  std::optional<double> q_correlated;
  std::optional<BigInt> skewed;      // exponent floor(log2 R / -log2 q), q = min(p, 1-p)
  std::optional<BigInt> correlated;  // same, q = sqrt(2p(1-p))
  // The three node bounds again with R replaced by floor(R / r_min).
  BigInt row_limited_leaf;
  std::optional<BigInt> skewed_leaf;
  std::optional<BigInt> correlated_leaf;
};

// Throws ArgumentError when M or R is 0, r_min is 0, or p lies outside (0,1).
BoundsReport memory_bounds(const BoundParams& bp);

BigInt binomial(std::uint64_t n, std::uint64_t k);
// sum_{k=0}^{top} C(m, k); terms with k > m vanish.
BigInt binomial_prefix_sum(std::uint64_t m, std::uint64_t top);

std::uint64_t floor_log2(std::uint64_t x);  // x >= 1
std::uint64_t ceil_log2(std::uint64_t x);   // x >= 1

// floor(log2(r) / -log2(q)), 0 when r < 1.
std::uint64_t decay_exponent(std::uint64_t r, double q);

std::string to_string(const BigInt& v);

}  // namespace adtree
