#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "adtree/dataset.hpp"
#include "adtree/tree.hpp"

namespace adtree {

struct BenchConfig {
  std::uint32_t reps = 3;          // timings are medians over this many runs
  std::uint64_t seed = 1;
  std::uint32_t r_min = kDefaultRMin;
  std::size_t max_n = 4;           // largest attribute-set size
  std::size_t tables = 1000;       // contab workload length
  std::uint64_t iterations = 300;  // hill-climb steps (bayes, rmin-sweep)
  std::uint32_t restarts = 1;
  std::optional<Attr> target;      // features / rules; default: last attribute
  Value target_value = 1;
  Count s_min = 10;
  std::size_t top_k = 10;
  std::vector<std::uint32_t> r_mins = {1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024, 2048, 4096};
  std::vector<std::uint64_t> sizes = {30000, 60000, 125000};
};

// One line of a benchmark table. Columns that do not apply stay 0.
struct BenchRow {
  std::string label;
  std::uint64_t records = 0;
  std::uint32_t r_min = 0;
  std::uint64_t work = 0;          // tables, attribute sets, rules or iterations
  double adtree_seconds = 0.0;     // counting only, build excluded
  double linear_seconds = 0.0;
  double speedup = 0.0;            // linear / adtree
  double build_seconds = 0.0;
  double speedup_with_build = 0.0; // linear / (adtree + build)
  std::uint64_t nodes = 0;
  std::uint64_t bytes = 0;
};

struct BenchReport {
  std::string suite;
  std::vector<BenchRow> rows;
};

// Random attribute sets of size 1..max_n, reproducible from the seed.
std::vector<std::vector<Attr>> contab_workload(std::size_t num_attributes, std::size_t count, std::size_t max_n,
                                               std::uint64_t seed);

// Every suite runs both backends on the same workload and throws
// InternalError if their answers differ.
BenchReport bench_contab(std::shared_ptr<const Dataset> data, const BenchConfig& cfg);
BenchReport bench_features(std::shared_ptr<const Dataset> data, const BenchConfig& cfg);
BenchReport bench_rules(std::shared_ptr<const Dataset> data, const BenchConfig& cfg);
BenchReport bench_bayes(std::shared_ptr<const Dataset> data, const BenchConfig& cfg);
BenchReport bench_rmin_sweep(std::shared_ptr<const Dataset> data, const BenchConfig& cfg);
// Synthetic data of each size in cfg.sizes.
BenchReport bench_size_sweep(const BenchConfig& cfg);

std::string format_report(const BenchReport& report);
std::string report_to_json(const BenchReport& report);

}  // namespace adtree
