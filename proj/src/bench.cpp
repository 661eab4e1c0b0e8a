#include "adtree/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include <json.hpp>

#include "adtree/counter.hpp"
#include "adtree/error.hpp"
#include "adtree/mlapps.hpp"

namespace adtree {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double median_time(std::uint32_t reps, const std::function<void()>& fn) {
  std::vector<double> t;
  for (std::uint32_t i = 0; i < std::max<std::uint32_t>(reps, 1); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    t.push_back(seconds_since(t0));
  }
  std::sort(t.begin(), t.end());
  return t[t.size() / 2];
}

void fill_speedups(BenchRow& row) {
  row.speedup = row.adtree_seconds > 0 ? row.linear_seconds / row.adtree_seconds : 0.0;
  const double with_build = row.adtree_seconds + row.build_seconds;
  row.speedup_with_build = with_build > 0 ? row.linear_seconds / with_build : 0.0;
}

[[noreturn]] void disagree(const std::string& what) {
  throw InternalError("benchmark aborted: ADtree and linear backends disagree on " + what);
}

Attr target_of(const Dataset& d, const BenchConfig& cfg) {
  const Attr t = cfg.target.value_or(static_cast<Attr>(d.num_attributes() - 1));
  if (t >= d.num_attributes()) throw ArgumentError("bench: target attribute out of range");
  return t;
}

struct BuiltTree {
  ADTree tree;
  TreeStats stats;
};

BuiltTree build_tree(std::shared_ptr<const Dataset> data, std::uint32_t r_min) {
  ADTree t = ADTree::build(std::move(data), r_min);
  const auto st = t.stats();
  return {std::move(t), st};
}

}  // namespace

std::vector<std::vector<Attr>> contab_workload(std::size_t num_attributes, std::size_t count, std::size_t max_n,
                                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t top = std::min(max_n, num_attributes);
  std::vector<std::vector<Attr>> out;
  if (top == 0) return out;
  std::vector<Attr> all(num_attributes);
  for (std::size_t a = 0; a < num_attributes; ++a) all[a] = static_cast<Attr>(a);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, top)(rng);
    // Partial Fisher-Yates for n distinct attributes.
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t j = std::uniform_int_distribution<std::size_t>(k, num_attributes - 1)(rng);
      std::swap(all[k], all[j]);
    }
    std::vector<Attr> set(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n));
    std::sort(set.begin(), set.end());
    out.push_back(std::move(set));
  }
  return out;
}

BenchReport bench_contab(std::shared_ptr<const Dataset> data, const BenchConfig& cfg) {
  const Dataset& d = *data;
  auto built = build_tree(data, cfg.r_min);
  const auto workload = contab_workload(d.num_attributes(), cfg.tables, cfg.max_n, cfg.seed);

  BenchReport report{"contab", {}};
  auto run_rows = [&](const std::string& label, const std::vector<std::vector<Attr>>& sets) {
    if (sets.empty()) return;
    for (const auto& s : sets) {
      if (make_contab(built.tree, s) != linear_contab(d, s)) disagree("a contingency table");
    }
    BenchRow row;
    row.label = label;
    row.records = d.num_records();
    row.r_min = cfg.r_min;
    row.work = sets.size();
    row.nodes = built.stats.ad_nodes;
    row.bytes = built.stats.estimated_bytes;
    row.build_seconds = built.stats.build_seconds;
    std::size_t sink = 0;
    row.adtree_seconds = median_time(cfg.reps, [&] {
      for (const auto& s : sets) sink += make_contab(built.tree, s).size();
    });
    row.linear_seconds = median_time(cfg.reps, [&] {
      for (const auto& s : sets) sink += linear_contab(d, s).size();
    });
    if (sink == 0 && d.num_records() > 0) disagree("workload output size");
    fill_speedups(row);
    report.rows.push_back(row);
  };
  for (std::size_t n = 1; n <= cfg.max_n; ++n) {
    std::vector<std::vector<Attr>> sized;
    for (const auto& s : workload) {
      if (s.size() == n) sized.push_back(s);
    }
    run_rows("n=" + std::to_string(n), sized);
  }
  run_rows("all", workload);
  return report;
}

BenchReport bench_features(std::shared_ptr<const Dataset> data, const BenchConfig& cfg) {
  const Dataset& d = *data;
  auto built = build_tree(data, cfg.r_min);
  const TreeCounter tc(built.tree);
  const LinearCounter lc(d);
  const Attr target = target_of(d, cfg);
  BenchReport report{"features", {}};
  for (std::size_t n = 1; n <= cfg.max_n && n + 1 <= d.num_attributes(); ++n) {
    const auto ranked = feature_select(tc, target, n);
    if (ranked != feature_select(lc, target, n)) disagree("feature rankings");
    BenchRow row;
    row.label = "n=" + std::to_string(n);
    row.records = d.num_records();
    row.r_min = cfg.r_min;
    row.work = ranked.size();
    row.nodes = built.stats.ad_nodes;
    row.bytes = built.stats.estimated_bytes;
    row.build_seconds = built.stats.build_seconds;
    row.adtree_seconds = median_time(cfg.reps, [&] { feature_select(tc, target, n); });
    row.linear_seconds = median_time(cfg.reps, [&] { feature_select(lc, target, n); });
    fill_speedups(row);
    report.rows.push_back(row);
  }
  return report;
}

BenchReport bench_rules(std::shared_ptr<const Dataset> data, const BenchConfig& cfg) {
  const Dataset& d = *data;
  auto built = build_tree(data, cfg.r_min);
  const TreeCounter tc(built.tree);
  const LinearCounter lc(d);
  const Attr target = target_of(d, cfg);
  BenchReport report{"rules", {}};
  for (std::size_t n = 1; n <= cfg.max_n && n + 1 <= d.num_attributes(); ++n) {
    RuleSearchStats st;
    const auto rules = rule_search(tc, target, cfg.target_value, n, cfg.s_min, cfg.top_k, &st);
    if (rules != rule_search(lc, target, cfg.target_value, n, cfg.s_min, cfg.top_k)) disagree("rule lists");
    BenchRow row;
    row.label = "n=" + std::to_string(n);
    row.records = d.num_records();
    row.r_min = cfg.r_min;
    row.work = st.antecedents;
    row.nodes = built.stats.ad_nodes;
    row.bytes = built.stats.estimated_bytes;
    row.build_seconds = built.stats.build_seconds;
    row.adtree_seconds =
        median_time(cfg.reps, [&] { rule_search(tc, target, cfg.target_value, n, cfg.s_min, cfg.top_k); });
    row.linear_seconds =
        median_time(cfg.reps, [&] { rule_search(lc, target, cfg.target_value, n, cfg.s_min, cfg.top_k); });
    fill_speedups(row);
    report.rows.push_back(row);
  }
  return report;
}

BenchReport bench_bayes(std::shared_ptr<const Dataset> data, const BenchConfig& cfg) {
  const Dataset& d = *data;
  auto built = build_tree(data, cfg.r_min);
  const TreeCounter tc(built.tree);
  const LinearCounter lc(d);
  HillClimbConfig hc{cfg.iterations, cfg.restarts, cfg.seed, 8};
  const auto a = bn_hill_climb(tc, hc);
  const auto b = bn_hill_climb(lc, hc);
  if (!(a.best == b.best) || a.best_score != b.best_score) disagree("the hill-climbing result");
  BenchRow row;
  row.label = std::to_string(cfg.iterations) + " iterations";
  row.records = d.num_records();
  row.r_min = cfg.r_min;
  row.work = a.tables_built;
  row.nodes = built.stats.ad_nodes;
  row.bytes = built.stats.estimated_bytes;
  row.build_seconds = built.stats.build_seconds;
  row.adtree_seconds = median_time(cfg.reps, [&] { bn_hill_climb(tc, hc); });
  row.linear_seconds = median_time(cfg.reps, [&] { bn_hill_climb(lc, hc); });
  fill_speedups(row);
  return {"bayes", {row}};
}

BenchReport bench_rmin_sweep(std::shared_ptr<const Dataset> data, const BenchConfig& cfg) {
  BenchReport report{"rmin-sweep", {}};
  HillClimbConfig hc{cfg.iterations, cfg.restarts, cfg.seed, 8};
  for (auto r_min : cfg.r_mins) {
    auto built = build_tree(data, r_min);
    const TreeCounter tc(built.tree);
    BenchRow row;
    row.label = "r_min=" + std::to_string(r_min);
    row.records = data->num_records();
    row.r_min = r_min;
    row.nodes = built.stats.ad_nodes;
    row.bytes = built.stats.estimated_bytes;
    row.build_seconds = built.stats.build_seconds;
    if (cfg.iterations > 0 && data->num_records() > 0) {
      row.work = cfg.iterations;
      row.adtree_seconds = median_time(cfg.reps, [&] { bn_hill_climb(tc, hc); });
    }
    report.rows.push_back(row);
  }
  return report;
}

BenchReport bench_size_sweep(const BenchConfig& cfg) {
  BenchReport report{"size-sweep", {}};
  for (auto size : cfg.sizes) {
    SynthConfig sc;
    sc.n_records = size;
    sc.seed = cfg.seed;
    auto data = std::make_shared<const Dataset>(synth_generate(sc));
    auto built = build_tree(data, cfg.r_min);
    BenchRow row;
    row.label = "SYN" + std::to_string(size);
    row.records = size;
    row.r_min = cfg.r_min;
    row.nodes = built.stats.ad_nodes;
    row.bytes = built.stats.estimated_bytes;
    row.build_seconds = built.stats.build_seconds;
    report.rows.push_back(row);
  }
  return report;
}

std::string format_report(const BenchReport& r) {
  std::ostringstream out;
  char buf[256];
  const bool timed = r.suite != "size-sweep";
  const bool compared = r.suite == "contab" || r.suite == "features" || r.suite == "rules" || r.suite == "bayes";
  std::snprintf(buf, sizeof buf, "%-16s %10s %6s %10s %12s %10s %10s", "task", "R", "r_min", "nodes", "bytes",
                "build_s", "work");
  out << "suite: " << r.suite << '\n' << buf;
  if (timed) {
    std::snprintf(buf, sizeof buf, " %12s", "adtree_s");
    out << buf;
  }
  if (compared) {
    std::snprintf(buf, sizeof buf, " %12s %10s %12s", "linear_s", "speedup", "w/build");
    out << buf;
  }
  out << '\n';
  for (const auto& row : r.rows) {
    std::snprintf(buf, sizeof buf, "%-16s %10llu %6u %10llu %12llu %10.3f %10llu", row.label.c_str(),
                  static_cast<unsigned long long>(row.records), row.r_min, static_cast<unsigned long long>(row.nodes),
                  static_cast<unsigned long long>(row.bytes), row.build_seconds,
                  static_cast<unsigned long long>(row.work));
    out << buf;
    if (timed) {
      std::snprintf(buf, sizeof buf, " %12.6f", row.adtree_seconds);
      out << buf;
    }
    if (compared) {
      std::snprintf(buf, sizeof buf, " %12.6f %10.1f %12.1f", row.linear_seconds, row.speedup, row.speedup_with_build);
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

std::string report_to_json(const BenchReport& r) {
  nlohmann::ordered_json j;
  j["suite"] = r.suite;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    j["rows"].push_back({{"label", row.label},
                         {"records", row.records},
                         {"r_min", row.r_min},
                         {"work", row.work},
                         {"adtree_seconds", row.adtree_seconds},
                         {"linear_seconds", row.linear_seconds},
                         {"speedup", row.speedup},
                         {"build_seconds", row.build_seconds},
                         {"speedup_with_build", row.speedup_with_build},
                         {"nodes", row.nodes},
                         {"bytes", row.bytes}});
  }
  return j.dump(2);
}

}  // namespace adtree
