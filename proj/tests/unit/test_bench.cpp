#include <doctest.h>

#include <json.hpp>

#include "adtree/bench.hpp"
#include "fixtures.hpp"

using namespace adtree;

namespace {

std::shared_ptr<const Dataset> small_synth(std::uint64_t records) {
  SynthConfig c;
  c.n_records = records;
  c.seed = 2;
  return std::make_shared<const Dataset>(synth_generate(c));
}

BenchConfig quick() {
  BenchConfig b;
  b.reps = 1;
  b.tables = 60;
  b.max_n = 3;
  b.iterations = 40;
  b.s_min = 5;
  b.r_mins = {1, 4, 16, 64};
  return b;
}

}  // namespace

TEST_CASE("workload: reproducible attribute sets") {
  const auto a = contab_workload(24, 200, 4, 9);
  CHECK(a == contab_workload(24, 200, 4, 9));
  CHECK(a != contab_workload(24, 200, 4, 10));
  for (const auto& s : a) {
    CHECK(s.size() >= 1);
    CHECK(s.size() <= 4);
    for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i - 1] < s[i]);
    for (Attr x : s) CHECK(x < 24);
  }
  CHECK(contab_workload(2, 10, 4, 1).front().size() <= 2);
  CHECK(contab_workload(0, 10, 4, 1).empty());
}

TEST_CASE("contab suite: one row per set size plus a total") {
  const auto r = bench_contab(small_synth(2000), quick());
  CHECK(r.suite == "contab");
  REQUIRE(r.rows.size() == 4);
  CHECK(r.rows.back().label == "all");
  CHECK(r.rows.back().work == 60);
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i + 1 < r.rows.size(); ++i) sum += r.rows[i].work;
  CHECK(sum == 60);
  for (const auto& row : r.rows) {
    CHECK(row.records == 2000);
    CHECK(row.nodes > 0);
    if (row.adtree_seconds > 0) CHECK(row.speedup == doctest::Approx(row.linear_seconds / row.adtree_seconds));
    CHECK(row.speedup_with_build <= row.speedup + 1e-12);
  }
}

TEST_CASE("application suites run both backends") {
  const auto d = small_synth(1500);
  const auto f = bench_features(d, quick());
  CHECK(f.rows.size() == 3);
  CHECK(f.rows[0].work == 23);
  const auto r = bench_rules(d, quick());
  CHECK(r.rows.size() == 3);
  const auto b = bench_bayes(d, quick());
  REQUIRE(b.rows.size() == 1);
  CHECK(b.rows[0].work >= 24);
}

TEST_CASE("sweeps: node counts follow the expected trends") {
  const auto rs = bench_rmin_sweep(small_synth(3000), quick());
  REQUIRE(rs.rows.size() == 4);
  for (std::size_t i = 1; i < rs.rows.size(); ++i) CHECK(rs.rows[i].nodes <= rs.rows[i - 1].nodes);

  BenchConfig sc = quick();
  // Below a few thousand records leaf-lists split faster than R doubles.
  sc.sizes = {4000, 8000, 16000};
  const auto ss = bench_size_sweep(sc);
  REQUIRE(ss.rows.size() == 3);
  for (std::size_t i = 1; i < ss.rows.size(); ++i) {
    CHECK(ss.rows[i].nodes > ss.rows[i - 1].nodes);
    CHECK(ss.rows[i].nodes < 2 * ss.rows[i - 1].nodes);
  }
}

TEST_CASE("reports: text and JSON") {
  BenchConfig sc = quick();
  sc.sizes = {500};
  const auto r = bench_size_sweep(sc);
  const std::string text = format_report(r);
  CHECK(text.find("suite: size-sweep") != std::string::npos);
  CHECK(text.find("SYN500") != std::string::npos);
  const auto j = nlohmann::json::parse(report_to_json(r));
  CHECK(j["suite"] == "size-sweep");
  CHECK(j["rows"][0]["records"] == 500);
}
