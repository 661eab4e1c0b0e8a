#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "adtree/cli.hpp"
#include "fixtures.hpp"

using namespace adtree;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string toy_csv() { return test::data_path("toy.csv").string(); }
std::string toy_values() { return test::data_path("toy.values.json").string(); }

std::filesystem::path temp_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "adtree_test_cli";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cli: count") {
  auto r = run({"count", toy_csv(), "--q", "a2=3,a3=1"});
  CHECK(r.code == 0);
  CHECK(r.out == "4\n");
  CHECK(run({"count", toy_csv(), "--q", ""}).out == "6\n");
  CHECK(run({"count", toy_csv(), "--q", "@0=2,@1=2", "--backend", "linear"}).out == "2\n");
  const auto j = nlohmann::json::parse(run({"--json", "count", toy_csv(), "--q", "a1=1"}).out);
  CHECK(j["count"] == 3);
  CHECK(j["query"] == "a1 = 1");
}

TEST_CASE("cli: contab renders") {
  auto dense = run({"contab", toy_csv(), "--attrs", "a1,a3", "--dense"});
  CHECK(dense.code == 0);
  CHECK(dense.out == "a1\ta3\tcount\n1\t1\t3\n1\t2\t0\n2\t1\t2\n2\t2\t1\n");
  auto sparse = run({"contab", toy_csv(), "--attrs", "a3,a1"});
  CHECK(sparse.out == "a1\ta3\tcount\n1\t1\t3\n2\t1\t2\n2\t2\t1\n");
  auto cond = run({"contab", toy_csv(), "--domains", toy_values(), "--attrs", "a1,a3", "--cond", "a2=3", "--dense"});
  CHECK(cond.out == "a1\ta3\tcount\n1\t1\t2\n1\t2\t0\n2\t1\t2\n2\t2\t0\n");
  auto a2 = run({"contab", toy_csv(), "--domains", toy_values(), "--attrs", "a2", "--dense"});
  CHECK(a2.out == "a2\tcount\n1\t1\n2\t0\n3\t4\n4\t1\n");
  const auto j = nlohmann::json::parse(run({"contab", toy_csv(), "--attrs", "a1,a3", "--json"}).out);
  CHECK(j["total"] == 6);
  CHECK(j["cells"].size() == 3);
  CHECK(j["cells"][2]["values"] == nlohmann::json::array({"2", "2"}));
}

TEST_CASE("cli: saved trees answer identically") {
  const auto tree = (temp_dir() / "toy.adt").string();
  for (const char* r_min : {"1", "4"}) {
    auto b = run({"build", toy_csv(), "--domains", toy_values(), "--rmin", r_min, "--save", tree});
    REQUIRE(b.code == 0);
    const std::vector<std::vector<std::string>> cases = {
        {"count", "--q", "a1=2,a2=4,a3=2"},
        {"contab", "--attrs", "a1,a2,a3", "--dense"},
        {"contab", "--attrs", "a1,a3", "--cond", "a2=3"},
    };
    for (const auto& c : cases) {
      std::vector<std::string> fresh{c[0], toy_csv(), "--domains", toy_values(), "--rmin", r_min};
      std::vector<std::string> loaded{c[0], tree, "--data", toy_csv(), "--domains", toy_values()};
      fresh.insert(fresh.end(), c.begin() + 1, c.end());
      loaded.insert(loaded.end(), c.begin() + 1, c.end());
      const auto a = run(fresh);
      const auto l = run(loaded);
      CHECK(a.code == 0);
      CHECK(a.out == l.out);
    }
  }
  CHECK(run({"count", tree, "--q", "a1=1"}).code == cli::kExitUsage);
  const auto other = (temp_dir() / "other.csv");
  std::ofstream(other) << "a1,a2,a3\n1,1,1\n";
  const auto mismatch = run({"count", tree, "--data", other.string(), "--q", "a1=1"});
  CHECK(mismatch.code == cli::kExitError);
  CHECK(mismatch.err.find("error:") != std::string::npos);
}

TEST_CASE("cli: build report and value export") {
  const auto values = temp_dir() / "values.json";
  auto r = run({"build", toy_csv(), "--domains", toy_values(), "--rmin", "1", "--export-values", values.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("ad_nodes       7\n") != std::string::npos);
  CHECK(r.out.find("vary_nodes     8\n") != std::string::npos);
  const auto j = nlohmann::json::parse(slurp(values));
  CHECK(j["a2"] == nlohmann::json::array({"1", "2", "3", "4"}));
  const auto js = nlohmann::json::parse(run({"build", toy_csv(), "--json", "--rmin", "7"}).out);
  CHECK(js["ad_nodes"] == 1);
  CHECK(js["leaf_lists"] == 1);
}

TEST_CASE("cli: default r_min from the environment") {
  ::setenv("ADTREE_RMIN", "7", 1);
  auto r = run({"build", toy_csv(), "--json"});
  CHECK(nlohmann::json::parse(r.out)["r_min"] == 7);
  CHECK(nlohmann::json::parse(run({"build", toy_csv(), "--json", "--rmin", "2"}).out)["r_min"] == 2);
  ::setenv("ADTREE_RMIN", "zero", 1);
  CHECK(run({"build", toy_csv()}).code == cli::kExitUsage);
  ::unsetenv("ADTREE_RMIN");
  CHECK(nlohmann::json::parse(run({"build", toy_csv(), "--json"}).out)["r_min"] == 16);
}

TEST_CASE("cli: learning commands") {
  auto f = run({"features", toy_csv(), "--target", "a3", "--n", "1"});
  CHECK(f.code == 0);
  CHECK(f.out.find("1\t0.650022\ta2\n") != std::string::npos);
  CHECK(f.out.find("2\t0.190875\ta1\n") != std::string::npos);

  auto r = run({"rules", toy_csv(), "--target", "a3=1", "--n", "1", "--smin", "2"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("score = 1.000 (4/4), a2 = 3 => a3 = 1\n", 0) == 0);
  const auto rj = nlohmann::json::parse(run({"rules", toy_csv(), "--target", "a3=1", "--n", "1", "--smin", "2", "--json"}).out);
  CHECK(rj["rules"][0]["support"] == 4);
  CHECK(run({"rules", toy_csv(), "--target", "a3", "--n", "1"}).code == cli::kExitError);

  auto b = run({"bayes", toy_csv(), "--domains", toy_values(), "--iters", "200", "--restarts", "2"});
  CHECK(b.code == 0);
  CHECK(b.out.rfind("attribute\tscore\tnp\n", 0) == 0);
  CHECK(b.out.find("pars = ") != std::string::npos);
  CHECK(b.out.find("Score is -19.234") != std::string::npos);
  CHECK(b.out == run({"bayes", toy_csv(), "--domains", toy_values(), "--iters", "200", "--restarts", "2"}).out);
  const auto bj = nlohmann::json::parse(run({"bayes", toy_csv(), "--iters", "10", "--json"}).out);
  CHECK(bj["nodes"].size() == 3);
}

TEST_CASE("cli: synth is deterministic") {
  const auto a = temp_dir() / "a.csv", b = temp_dir() / "b.csv", c = temp_dir() / "c.csv";
  CHECK(run({"synth", "--records", "300", "--seed", "5", "--out", a.string()}).code == 0);
  CHECK(run({"synth", "--records", "300", "--seed", "5", "--out", b.string()}).code == 0);
  CHECK(run({"synth", "--records", "300", "--seed", "6", "--out", c.string()}).code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a) != slurp(c));
  CHECK(slurp(a).rfind("t1,t2,", 0) == 0);
  const auto wiring = temp_dir() / "wiring.json";
  std::ofstream(wiring) << R"({"n_triangle": 4, "n_square": 1, "n_circle": 0, "square_parents": [[0, 1, 2, 5]]})";
  CHECK(run({"synth", "--out", c.string(), "--wiring", wiring.string()}).code == cli::kExitError);
}

TEST_CASE("cli: bounds") {
  auto r = run({"bounds", "--m", "40", "--r", "15"});
  CHECK(r.code == 0);
  CHECK(r.out.find("row_limited       10701\n") != std::string::npos);
  const auto j = nlohmann::json::parse(run({"bounds", "--m", "10", "--r", "256", "--p", "0.25", "--rmin", "1", "--json"}).out);
  CHECK(j["skewed"] == "386");
  CHECK(run({"bounds", "--m", "10", "--r", "256", "--p", "1.5"}).code == cli::kExitError);
}

TEST_CASE("cli: bench") {
  auto r = run({"bench", "--suite", "size-sweep", "--sizes", "300,600", "--json"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["rows"].size() == 2);
  auto c = run({"bench", "--suite", "contab", "--records", "500", "--tables", "20", "--reps", "1"});
  CHECK(c.code == 0);
  CHECK(c.out.find("speedup") != std::string::npos);
}

TEST_CASE("cli: usage and data errors") {
  CHECK(run({}).code == cli::kExitUsage);
  CHECK(run({"frobnicate"}).code == cli::kExitUsage);
  CHECK(run({"count", toy_csv(), "--q", "a1=1", "--bogus"}).code == cli::kExitUsage);
  CHECK(run({"count", toy_csv()}).code == cli::kExitUsage);
  CHECK(run({"bench", "--suite", "nope"}).code == cli::kExitUsage);
  CHECK(run({"count", toy_csv(), "--q", "a1=1", "--delimiter", "ab"}).code == cli::kExitUsage);
  auto bad = run({"count", toy_csv(), "--q", "zz=1"});
  CHECK(bad.code == cli::kExitError);
  CHECK(bad.err.find("zz") != std::string::npos);
  CHECK(run({"count", "/nonexistent.csv", "--q", ""}).code == cli::kExitError);
  CHECK(run({"contab", toy_csv(), "--attrs", "a1,a1"}).code == cli::kExitError);
  CHECK(run({"--help"}).code == 0);
}
