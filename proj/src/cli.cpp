#include "adtree/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "adtree/bench.hpp"
#include "adtree/bounds.hpp"
#include "adtree/contab.hpp"
#include "adtree/counter.hpp"
#include "adtree/dataset.hpp"
#include "adtree/error.hpp"
#include "adtree/mlapps.hpp"
#include "adtree/serialize.hpp"
#include "adtree/tree.hpp"

namespace adtree::cli {

namespace {

using Json = nlohmann::ordered_json;

// Bad flag combinations the parser cannot see; exit status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  bool json = false;
  std::string delimiter = ",";
  std::string domains;
  std::string data;
  std::uint32_t r_min = kDefaultRMin;
  std::string backend = "adtree";
};

struct Input {
  std::shared_ptr<const Dataset> data;
  std::optional<ADTree> tree;
};

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::uint32_t default_r_min() {
  const char* env = std::getenv("ADTREE_RMIN");
  if (env == nullptr || *env == '\0') return kDefaultRMin;
  char* end = nullptr;
  const unsigned long v = std::strtoul(env, &end, 10);
  if (*end != '\0' || v < 1 || v > 0xffffffffUL) {
    throw UsageError(std::string("ADTREE_RMIN must be a positive integer, got '") + env + "'");
  }
  return static_cast<std::uint32_t>(v);
}

char delimiter_char(const std::string& s) {
  if (s == "\\t" || s == "tab") return '\t';
  if (s.size() != 1) throw UsageError("--delimiter takes one character, 'tab' or '\\t'");
  return s[0];
}

std::shared_ptr<const Dataset> load_dataset(const std::string& path, const Common& c) {
  CsvOptions opts;
  opts.delimiter = delimiter_char(c.delimiter);
  if (!c.domains.empty()) opts.declared_domains = load_value_maps(c.domains);
  return std::make_shared<const Dataset>(load_csv(path, opts));
}

Input load_input(const std::string& path, const Common& c, bool need_tree) {
  Input in;
  if (is_tree_file(path)) {
    if (c.data.empty()) throw UsageError("a tree file input needs --data CSV (the records it was built from)");
    in.data = load_dataset(c.data, c);
    in.tree = load_tree(path, in.data);
    return in;
  }
  in.data = load_dataset(path, c);
  if (need_tree) in.tree = ADTree::build(in.data, c.r_min);
  return in;
}

std::unique_ptr<Counter> make_counter(const Input& in, const Common& c) {
  if (c.backend == "linear") return std::make_unique<LinearCounter>(*in.data);
  return std::make_unique<TreeCounter>(*in.tree);
}

Attr resolve_attr(const std::string& token, const Dataset& d) {
  const std::string t = trim(token);
  if (!t.empty() && t[0] == '@') {
    char* end = nullptr;
    const unsigned long i = std::strtoul(t.c_str() + 1, &end, 10);
    if (t.size() == 1 || *end != '\0' || i >= d.num_attributes()) {
      throw ArgumentError("bad attribute index '" + t + "'");
    }
    return static_cast<Attr>(i);
  }
  return d.attribute_index(t);
}

std::vector<Attr> resolve_attr_list(const std::string& text, const Dataset& d) {
  std::vector<Attr> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(resolve_attr(tok, d));
  if (out.empty()) throw ArgumentError("empty attribute list");
  return out;
}

std::vector<std::string> names_of(std::span<const Attr> attrs, const Dataset& d) {
  std::vector<std::string> out;
  for (Attr a : attrs) out.push_back(d.names()[a]);
  return out;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

// ---- subcommands --------------------------------------------------------------

Json stats_json(const TreeStats& st, const Dataset& d, std::uint32_t r_min) {
  return Json{{"records", d.num_records()},       {"attributes", d.num_attributes()},
              {"r_min", r_min},                   {"ad_nodes", st.ad_nodes},
              {"vary_nodes", st.vary_nodes},      {"leaf_lists", st.leaf_lists},
              {"leaf_entries", st.leaf_list_entries}, {"bytes", st.estimated_bytes},
              {"build_seconds", st.build_seconds}};
}

void cmd_build(const std::string& csv, const std::string& save, const std::string& export_values, const Common& c,
               std::ostream& out) {
  const auto data = load_dataset(csv, c);
  const ADTree t = ADTree::build(data, c.r_min);
  if (!save.empty()) save_tree(t, save);
  if (!export_values.empty()) {
    std::ofstream f(export_values);
    if (!f) throw ArgumentError("cannot write " + export_values);
    f << value_maps_to_json(*data) << '\n';
  }
  const Json j = stats_json(t.stats(), *data, t.r_min());
  if (c.json) {
    out << j.dump(2) << '\n';
    return;
  }
  for (const auto& [k, v] : j.items()) {
    std::string val = v.is_number_float() ? fmt("%.3f", v.get<double>()) : v.dump();
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-14s %s\n", k.c_str(), val.c_str());
    out << buf;
  }
  if (!save.empty()) out << "saved          " << save << '\n';
}

void cmd_count(const std::string& input, const std::string& qtext, const Common& c, std::ostream& out) {
  const Input in = load_input(input, c, c.backend != "linear");
  const Query q = parse_query(qtext, *in.data);
  const Count n = make_counter(in, c)->count(q);
  if (c.json) {
    out << Json{{"query", format_query(q, *in.data)}, {"count", n}}.dump(2) << '\n';
  } else {
    out << n << '\n';
  }
}

void cmd_contab(const std::string& input, const std::string& attr_text, const std::string& cond_text, bool dense,
                const Common& c, std::ostream& out) {
  const Input in = load_input(input, c, c.backend != "linear");
  const Dataset& d = *in.data;
  const auto attrs = resolve_attr_list(attr_text, d);
  const Query cond = parse_query(cond_text, d);
  const ContingencyTable ct = make_counter(in, c)->contab(attrs, cond);

  // Rows as (value strings, count), odometer order.
  std::vector<std::pair<std::vector<std::string>, Count>> rows;
  auto strings_of = [&](std::span<const Value> key) {
    std::vector<std::string> s;
    for (std::size_t i = 0; i < key.size(); ++i) s.push_back(d.value_map(ct.attrs()[i]).string_of(key[i]));
    return s;
  };
  if (dense) {
    const auto cells = ct_to_dense(ct);
    std::vector<Value> key(ct.width(), 1);
    for (Count n : cells) {
      rows.emplace_back(strings_of(key), n);
      for (std::size_t i = ct.width(); i-- > 0;) {
        if (key[i] < ct.arities()[i]) {
          ++key[i];
          break;
        }
        key[i] = 1;
      }
    }
  } else {
    for (std::size_t i = 0; i < ct.size(); ++i) rows.emplace_back(strings_of(ct.key(i)), ct.count(i));
  }

  const auto names = names_of(ct.attrs(), d);
  if (c.json) {
    Json cells = Json::array();
    for (const auto& [vals, n] : rows) cells.push_back(Json{{"values", vals}, {"count", n}});
    out << Json{{"attrs", names},
                {"condition", format_query(cond, d)},
                {"total", ct.total()},
                {"cells", std::move(cells)}}
               .dump(2)
        << '\n';
    return;
  }
  out << join(names, "\t") << "\tcount\n";
  for (const auto& [vals, n] : rows) out << join(vals, "\t") << '\t' << n << '\n';
}

void cmd_features(const std::string& input, const std::string& target_text, std::size_t n, std::size_t top,
                  const Common& c, std::ostream& out) {
  const Input in = load_input(input, c, c.backend != "linear");
  const Dataset& d = *in.data;
  const Attr target = resolve_attr(target_text, d);
  auto ranked = feature_select(*make_counter(in, c), target, n);
  if (top > 0 && ranked.size() > top) ranked.resize(top);
  if (c.json) {
    Json list = Json::array();
    for (const auto& f : ranked) list.push_back(Json{{"attrs", names_of(f.attrs, d)}, {"gain", f.gain}});
    out << Json{{"target", d.names()[target]}, {"n", n}, {"features", std::move(list)}}.dump(2) << '\n';
    return;
  }
  out << "target " << d.names()[target] << ", " << n << " input attribute(s)\n";
  out << "rank\tgain\tattributes\n";
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    out << i + 1 << '\t' << fmt("%.6f", ranked[i].gain) << '\t' << join(names_of(ranked[i].attrs, d), " ") << '\n';
  }
}

void cmd_bayes(const std::string& input, const HillClimbConfig& hc, const Common& c, std::ostream& out) {
  const Input in = load_input(input, c, c.backend != "linear");
  const Dataset& d = *in.data;
  const auto counter = make_counter(in, c);
  const HillClimbResult res = bn_hill_climb(*counter, hc);
  const BnScore detail = bn_score_detail(*counter, res.best);
  const auto& order = res.best.order();
  if (c.json) {
    Json nodes = Json::array();
    for (Attr a : order) {
      nodes.push_back(Json{{"attribute", d.names()[a]},
                           {"score", detail.node_likelihood[a]},
                           {"np", detail.node_params[a]},
                           {"parents", names_of(res.best.parents(a), d)}});
    }
    out << Json{{"score", res.best_score},
                {"penalty", detail.penalty},
                {"iterations", hc.iterations},
                {"restarts", hc.restarts},
                {"seed", hc.seed},
                {"best_restart", res.best_restart},
                {"accepted", res.accepted},
                {"tables_built", res.tables_built},
                {"nodes", std::move(nodes)}}
               .dump(2)
        << '\n';
    return;
  }
  out << "attribute\tscore\tnp\n";
  for (Attr a : order) {
    const auto& ps = res.best.parents(a);
    out << d.names()[a] << '\t' << fmt("%g", detail.node_likelihood[a]) << '\t' << detail.node_params[a]
        << "\tpars = " << (ps.empty() ? std::string("<no parents>") : join(names_of(ps, d), " ")) << '\n';
  }
  out << "\nScore is " << fmt("%.6f", res.best_score) << " (penalty " << fmt("%.6f", detail.penalty) << ")\n";
  out << hc.iterations << " iterations x " << hc.restarts << " restart(s), " << res.accepted << " accepted, "
      << res.tables_built << " tables built\n";
}

std::string rule_text(const Rule& r, const Dataset& d) {
  std::string s = "score = " + fmt("%.3f", r.score()) + " (" + std::to_string(r.hits) + "/" +
                  std::to_string(r.support) + ")";
  for (const auto& t : r.assign.terms()) s += ", " + d.names()[t.attr] + " = " + d.value_map(t.attr).string_of(t.value);
  return s + " => " + d.names()[r.target] + " = " + d.value_map(r.target).string_of(r.target_value);
}

void cmd_rules(const std::string& input, const std::string& target_text, std::size_t n, Count s_min, std::size_t top,
               const Common& c, std::ostream& out) {
  const Input in = load_input(input, c, c.backend != "linear");
  const Dataset& d = *in.data;
  const Query target = parse_query(target_text, d);
  if (target.size() != 1) throw ArgumentError("--target takes exactly one NAME=VALUE");
  const Term t = target.terms()[0];
  RuleSearchStats st;
  const auto rules = rule_search(*make_counter(in, c), t.attr, t.value, n, s_min, top, &st);
  if (c.json) {
    Json list = Json::array();
    for (const auto& r : rules) {
      Json assign = Json::object();
      for (const auto& term : r.assign.terms()) assign[d.names()[term.attr]] = d.value_map(term.attr).string_of(term.value);
      list.push_back(Json{{"score", r.score()}, {"hits", r.hits}, {"support", r.support}, {"assign", std::move(assign)}});
    }
    out << Json{{"target", d.names()[t.attr]},
                {"value", d.value_map(t.attr).string_of(t.value)},
                {"n", n},
                {"s_min", s_min},
                {"tables", st.tables},
                {"antecedents", st.antecedents},
                {"rules", std::move(list)}}
               .dump(2)
        << '\n';
    return;
  }
  for (const auto& r : rules) out << rule_text(r, d) << '\n';
  if (rules.empty()) out << "no rule reaches support " << s_min << '\n';
}

void cmd_synth(SynthConfig sc, const std::string& wiring, const std::string& out_path, const Common& c,
               std::ostream& out) {
  if (!wiring.empty()) {
    std::ifstream f(wiring);
    if (!f) throw ArgumentError("cannot read " + wiring);
    std::stringstream ss;
    ss << f.rdbuf();
    sc = synth_config_from_json(ss.str(), sc);
  }
  const Dataset d = synth_generate(sc);
  write_csv(d, out_path, delimiter_char(c.delimiter));
  if (c.json) {
    out << Json{{"out", out_path}, {"records", d.num_records()}, {"attributes", d.num_attributes()},
                {"seed", sc.seed}, {"checksum", d.checksum()}}
               .dump(2)
        << '\n';
  } else {
    out << "wrote " << d.num_records() << " records x " << d.num_attributes() << " attributes to " << out_path
        << '\n';
  }
}

void cmd_bounds(const BoundParams& bp, const Common& c, std::ostream& out) {
  const BoundsReport r = memory_bounds(bp);
  std::vector<std::pair<std::string, std::string>> lines = {
      {"full_worst_case", to_string(r.full_worst_case)},
      {"dense_worst_case", to_string(r.dense_worst_case)},
      {"row_limited", to_string(r.row_limited)},
      {"build_cost", to_string(r.build_cost)},
  };
  if (r.skewed) lines.emplace_back("skewed", to_string(*r.skewed));
  if (r.correlated) lines.emplace_back("correlated", to_string(*r.correlated));
  lines.emplace_back("row_limited_leaf", to_string(r.row_limited_leaf));
  if (r.skewed_leaf) lines.emplace_back("skewed_leaf", to_string(*r.skewed_leaf));
  if (r.correlated_leaf) lines.emplace_back("correlated_leaf", to_string(*r.correlated_leaf));

  if (c.json) {
    // Big values stay strings; they can exceed any fixed-width integer.
    Json j{{"m", r.m}, {"r", r.r}, {"r_min", r.r_min}};
    if (r.q_skewed) j["q_skewed"] = *r.q_skewed;
    if (r.q_correlated) j["q_correlated"] = *r.q_correlated;
    for (const auto& [k, v] : lines) j[k] = v;
    out << j.dump(2) << '\n';
    return;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "M = %llu, R = %llu, r_min = %llu\n", static_cast<unsigned long long>(r.m),
                static_cast<unsigned long long>(r.r), static_cast<unsigned long long>(r.r_min));
  out << buf;
  if (r.q_skewed) out << "q_skewed          " << fmt("%.6f", *r.q_skewed) << '\n';
  if (r.q_correlated) out << "q_correlated      " << fmt("%.6f", *r.q_correlated) << '\n';
  for (const auto& [k, v] : lines) {
    std::snprintf(buf, sizeof buf, "%-17s ", k.c_str());
    out << buf << v << '\n';
  }
}

void cmd_bench(const std::string& suite, const std::string& input, std::uint64_t records, BenchConfig bc,
               const std::string& target_text, const Common& c, std::ostream& out) {
  bc.r_min = c.r_min;
  BenchReport report;
  if (suite == "size-sweep") {
    report = bench_size_sweep(bc);
  } else {
    std::shared_ptr<const Dataset> data;
    if (!input.empty()) {
      data = load_dataset(input, c);
    } else {
      SynthConfig sc;
      sc.n_records = records;
      sc.seed = bc.seed;
      data = std::make_shared<const Dataset>(synth_generate(sc));
    }
    if (!target_text.empty()) {
      if (target_text.find('=') != std::string::npos) {
        const Query t = parse_query(target_text, *data);
        if (t.size() != 1) throw ArgumentError("--target takes NAME or NAME=VALUE");
        bc.target = t.terms()[0].attr;
        bc.target_value = t.terms()[0].value;
      } else {
        bc.target = resolve_attr(target_text, *data);
      }
    }
    if (suite == "contab") report = bench_contab(data, bc);
    else if (suite == "features") report = bench_features(data, bc);
    else if (suite == "rules") report = bench_rules(data, bc);
    else if (suite == "bayes") report = bench_bayes(data, bc);
    else report = bench_rmin_sweep(data, bc);
  }
  out << (c.json ? report_to_json(report) + "\n" : format_report(report));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Common c;
  try {
    c.r_min = default_r_min();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  CLI::App app{"Sparse ADtree: cached counts and contingency tables for categorical data"};
  app.name("adtree");
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--json", c.json, "Machine-readable output");
  app.add_option("--delimiter", c.delimiter, "CSV delimiter: one character, 'tab' or '\\t'")->capture_default_str();
  app.add_option("--domains", c.domains, "Declared value domains (JSON, same format as --export-values)");
  app.add_option("--data", c.data, "CSV the tree file was built from");
  app.add_option("--rmin", c.r_min, "Leaf-list threshold; 1 disables leaf-lists (default: $ADTREE_RMIN or 16)")
      ->check(CLI::Range(1u, 0xffffffffu))
      ->capture_default_str();
  app.add_option("--backend", c.backend, "Counting backend")
      ->check(CLI::IsMember({"adtree", "linear"}))
      ->capture_default_str();

  std::string input, save, export_values, qtext, attr_text, cond_text, target_text, wiring, out_path, suite;
  bool dense = false;
  std::size_t n = 1, top = 10;
  Count s_min = 1;
  HillClimbConfig hc;
  SynthConfig sc;
  BoundParams bp;
  double p = -1.0;
  BenchConfig bc;
  std::uint64_t bench_records = 100000;

  auto* build = app.add_subcommand("build", "Build a tree and report its size");
  build->add_option("csv", input, "Input CSV")->required();
  build->add_option("--save", save, "Write the tree to this file");
  build->add_option("--export-values", export_values, "Write the value maps as JSON");

  auto* count = app.add_subcommand("count", "Count records matching a query");
  count->add_option("input", input, "CSV or tree file")->required();
  count->add_option("--q", qtext, "Query, e.g. \"a2=3,a3=1\" or \"@1=3\"; empty matches all")->required();

  auto* contab = app.add_subcommand("contab", "Contingency table");
  contab->add_option("input", input, "CSV or tree file")->required();
  contab->add_option("--attrs", attr_text, "Attribute names or @index, comma separated")->required();
  contab->add_option("--cond", cond_text, "Condition query");
  contab->add_flag("--dense", dense, "Include zero cells");

  auto* features = app.add_subcommand("features", "Rank attribute sets by information gain");
  features->add_option("input", input, "CSV or tree file")->required();
  features->add_option("--target", target_text, "Output attribute")->required();
  features->add_option("--n", n, "Attributes per set")->check(CLI::PositiveNumber)->capture_default_str();
  features->add_option("--top", top, "Sets to print; 0 prints all")->capture_default_str();

  auto* bayes = app.add_subcommand("bayes", "Hill-climb a Bayes-net structure");
  bayes->add_option("input", input, "CSV or tree file")->required();
  bayes->add_option("--iters", hc.iterations, "Iterations per restart")->capture_default_str();
  bayes->add_option("--restarts", hc.restarts, "Restarts")->check(CLI::PositiveNumber)->capture_default_str();
  bayes->add_option("--seed", hc.seed, "RNG seed")->capture_default_str();
  bayes->add_option("--max-parents", hc.max_parents, "Parent cap per node")->capture_default_str();

  auto* rules = app.add_subcommand("rules", "Search conjunctive rules");
  rules->add_option("input", input, "CSV or tree file")->required();
  rules->add_option("--target", target_text, "NAME=VALUE to predict")->required();
  rules->add_option("--n", n, "Antecedent size")->check(CLI::PositiveNumber)->capture_default_str();
  rules->add_option("--smin", s_min, "Minimum antecedent support")->capture_default_str();
  rules->add_option("--top", top, "Rules to keep; 0 keeps all")->capture_default_str();

  auto* synth = app.add_subcommand("synth", "Generate synthetic binary data");
  synth->add_option("--records", sc.n_records, "Records")->capture_default_str();
  synth->add_option("--seed", sc.seed, "RNG seed")->capture_default_str();
  synth->add_option("--out", out_path, "Output CSV")->required();
  synth->add_option("--wiring", wiring, "JSON wiring override");
  synth->add_option("--triangles", sc.n_triangle, "Root attributes")->capture_default_str();
  synth->add_option("--squares", sc.n_square, "Parity attributes")->capture_default_str();
  synth->add_option("--circles", sc.n_circle, "Noisy-copy attributes")->capture_default_str();

  auto* bounds = app.add_subcommand("bounds", "Node-count bounds for binary data");
  bounds->add_option("--m", bp.m, "Attributes")->required();
  bounds->add_option("--r", bp.r, "Records")->required();
  bounds->add_option("--p", p, "P(value 2) per attribute");

  auto* bench = app.add_subcommand("bench", "Time ADtree against linear counting");
  bench->add_option("--suite", suite, "Benchmark suite")
      ->required()
      ->check(CLI::IsMember({"contab", "features", "rules", "bayes", "rmin-sweep", "size-sweep"}));
  bench->add_option("input", input, "CSV; synthetic data when omitted");
  bench->add_option("--records", bench_records, "Synthetic records when no input is given")->capture_default_str();
  bench->add_option("--reps", bc.reps, "Repetitions per timing (median)")->capture_default_str();
  bench->add_option("--seed", bc.seed, "Workload seed")->capture_default_str();
  bench->add_option("--tables", bc.tables, "Tables in the contab workload")->capture_default_str();
  bench->add_option("--max-n", bc.max_n, "Largest attribute-set size")->capture_default_str();
  bench->add_option("--iters", bc.iterations, "Hill-climb iterations")->capture_default_str();
  bench->add_option("--restarts", bc.restarts, "Hill-climb restarts")->capture_default_str();
  bench->add_option("--target", target_text, "NAME or NAME=VALUE; default: last attribute, value 1");
  bench->add_option("--smin", bc.s_min, "Rule support threshold")->capture_default_str();
  bench->add_option("--top", bc.top_k, "Rules kept")->capture_default_str();
  bench->add_option("--rmins", bc.r_mins, "r_min values for rmin-sweep")->delimiter(',');
  bench->add_option("--sizes", bc.sizes, "Record counts for size-sweep")->delimiter(',');

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*build) {
      cmd_build(input, save, export_values, c, out);
    } else if (*count) {
      cmd_count(input, qtext, c, out);
    } else if (*contab) {
      cmd_contab(input, attr_text, cond_text, dense, c, out);
    } else if (*features) {
      cmd_features(input, target_text, n, top, c, out);
    } else if (*bayes) {
      cmd_bayes(input, hc, c, out);
    } else if (*rules) {
      cmd_rules(input, target_text, n, s_min, top, c, out);
    } else if (*synth) {
      cmd_synth(sc, wiring, out_path, c, out);
    } else if (*bounds) {
      bp.r_min = c.r_min;
      if (p >= 0.0) bp.p = p;
      cmd_bounds(bp, c, out);
    } else if (*bench) {
      cmd_bench(suite, input, bench_records, bc, target_text, c, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitOk;
}

}  // namespace adtree::cli
