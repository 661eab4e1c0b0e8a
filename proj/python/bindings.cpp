#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "adtree/bounds.hpp"
#include "adtree/contab.hpp"
#include "adtree/counter.hpp"
#include "adtree/dataset.hpp"
#include "adtree/error.hpp"
#include "adtree/mlapps.hpp"
#include "adtree/oracle.hpp"
#include "adtree/serialize.hpp"
#include "adtree/tree.hpp"

namespace py = pybind11;
using namespace adtree;

namespace {

using DatasetPtr = std::shared_ptr<Dataset>;

Attr to_attr(const py::handle& h, const Dataset& d) {
  if (py::isinstance<py::str>(h)) return d.attribute_index(h.cast<std::string>());
  const auto i = h.cast<long long>();
  if (i < 0 || static_cast<std::size_t>(i) >= d.num_attributes()) throw ArgumentError("attribute index out of range");
  return static_cast<Attr>(i);
}

std::vector<Attr> to_attrs(const py::iterable& items, const Dataset& d) {
  std::vector<Attr> out;
  for (const auto& h : items) out.push_back(to_attr(h, d));
  return out;
}

// Text "a=1,b=2", or a mapping {attr: code} with names or indices as keys.
Query to_query(const py::object& q, const Dataset& d) {
  if (q.is_none()) return {};
  if (py::isinstance<py::str>(q)) return parse_query(q.cast<std::string>(), d);
  std::vector<Term> terms;
  for (const auto& [k, v] : q.cast<py::dict>()) terms.push_back({to_attr(k, d), v.cast<Value>()});
  Query out(std::move(terms));
  out.validate(d);
  return out;
}

py::dict table_dict(const ContingencyTable& ct) {
  py::dict out;
  for (std::size_t i = 0; i < ct.size(); ++i) {
    const auto key = ct.key(i);
    out[py::tuple(py::cast(std::vector<Value>(key.begin(), key.end())))] = ct.count(i);
  }
  return out;
}

py::int_ big(const BigInt& v) { return py::int_(py::reinterpret_steal<py::object>(PyLong_FromString(to_string(v).c_str(), nullptr, 10))); }

// Tree plus the data it indexes; keeps both alive for Python.
struct PyTree {
  ADTree tree;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sparse ADtree counting over categorical datasets";

  auto& base = py::register_exception<Error>(m, "AdtreeError", PyExc_RuntimeError);
  py::register_exception<FormatError>(m, "FormatError", base.ptr());
  py::register_exception<ArgumentError>(m, "ArgumentError", base.ptr());
  py::register_exception<QueryError>(m, "QueryError", base.ptr());
  py::register_exception<IntegrityError>(m, "IntegrityError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<SizeError>(m, "SizeError", base.ptr());

  py::class_<Dataset, DatasetPtr>(m, "Dataset")
      .def(py::init([](std::vector<std::string> names, std::vector<std::uint32_t> arities,
                       const std::vector<std::vector<Value>>& rows) {
             std::vector<Value> codes;
             for (const auto& r : rows) {
               if (r.size() != names.size()) throw FormatError("row width differs from the number of names");
               codes.insert(codes.end(), r.begin(), r.end());
             }
             return std::make_shared<Dataset>(std::move(names), std::move(arities), std::move(codes));
           }),
           py::arg("names"), py::arg("arities"), py::arg("rows"))
      .def_property_readonly("names", &Dataset::names)
      .def_property_readonly("arities", &Dataset::arities)
      .def_property_readonly("num_records", &Dataset::num_records)
      .def_property_readonly("num_attributes", &Dataset::num_attributes)
      .def("value", &Dataset::value, py::arg("record"), py::arg("attr"))
      .def("row", [](const Dataset& d, RecordIndex r) {
        if (r >= d.num_records()) throw py::index_error("record out of range");
        const auto row = d.row(r);
        return std::vector<Value>(row.begin(), row.end());
      })
      .def("value_strings", [](const Dataset& d, Attr a) { return d.value_map(a).strings(); })
      .def("checksum", &Dataset::checksum)
      .def("__len__", &Dataset::num_records)
      .def("__eq__", [](const Dataset& a, const Dataset& b) { return a == b; });

  m.def(
      "load_csv",
      [](const std::filesystem::path& path, char delimiter,
         std::unordered_map<std::string, std::vector<std::string>> domains) {
        CsvOptions opts;
        opts.delimiter = delimiter;
        opts.declared_domains = std::move(domains);
        return std::make_shared<Dataset>(load_csv(path, opts));
      },
      py::arg("path"), py::arg("delimiter") = ',', py::arg("domains") = py::dict());
  m.def(
      "parse_csv",
      [](const std::string& text, char delimiter, std::unordered_map<std::string, std::vector<std::string>> domains) {
        CsvOptions opts;
        opts.delimiter = delimiter;
        opts.declared_domains = std::move(domains);
        return std::make_shared<Dataset>(parse_csv(text, opts));
      },
      py::arg("text"), py::arg("delimiter") = ',', py::arg("domains") = py::dict());
  m.def(
      "synth",
      [](std::uint64_t records, std::uint64_t seed, std::uint32_t triangles, std::uint32_t squares,
         std::uint32_t circles) {
        SynthConfig sc;
        sc.n_records = records;
        sc.seed = seed;
        sc.n_triangle = triangles;
        sc.n_square = squares;
        sc.n_circle = circles;
        return std::make_shared<Dataset>(synth_generate(sc));
      },
      py::arg("records"), py::arg("seed") = 1, py::arg("triangles") = 8, py::arg("squares") = 8,
      py::arg("circles") = 8);

  py::class_<PyTree>(m, "ADTree")
      .def_static(
          "build", [](DatasetPtr d, std::uint32_t r_min) { return PyTree{ADTree::build(std::move(d), r_min)}; },
          py::arg("dataset"), py::arg("r_min") = kDefaultRMin)
      .def_static(
          "load",
          [](const std::filesystem::path& path, DatasetPtr d) { return PyTree{load_tree(path, std::move(d))}; },
          py::arg("path"), py::arg("dataset"))
      .def("save", [](const PyTree& t, const std::filesystem::path& path) { save_tree(t.tree, path); })
      .def_property_readonly("r_min", [](const PyTree& t) { return t.tree.r_min(); })
      .def("stats",
           [](const PyTree& t) {
             const auto st = t.tree.stats();
             py::dict out;
             out["ad_nodes"] = st.ad_nodes;
             out["vary_nodes"] = st.vary_nodes;
             out["leaf_lists"] = st.leaf_lists;
             out["leaf_entries"] = st.leaf_list_entries;
             out["bytes"] = st.estimated_bytes;
             out["build_seconds"] = st.build_seconds;
             return out;
           })
      .def("check_invariants", [](const PyTree& t) { t.tree.check_invariants(); })
      .def(
          "count", [](const PyTree& t, const py::object& q) { return count(t.tree, to_query(q, t.tree.dataset())); },
          py::arg("query") = py::none())
      .def(
          "contab",
          [](const PyTree& t, const py::iterable& attrs, const py::object& cond) {
            const Dataset& d = t.tree.dataset();
            return table_dict(TreeCounter(t.tree).contab(to_attrs(attrs, d), to_query(cond, d)));
          },
          py::arg("attrs"), py::arg("cond") = py::none())
      .def(
          "info_gain",
          [](const PyTree& t, const py::handle& target, const py::iterable& attrs) {
            const Dataset& d = t.tree.dataset();
            return info_gain(TreeCounter(t.tree), to_attr(target, d), to_attrs(attrs, d)).gain;
          },
          py::arg("target"), py::arg("attrs"))
      .def(
          "feature_select",
          [](const PyTree& t, const py::handle& target, std::size_t n) {
            const Dataset& d = t.tree.dataset();
            py::list out;
            for (const auto& f : feature_select(TreeCounter(t.tree), to_attr(target, d), n)) {
              out.append(py::make_tuple(f.attrs, f.gain));
            }
            return out;
          },
          py::arg("target"), py::arg("n"))
      .def(
          "hill_climb",
          [](const PyTree& t, std::uint64_t iterations, std::uint32_t restarts, std::uint64_t seed,
             std::size_t max_parents) {
            const auto res = bn_hill_climb(TreeCounter(t.tree), {iterations, restarts, seed, max_parents});
            py::dict out;
            out["score"] = res.best_score;
            out["order"] = res.best.order();
            py::dict parents;
            for (Attr a = 0; a < res.best.size(); ++a) parents[py::int_(a)] = res.best.parents(a);
            out["parents"] = parents;
            out["accepted"] = res.accepted;
            out["tables_built"] = res.tables_built;
            return out;
          },
          py::arg("iterations") = 1000, py::arg("restarts") = 1, py::arg("seed") = 1, py::arg("max_parents") = 8)
      .def(
          "rules",
          [](const PyTree& t, const py::handle& target, Value value, std::size_t n, Count s_min, std::size_t top) {
            const Dataset& d = t.tree.dataset();
            py::list out;
            for (const auto& r : rule_search(TreeCounter(t.tree), to_attr(target, d), value, n, s_min, top)) {
              py::dict assign;
              for (const auto& term : r.assign.terms()) assign[py::int_(term.attr)] = term.value;
              out.append(py::make_tuple(assign, r.hits, r.support));
            }
            return out;
          },
          py::arg("target"), py::arg("value"), py::arg("n"), py::arg("s_min") = 1, py::arg("top") = 10)
      .def("__eq__", [](const PyTree& a, const PyTree& b) { return a.tree == b.tree; });

  m.def(
      "linear_count", [](const Dataset& d, const py::object& q) { return linear_count(d, to_query(q, d)); },
      py::arg("dataset"), py::arg("query") = py::none());
  m.def(
      "linear_contab",
      [](const Dataset& d, const py::iterable& attrs, const py::object& cond) {
        return table_dict(linear_contab(d, to_attrs(attrs, d), to_query(cond, d)));
      },
      py::arg("dataset"), py::arg("attrs"), py::arg("cond") = py::none());

  m.def(
      "memory_bounds",
      [](std::uint64_t m_, std::uint64_t r, std::uint64_t r_min, std::optional<double> p) {
        const auto b = memory_bounds({m_, r, r_min, p});
        py::dict out;
        out["full_worst_case"] = big(b.full_worst_case);
        out["dense_worst_case"] = big(b.dense_worst_case);
        out["row_limited"] = big(b.row_limited);
        out["build_cost"] = big(b.build_cost);
        out["row_limited_leaf"] = big(b.row_limited_leaf);
        if (b.skewed) out["skewed"] = big(*b.skewed);
        if (b.correlated) out["correlated"] = big(*b.correlated);
        if (b.skewed_leaf) out["skewed_leaf"] = big(*b.skewed_leaf);
        if (b.correlated_leaf) out["correlated_leaf"] = big(*b.correlated_leaf);
        return out;
      },
      py::arg("m"), py::arg("r"), py::arg("r_min") = 1, py::arg("p") = py::none());
}
