#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "trustnet/config.hpp"
#include "trustnet/overlay.hpp"
#include "trustnet/privacy/bloom_filter.hpp"
#include "trustnet/reputation.hpp"
#include "trustnet/search.hpp"
#include "trustnet/simulator.hpp"

namespace py = pybind11;
using namespace trustnet;

namespace {

py::object opt(const std::optional<double>& v) { return v ? py::cast(*v) : py::none(); }

py::dict class_dict(const ClassMetrics& m) {
  py::dict d;
  d["peers"] = m.peers;
  d["searches"] = m.searches;
  d["misses"] = m.misses;
  d["qmr"] = opt(m.qmr);
  d["ar"] = opt(m.ar);
  d["mean_ric"] = opt(m.mean_ric);
  d["mean_cc"] = opt(m.mean_cc);
  d["mean_clc"] = opt(m.mean_clc);
  d["aspd"] = opt(m.aspd);
  return d;
}

py::dict report_dict(const MetricsReport& r) {
  py::dict d;
  d["generation"] = r.generation;
  d["honest"] = class_dict(r.honest());
  d["malicious"] = class_dict(r.malicious());
  d["ear"] = opt(r.ear);
  d["tqpo"] = r.counters.dfs_trust_queries;
  d["trust_queries"] = r.counters.trust_queries;
  d["edges_added"] = r.counters.edges_added;
  d["edges_deleted"] = r.counters.edges_deleted;
  d["community_edges"] = r.community_edges;
  py::list lcc;
  for (const auto& v : r.lcc) lcc.append(opt(v));
  d["lcc"] = lcc;
  return d;
}

py::list edge_list(const std::vector<Edge>& edges) {
  py::list out;
  for (const auto& e : edges) out.append(py::make_tuple(e.a.value, e.b.value));
  return out;
}

SimConfig config_from(const py::dict& overrides) {
  SimConfig c;
  for (const auto& [k, v] : overrides) set_config_value(c, py::str(k).cast<std::string>(), py::str(v).cast<std::string>());
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Trust-aware P2P overlay simulator core";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<SimConfig>(m, "Config")
      .def(py::init(&config_from), py::arg("overrides") = py::dict())
      .def_static("from_file", &load_config_file, py::arg("path"))
      .def_static("keys", &config_keys)
      .def("__getitem__", [](const SimConfig& c, const std::string& k) { return get_config_value(c, k); })
      .def("__setitem__", [](SimConfig& c, const std::string& k, py::object v) {
        set_config_value(c, k, py::str(v).cast<std::string>());
      })
      .def("validate", [](const SimConfig& c) { validate(c); })
      .def("to_dict", [](const SimConfig& c) {
        py::dict d;
        for (const auto& k : config_keys()) d[py::str(k)] = get_config_value(c, k);
        return d;
      });

  py::class_<Simulator>(m, "Simulator")
      .def(py::init<SimConfig>(), py::arg("config"))
      .def("snapshot", [](Simulator& s) { return report_dict(s.snapshot_report()); })
      .def("run_generation", [](Simulator& s) { return report_dict(s.run_generation()); })
      .def_property_readonly("generation", &Simulator::generation)
      .def_property_readonly("invariant_violations", &Simulator::invariant_violations)
      .def("inactive", [](const Simulator& s) {
        std::vector<std::uint32_t> out;
        for (PeerId p : s.inactive()) out.push_back(p.value);
        return out;
      })
      .def("is_malicious", [](const Simulator& s, std::uint32_t p) {
        return s.network().dispositions.at(p).malicious();
      })
      .def("connectivity_edges", [](const Simulator& s) { return edge_list(s.network().graph.connectivity_edges()); })
      .def("community_edges", [](const Simulator& s) { return edge_list(s.network().graph.community_edges()); })
      .def("trust", [](const Simulator& s, std::uint32_t observer, std::uint32_t subject) {
        return s.network().cached_trust(PeerId{observer}, PeerId{subject});
      });

  m.def(
      "run_simulation",
      [](const SimConfig& c, const std::filesystem::path& out, const std::string& variant) {
        return run_simulation(c, out, variant).files;
      },
      py::arg("config"), py::arg("out_dir"), py::arg("variant") = "",
      "Runs every generation and writes the CSV outputs; returns the files written.");
  m.def(
      "run_experiment",
      [](const SimConfig& c, const std::string& key, const std::vector<std::string>& values,
         const std::filesystem::path& out) {
        std::vector<std::filesystem::path> files;
        for (const auto& r : run_experiment(c, key, values, out)) files.insert(files.end(), r.files.begin(), r.files.end());
        return files;
      },
      py::arg("config"), py::arg("key"), py::arg("values"), py::arg("out_dir"));

  m.def("trust_value", [](double a, double b) { return trust_value({a, b}); }, py::arg("alpha"), py::arg("beta"));
  m.def(
      "merge_indirect",
      [](std::pair<double, double> ij, std::pair<double, double> ik, std::pair<double, double> kj) {
        const auto r = merge_indirect({ij.first, ij.second}, {ik.first, ik.second}, {kj.first, kj.second});
        return std::make_pair(r.alpha, r.beta);
      },
      py::arg("r_ij"), py::arg("r_ik"), py::arg("r_kj"));
  m.def("fanout", &fanout, py::arg("prob_com"), py::arg("contactable"), py::arg("max_fanout") = 10);
  m.def(
      "power_law_edges",
      [](std::size_t n, std::size_t ba_m, std::uint64_t seed) {
        return edge_list(generate_power_law(n, ba_m, seed).connectivity_edges());
      },
      py::arg("n"), py::arg("ba_m"), py::arg("seed"));

  py::class_<privacy::BloomFilter>(m, "BloomFilter")
      .def(py::init<std::size_t, std::size_t>(), py::arg("bits") = 1024, py::arg("hashes") = 7)
      .def("insert", [](privacy::BloomFilter& f, const py::bytes& b) {
        const std::string s = b;
        f.insert(std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
      })
      .def("__contains__", [](const privacy::BloomFilter& f, const py::bytes& b) {
        const std::string s = b;
        return f.may_contain(std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
      })
      .def_property_readonly("inserted", &privacy::BloomFilter::inserted)
      .def_static("expected_fpr", &privacy::BloomFilter::expected_fpr);
}
