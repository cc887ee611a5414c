#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "trustnet/simulator.hpp"

using namespace trustnet;
namespace fs = std::filesystem;

namespace {

SimConfig small(double malicious, std::uint64_t seed = 1) {
  SimConfig c;
  c.peers = 200;
  c.searches_per_generation = 200;
  c.generations = 6;
  c.malicious_fraction = malicious;
  c.cc_sample = 50;
  c.seed = seed;
  c.check_invariants = true;
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("trustnet-" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST(Simulator, DeterministicOutputs) {
  auto cfg = small(0.2, 7);
  cfg.search_trace = true;
  cfg.adaptation_log = true;
  const auto a = scratch("det-a"), b = scratch("det-b");
  run_simulation(cfg, a);
  run_simulation(cfg, b);
  for (const char* f : {"metrics.csv", "lcc.csv", "trace.log", "adaptation.csv"}) {
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
    EXPECT_FALSE(slurp(a / f).empty()) << f;
  }
  cfg.seed = 8;
  const auto c = scratch("det-c");
  run_simulation(cfg, c);
  EXPECT_NE(slurp(a / "metrics.csv"), slurp(c / "metrics.csv"));
  EXPECT_EQ(slurp(a / "trace.log").substr(0, 25), "query_id,hop,peer,action\n");
}

TEST(Simulator, HonestOnlyNetwork) {
  Simulator sim(small(0.0));
  for (int g = 0; g < 6; ++g) {
    const auto r = sim.run_generation();
    ASSERT_TRUE(r.honest().ar.has_value());
    EXPECT_DOUBLE_EQ(*r.honest().ar, 1.0);
    EXPECT_FALSE(r.ear.has_value());
    EXPECT_EQ(r.counters.edges_deleted, 0u);
  }
  EXPECT_EQ(sim.invariant_violations(), 0u);
}

TEST(Simulator, BaselineAndChurn) {
  Simulator sim(small(0.1));
  const auto base = sim.snapshot_report();
  EXPECT_EQ(base.generation, 0u);
  EXPECT_DOUBLE_EQ(*base.honest().aspd, 15.0);
  EXPECT_EQ(base.community_edges, 0u);
  sim.run_generation();
  EXPECT_EQ(sim.inactive().size(), 20u);
  for (PeerId p : sim.inactive()) EXPECT_FALSE(sim.network().is_active(p));
  const auto gone = sim.inactive();
  sim.run_generation();
  for (PeerId p : gone) {
    const bool still_out = std::binary_search(sim.inactive().begin(), sim.inactive().end(), p);
    EXPECT_EQ(sim.network().is_active(p), !still_out);
  }
}

TEST(Simulator, GenerationIsolation) {
  // The first k generations do not depend on how many follow.
  auto shortcfg = small(0.2, 3);
  auto longcfg = shortcfg;
  shortcfg.generations = 3;
  const auto a = run_simulation(shortcfg, scratch("iso-a"));
  const auto b = run_simulation(longcfg, scratch("iso-b"));
  std::ostringstream x, y;
  for (std::size_t g = 0; g <= 3; ++g) {
    write_metrics_rows(x, a.reports[g]);
    write_metrics_rows(y, b.reports[g]);
  }
  EXPECT_EQ(x.str(), y.str());
}

TEST(Simulator, SweepWritesOneFilePerValue) {
  auto cfg = small(0.1);
  cfg.generations = 2;
  const auto out = scratch("sweep");
  const auto runs = run_experiment(cfg, "malicious_fraction", {"0.1", "0.2"}, out);
  ASSERT_EQ(runs.size(), 2u);
  EXPECT_TRUE(fs::exists(out / "metrics-malicious_fraction-0.1.csv"));
  EXPECT_TRUE(fs::exists(out / "metrics-malicious_fraction-0.2.csv"));
  const auto single = scratch("sweep-empty");
  EXPECT_EQ(run_experiment(cfg, "", {}, single).size(), 1u);
  EXPECT_TRUE(fs::exists(single / "metrics.csv"));
  EXPECT_THROW(run_experiment(cfg, "edge_limit", {"0.3"}, scratch("sweep-bad")), ConfigError);
}

TEST(Simulator, PrivacyModesRun) {
  for (const char* mode : {"proxy", "handle", "full"}) {
    auto cfg = small(0.2);
    cfg.generations = 2;
    set_config_value(cfg, "privacy", mode);
    Simulator sim(cfg);
    sim.run_generation();
    sim.run_generation();
    const auto& trace = sim.privacy_trace();
    ASSERT_FALSE(trace.sessions().empty()) << mode;
    for (const auto& [id, info] : trace.sessions()) {
      EXPECT_TRUE(trace.requester_anonymous(id)) << mode;
      EXPECT_TRUE(trace.proxy_blind(id)) << mode;
    }
  }
}
