#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "trustnet/adaptation.hpp"
#include "trustnet/config.hpp"
#include "trustnet/metrics.hpp"
#include "trustnet/network.hpp"
#include "trustnet/privacy/protocols.hpp"
#include "trustnet/search.hpp"

namespace trustnet {

/// Builds the network from a config and advances it one generation at a
/// time. Generation 0 is the initial state before any search; generations
/// 1..G each run churn, one query workload and the resulting adaptation.
class Simulator {
 public:
  explicit Simulator(SimConfig cfg);
  ~Simulator();
  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  /// Report on the current state without running anything.
  MetricsReport snapshot_report();
  /// Runs the next generation and reports on its end state.
  MetricsReport run_generation();

  std::size_t generation() const { return generation_; }
  const SimConfig& config() const { return cfg_; }
  Network& network() { return net_; }
  const Network& network() const { return net_; }
  const FileCatalog& catalog() const { return catalog_; }
  const std::vector<SearchRecord>& last_searches() const { return searches_; }
  const std::vector<PeerId>& inactive() const { return inactive_; }
  privacy::ProtocolTrace& privacy_trace() { return privacy_trace_; }
  /// Overlay invariant failures seen so far (needs check_invariants).
  std::size_t invariant_violations() const { return net_.graph.violation_count(); }

  void set_search_trace(SearchEngine::TraceSink sink);
  void set_adaptation_log(Adaptation::LogSink sink);

 private:
  void churn(Rng& rng);

  SimConfig cfg_;
  ContentParams content_;
  Network net_;
  FileCatalog catalog_;
  SearchEngine search_;
  Adaptation adaptation_;
  std::unique_ptr<privacy::CryptoSuite> crypto_;
  privacy::ProtocolTrace privacy_trace_;
  std::unique_ptr<privacy::PrivacyProtocols> privacy_;
  std::vector<PeerId> inactive_;
  std::vector<SearchRecord> searches_;
  std::size_t generation_ = 0;
};

ContentParams content_params(const SimConfig& cfg);

/// Runs generations 0..G and writes the CSVs into `out_dir`. `variant`, when
/// non-empty, is appended to file names: metrics-<variant>.csv.
struct RunSummary {
  std::vector<MetricsReport> reports;
  std::vector<std::filesystem::path> files;
  std::size_t invariant_violations = 0;
};
RunSummary run_simulation(const SimConfig& cfg, const std::filesystem::path& out_dir, const std::string& variant = "");

/// One run per value of `key`; an empty value list runs the base config once.
std::vector<RunSummary> run_experiment(const SimConfig& base, const std::string& key,
                                       const std::vector<std::string>& values, const std::filesystem::path& out_dir);

}  // namespace trustnet
