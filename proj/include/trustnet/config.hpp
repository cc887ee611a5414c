#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "trustnet/adversary.hpp"
#include "trustnet/privacy/protocols.hpp"

namespace trustnet {

/// A bad configuration. `key()` names the offending setting.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct SimConfig {
  std::size_t peers = 6000;
  std::size_t ba_m = 3;
  std::uint16_t categories = 32;
  double zipf_alpha = 0.8;
  double edge_limit = 2.0;
  double degree_of_rewiring = 0.3;
  double degree_of_deception = 0.1;
  double malicious_fraction = 0.1;
  ThreatModel threat_model = ThreatModel::a;
  double churn_fraction = 0.10;
  int bfs_ttl = 5;
  int dfs_ttl = 10;
  std::size_t searches_per_generation = 5000;
  std::size_t generations = 100;
  bool exact_query_count = false;
  privacy::PrivacyMode privacy = privacy::PrivacyMode::off;
  unsigned prefix_bits = 16;
  std::size_t bloom_bits = 1024;
  std::size_t bloom_hashes = 7;
  std::size_t files_per_peer = 20;
  std::size_t files_per_category = 100;
  std::size_t min_categories = 3;
  std::size_t max_categories = 6;
  std::size_t max_fanout = 10;
  std::size_t trust_cache_size = 32;
  std::size_t cc_sample = 200;
  double recency_rho = 1.0;
  std::uint32_t unreachable_path_len = 15;
  std::uint64_t seed = 1;

  // Optional outputs and checks.
  bool search_trace = false;       // trace.log
  std::size_t graph_dump_every = 0;  // graph-<gen>.edges every n generations; 0 = never
  bool census = false;             // census.csv
  bool adaptation_log = false;     // adaptation.csv
  bool privacy_trace = false;      // privacy-trace.csv
  bool trust_snapshot = false;     // trust.csv with every cache after the last generation
  bool check_invariants = false;   // overlay checks after every mutation
};

/// Every recognised key, in a stable order.
const std::vector<std::string>& config_keys();

/// Sets one key from its textual value. Throws ConfigError on an unknown
/// key or an unparsable value; range checks are left to validate().
void set_config_value(SimConfig& cfg, std::string_view key, std::string_view value);

/// Current value of a key, formatted the way set_config_value reads it.
std::string get_config_value(const SimConfig& cfg, std::string_view key);

/// Throws ConfigError naming the first key that is out of range.
void validate(const SimConfig& cfg);

/// Flat `key = value` lines; `#` starts a comment. Later lines win.
void apply_config_text(SimConfig& cfg, std::istream& in, const std::string& source = "<config>");
SimConfig load_config_file(const std::string& path);

/// All keys as `key = value` lines.
void write_config(std::ostream& out, const SimConfig& cfg);

}  // namespace trustnet
