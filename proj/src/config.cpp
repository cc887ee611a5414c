#include "trustnet/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>

namespace trustnet {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view v) {
  T out{};
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || ptr != end || v.empty()) {
    throw ConfigError(std::string(key), "cannot parse '" + std::string(v) + "' as a number");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ConfigError(std::string(key), "expected a boolean, got '" + std::string(v) + "'");
}

std::string format_double(double d) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, d);
  return std::string(buf, r.ptr);
}

struct Field {
  std::string name;
  std::function<void(SimConfig&, std::string_view)> set;
  std::function<std::string(const SimConfig&)> get;
};

template <typename T>
Field number(std::string name, T SimConfig::*member) {
  return {name,
          [name, member](SimConfig& c, std::string_view v) { c.*member = parse_number<T>(name, v); },
          [member](const SimConfig& c) {
            if constexpr (std::is_floating_point_v<T>) {
              return format_double(c.*member);
            } else {
              return std::to_string(c.*member);
            }
          }};
}

Field flag(std::string name, bool SimConfig::*member) {
  return {name, [name, member](SimConfig& c, std::string_view v) { c.*member = parse_bool(name, v); },
          [member](const SimConfig& c) { return std::string(c.*member ? "true" : "false"); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> t;
    t.push_back(number("peers", &SimConfig::peers));
    t.push_back(number("ba_m", &SimConfig::ba_m));
    t.push_back(number("categories", &SimConfig::categories));
    t.push_back(number("zipf_alpha", &SimConfig::zipf_alpha));
    t.push_back(number("edge_limit", &SimConfig::edge_limit));
    t.push_back(number("degree_of_rewiring", &SimConfig::degree_of_rewiring));
    t.push_back(number("degree_of_deception", &SimConfig::degree_of_deception));
    t.push_back(number("malicious_fraction", &SimConfig::malicious_fraction));
    t.push_back({"threat_model",
                 [](SimConfig& c, std::string_view v) {
                   if (v == "a" || v == "A") {
                     c.threat_model = ThreatModel::a;
                   } else if (v == "b" || v == "B") {
                     c.threat_model = ThreatModel::b;
                   } else {
                     throw ConfigError("threat_model", "expected a or b, got '" + std::string(v) + "'");
                   }
                 },
                 [](const SimConfig& c) { return std::string(c.threat_model == ThreatModel::a ? "a" : "b"); }});
    t.push_back(number("churn_fraction", &SimConfig::churn_fraction));
    t.push_back(number("bfs_ttl", &SimConfig::bfs_ttl));
    t.push_back(number("dfs_ttl", &SimConfig::dfs_ttl));
    t.push_back(number("searches_per_generation", &SimConfig::searches_per_generation));
    t.push_back(number("generations", &SimConfig::generations));
    t.push_back(flag("exact_query_count", &SimConfig::exact_query_count));
    t.push_back({"privacy",
                 [](SimConfig& c, std::string_view v) {
                   const auto m = privacy::parse_privacy_mode(v);
                   if (!m) throw ConfigError("privacy", "expected off, proxy, handle or full, got '" + std::string(v) + "'");
                   c.privacy = *m;
                 },
                 [](const SimConfig& c) { return std::string(privacy::to_string(c.privacy)); }});
    t.push_back(number("prefix_bits", &SimConfig::prefix_bits));
    t.push_back(number("bloom_bits", &SimConfig::bloom_bits));
    t.push_back(number("bloom_hashes", &SimConfig::bloom_hashes));
    t.push_back(number("files_per_peer", &SimConfig::files_per_peer));
    t.push_back(number("files_per_category", &SimConfig::files_per_category));
    t.push_back(number("min_categories", &SimConfig::min_categories));
    t.push_back(number("max_categories", &SimConfig::max_categories));
    t.push_back(number("max_fanout", &SimConfig::max_fanout));
    t.push_back(number("trust_cache_size", &SimConfig::trust_cache_size));
    t.push_back(number("cc_sample", &SimConfig::cc_sample));
    t.push_back(number("recency_rho", &SimConfig::recency_rho));
    t.push_back(number("unreachable_path_len", &SimConfig::unreachable_path_len));
    t.push_back(number("seed", &SimConfig::seed));
    t.push_back(flag("search_trace", &SimConfig::search_trace));
    t.push_back(number("graph_dump_every", &SimConfig::graph_dump_every));
    t.push_back(flag("census", &SimConfig::census));
    t.push_back(flag("adaptation_log", &SimConfig::adaptation_log));
    t.push_back(flag("privacy_trace", &SimConfig::privacy_trace));
    t.push_back(flag("trust_snapshot", &SimConfig::trust_snapshot));
    t.push_back(flag("check_invariants", &SimConfig::check_invariants));
    return t;
  }();
  return table;
}

const Field& field(std::string_view key) {
  for (const auto& f : fields()) {
    if (f.name == key) return f;
  }
  throw ConfigError(std::string(key), "unknown configuration key");
}

void require(bool ok, const char* key, const std::string& what) {
  if (!ok) throw ConfigError(key, what);
}

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& f : fields()) k.push_back(f.name);
    return k;
  }();
  return keys;
}

void set_config_value(SimConfig& cfg, std::string_view key, std::string_view value) {
  field(key).set(cfg, trim(value));
}

std::string get_config_value(const SimConfig& cfg, std::string_view key) { return field(key).get(cfg); }

void validate(const SimConfig& c) {
  require(c.ba_m >= 1, "ba_m", "must be at least 1");
  require(c.peers >= c.ba_m + 1, "peers", "must exceed ba_m");
  require(c.categories >= 1, "categories", "must be at least 1");
  require(c.zipf_alpha > 0.0, "zipf_alpha", "must be positive");
  require(c.edge_limit > 1.0, "edge_limit",
          "must be greater than 1 (relative increase in connectivity is at least 1), got " + format_double(c.edge_limit));
  require(in_unit(c.degree_of_rewiring), "degree_of_rewiring", "must lie in [0, 1]");
  require(in_unit(c.degree_of_deception), "degree_of_deception", "must lie in [0, 1]");
  require(in_unit(c.malicious_fraction), "malicious_fraction", "must lie in [0, 1]");
  require(c.churn_fraction >= 0.0 && c.churn_fraction < 1.0, "churn_fraction", "must lie in [0, 1)");
  require(c.bfs_ttl >= 1, "bfs_ttl", "must be at least 1");
  require(c.dfs_ttl >= 1, "dfs_ttl", "must be at least 1");
  require(c.prefix_bits >= 1 && c.prefix_bits < 256, "prefix_bits", "must lie in [1, 255]");
  require(c.bloom_bits >= 1, "bloom_bits", "must be at least 1");
  require(c.bloom_hashes >= 1, "bloom_hashes", "must be at least 1");
  require(c.min_categories >= 1, "min_categories", "must be at least 1");
  require(c.max_categories >= c.min_categories, "max_categories", "must be at least min_categories");
  require(c.max_categories <= c.categories, "max_categories", "must not exceed categories");
  require(c.files_per_peer >= c.max_categories, "files_per_peer", "must be at least max_categories");
  require(c.files_per_category >= c.files_per_peer, "files_per_category", "must be at least files_per_peer");
  require(c.max_fanout >= 1, "max_fanout", "must be at least 1");
  require(c.trust_cache_size >= 1, "trust_cache_size", "must be at least 1");
  require(c.recency_rho > 0.0 && c.recency_rho <= 1.0, "recency_rho", "must lie in (0, 1]");
  require(c.unreachable_path_len >= 1, "unreachable_path_len", "must be at least 1");
}

void apply_config_text(SimConfig& cfg, std::istream& in, const std::string& source) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = line;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("", source + ":" + std::to_string(lineno) + ": expected key = value");
    }
    try {
      set_config_value(cfg, trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
    } catch (const ConfigError& e) {
      std::string msg = e.what();
      if (msg.starts_with(e.key() + ": ")) msg.erase(0, e.key().size() + 2);
      throw ConfigError(e.key(), source + ":" + std::to_string(lineno) + ": " + msg);
    }
  }
}

SimConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path);
  SimConfig cfg;
  apply_config_text(cfg, in, path);
  return cfg;
}

void write_config(std::ostream& out, const SimConfig& cfg) {
  for (const auto& f : fields()) out << f.name << " = " << f.get(cfg) << '\n';
}

}  // namespace trustnet
