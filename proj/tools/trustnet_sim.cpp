// Batch front end: `simulate` runs one configuration, `sweep` runs one
// configuration per value of a single key.

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "trustnet/config.hpp"
#include "trustnet/simulator.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

struct Overrides {
  std::map<std::string, std::optional<std::string>> values;

  void attach(CLI::App& app) {
    for (const auto& key : trustnet::config_keys()) {
      values[key];
      app.add_option("--" + key, values[key], "override " + key)->group("Config overrides");
    }
  }
  void apply(trustnet::SimConfig& cfg) const {
    for (const auto& [key, v] : values) {
      if (v) trustnet::set_config_value(cfg, key, *v);
    }
  }
};

trustnet::SimConfig load(const std::string& path, const Overrides& o) {
  trustnet::SimConfig cfg = path.empty() ? trustnet::SimConfig{} : trustnet::load_config_file(path);
  o.apply(cfg);
  trustnet::validate(cfg);
  return cfg;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trust-aware P2P overlay simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", vary;
  bool print_config = false;
  Overrides sim_overrides, sweep_overrides;

  auto* simulate = app.add_subcommand("simulate", "run one configuration");
  simulate->add_option("--config", config_path, "key = value config file");
  simulate->add_option("--out", out_dir, "output directory")->capture_default_str();
  simulate->add_flag("--print-config", print_config, "print the effective config and exit");
  sim_overrides.attach(*simulate);

  auto* sweep = app.add_subcommand("sweep", "run one configuration per value of a key");
  sweep->add_option("--config", config_path, "key = value config file");
  sweep->add_option("--vary", vary, "key=v1,v2,...");
  sweep->add_option("--out", out_dir, "output directory")->capture_default_str();
  sweep_overrides.attach(*sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigError;
  }

  try {
    if (*simulate) {
      const auto cfg = load(config_path, sim_overrides);
      if (print_config) {
        trustnet::write_config(std::cout, cfg);
        return 0;
      }
      const auto summary = trustnet::run_simulation(cfg, out_dir);
      for (const auto& f : summary.files) std::cout << f.string() << '\n';
      if (cfg.check_invariants && summary.invariant_violations > 0) {
        std::cerr << "overlay invariant violations: " << summary.invariant_violations << '\n';
        return kRuntimeError;
      }
      return 0;
    }

    const auto cfg = load(config_path, sweep_overrides);
    std::string key;
    std::vector<std::string> values;
    if (!vary.empty()) {
      const auto eq = vary.find('=');
      if (eq == std::string::npos) throw trustnet::ConfigError("vary", "expected key=v1,v2,...");
      key = vary.substr(0, eq);
      values = split(vary.substr(eq + 1), ',');
    }
    for (const auto& run : trustnet::run_experiment(cfg, key, values, out_dir)) {
      for (const auto& f : run.files) std::cout << f.string() << '\n';
    }
    return 0;
  } catch (const trustnet::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}
