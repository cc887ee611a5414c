#include "trustnet/simulator.hpp"

#include <cstdio>
#include <fstream>

#include "trustnet/privacy/crypto.hpp"

namespace trustnet {

ContentParams content_params(const SimConfig& cfg) {
  ContentParams p;
  p.categories = cfg.categories;
  p.zipf_alpha = cfg.zipf_alpha;
  p.files_per_peer = cfg.files_per_peer;
  p.files_per_category = cfg.files_per_category;
  p.min_categories = cfg.min_categories;
  p.max_categories = cfg.max_categories;
  return p;
}

namespace {

SimConfig validated(SimConfig cfg) {
  validate(cfg);
  return cfg;
}

Network build_network(const SimConfig& cfg) {
  OverlayGraph g =
      generate_power_law(cfg.peers, cfg.ba_m, derive_seed(cfg.seed, Stream::topology, 0), cfg.edge_limit);
  auto libs = assign_content(cfg.peers, content_params(cfg), derive_seed(cfg.seed, Stream::content, 0));
  auto disp = mark_malicious(cfg.peers, cfg.malicious_fraction, cfg.threat_model, cfg.degree_of_deception,
                             derive_seed(cfg.seed, Stream::adversary, 0));
  Network net(std::move(g), std::move(libs), std::move(disp));
  net.caches.assign(cfg.peers, TrustCache(cfg.trust_cache_size));
  net.graph.enable_mutation_checks(cfg.check_invariants);
  return net;
}

SearchRecord record_of(PeerId initiator, std::size_t responses, std::span<const DownloadAttempt> attempts) {
  SearchRecord r;
  r.initiator = initiator;
  r.responded = responses > 0;
  r.attempts = attempts.size();
  for (std::size_t a = 0; a < attempts.size(); ++a) {
    if (attempts[a].outcome == Outcome::authentic) {
      r.authentic_at = a + 1;
      break;
    }
  }
  return r;
}

}  // namespace

Simulator::Simulator(SimConfig cfg)
    : cfg_(validated(std::move(cfg))),
      content_(content_params(cfg_)),
      net_(build_network(cfg_)),
      catalog_(content_, net_.libraries),
      search_(net_, SearchParams{cfg_.bfs_ttl, cfg_.dfs_ttl, cfg_.max_fanout}),
      adaptation_(net_, AdaptationParams{cfg_.degree_of_rewiring, cfg_.recency_rho, cfg_.dfs_ttl}) {
  if (cfg_.privacy != privacy::PrivacyMode::off) {
    crypto_ = std::make_unique<privacy::SodiumCrypto>(derive_seed(cfg_.seed, Stream::crypto, 0));
    privacy::PrivacyParams pp{cfg_.privacy, cfg_.prefix_bits, cfg_.bloom_bits, cfg_.bloom_hashes};
    privacy_ = std::make_unique<privacy::PrivacyProtocols>(net_, search_, adaptation_, *crypto_, privacy_trace_, pp);
  }
}

Simulator::~Simulator() = default;

void Simulator::set_search_trace(SearchEngine::TraceSink sink) { search_.set_trace(std::move(sink)); }
void Simulator::set_adaptation_log(Adaptation::LogSink sink) { adaptation_.set_log(std::move(sink)); }

MetricsReport Simulator::snapshot_report() {
  MetricsParams mp{cfg_.cc_sample, cfg_.unreachable_path_len, cfg_.categories};
  return compute_report(generation_, net_, searches_, mp, cfg_.seed);
}

void Simulator::churn(Rng& rng) {
  // Last generation's absentees rejoin with empty caches and swapped content.
  for (PeerId p : inactive_) {
    net_.caches[p.index()].clear();
    net_.active[p.index()] = 1;
  }
  churn_exchange(net_.libraries, inactive_, rng);
  inactive_ = apply_churn(net_.size(), cfg_.churn_fraction, rng);
  for (PeerId p : inactive_) net_.active[p.index()] = 0;
}

MetricsReport Simulator::run_generation() {
  ++generation_;
  net_.counters = {};
  searches_.clear();

  Rng churn_rng = make_rng(cfg_.seed, Stream::churn, generation_);
  churn(churn_rng);

  const QueryWorkload work = sample_queries(generation_, cfg_.searches_per_generation, net_.libraries, net_.active,
                                            catalog_, content_, cfg_.seed, cfg_.exact_query_count);
  Rng rng = make_rng(cfg_.seed, Stream::search, generation_);
  searches_.reserve(work.queries.size());
  for (const Query& q : work.queries) {
    if (privacy_) {
      const auto res = privacy_->search(q.initiator, q.target, rng);
      searches_.push_back(record_of(q.initiator, res.responses, res.attempts));
    } else {
      const auto responses = search_.initiate_query(q.initiator, q.target, rng);
      const auto attempts = adaptation_.process_responses(q.initiator, q.target, responses, rng);
      searches_.push_back(record_of(q.initiator, responses.size(), attempts));
    }
  }
  return snapshot_report();
}

namespace {

std::filesystem::path output_path(const std::filesystem::path& dir, const std::string& stem, const std::string& variant,
                                  const std::string& ext) {
  return dir / (variant.empty() ? stem + ext : stem + "-" + variant + ext);
}

std::ofstream open_output(const std::filesystem::path& p, std::vector<std::filesystem::path>& files) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  files.push_back(p);
  return out;
}

void write_trust_snapshot(std::ostream& out, const Network& net) {
  out << "observer,subject,alpha,beta,trust\n";
  char buf[128];
  for (std::size_t i = 0; i < net.size(); ++i) {
    for (const auto& [subject, rec] : net.caches[i].entries()) {
      std::snprintf(buf, sizeof buf, "%zu,%u,%.9g,%.9g,%.9g\n", i, subject.value, rec.alpha, rec.beta,
                    trust_value(rec));
      out << buf;
    }
  }
}

}  // namespace

RunSummary run_simulation(const SimConfig& cfg, const std::filesystem::path& out_dir, const std::string& variant) {
  std::filesystem::create_directories(out_dir);
  RunSummary summary;
  Simulator sim(cfg);

  auto metrics = open_output(output_path(out_dir, "metrics", variant, ".csv"), summary.files);
  auto lcc = open_output(output_path(out_dir, "lcc", variant, ".csv"), summary.files);
  write_metrics_header(metrics);
  write_lcc_header(lcc);

  std::ofstream trace, census, adapt;
  if (cfg.search_trace) {
    trace = open_output(output_path(out_dir, "trace", variant, ".log"), summary.files);
    trace << "query_id,hop,peer,action\n";
    sim.set_search_trace([&](const SearchTraceEvent& e) {
      trace << e.query_id << ',' << e.hop << ',' << e.peer.value << ',' << to_string(e.action) << '\n';
    });
  }
  if (cfg.census) {
    census = open_output(output_path(out_dir, "census", variant, ".csv"), summary.files);
    census << "generation,category,holders,files\n";
  }
  if (cfg.adaptation_log) {
    adapt = open_output(output_path(out_dir, "adaptation", variant, ".csv"), summary.files);
    adapt << "generation,requester,provider,outcome,edge_action\n";
    sim.set_adaptation_log([&](const DownloadAttempt& a) {
      adapt << sim.generation() << ',' << a.requester.value << ',' << a.provider.value << ','
            << (a.outcome == Outcome::authentic ? "authentic" : "fake") << ',' << to_string(a.edge_action)
            << '\n';
    });
  }

  auto emit = [&](const MetricsReport& r) {
    write_metrics_rows(metrics, r);
    write_lcc_rows(lcc, r);
    if (census) write_census_rows(census, r.generation, sim.network().libraries, cfg.categories);
    if (cfg.graph_dump_every > 0 && r.generation % cfg.graph_dump_every == 0) {
      auto g = open_output(out_dir / ("graph-" + (variant.empty() ? "" : variant + "-") + std::to_string(r.generation) +
                                      ".edges"),
                           summary.files);
      write_edge_list(g, sim.network().graph);
    }
    summary.reports.push_back(r);
  };

  emit(sim.snapshot_report());
  for (std::size_t g = 0; g < cfg.generations; ++g) emit(sim.run_generation());

  if (cfg.privacy_trace) {
    auto pt = open_output(output_path(out_dir, "privacy-trace", variant, ".csv"), summary.files);
    pt << "session_id,step,from,to,msg_type,payload_visible\n";
    sim.privacy_trace().write_rows(pt);
  }
  if (cfg.trust_snapshot) {
    auto ts = open_output(output_path(out_dir, "trust", variant, ".csv"), summary.files);
    write_trust_snapshot(ts, sim.network());
  }
  summary.invariant_violations = sim.invariant_violations();
  return summary;
}

std::vector<RunSummary> run_experiment(const SimConfig& base, const std::string& key,
                                       const std::vector<std::string>& values, const std::filesystem::path& out_dir) {
  std::vector<SimConfig> variants;
  for (const auto& v : values) {
    SimConfig c = base;
    set_config_value(c, key, v);
    validate(c);
    variants.push_back(c);
  }
  validate(base);
  std::vector<RunSummary> out;
  if (values.empty()) {
    out.push_back(run_simulation(base, out_dir));
    return out;
  }
  for (std::size_t i = 0; i < values.size(); ++i) out.push_back(run_simulation(variants[i], out_dir, key + "-" + values[i]));
  return out;
}

}  // namespace trustnet
