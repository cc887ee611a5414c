#include "trustnet/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <numeric>
#include <ostream>

namespace trustnet {

const char* to_string(PeerClass c) { return c == PeerClass::honest ? "honest" : "malicious"; }

std::optional<double> attempt_ratio(std::span<const SearchRecord> searches) {
  std::size_t eligible = 0, first_try = 0;
  for (const auto& s : searches) {
    if (!s.responded) continue;
    ++eligible;
    if (s.authentic_at == 1) ++first_try;
  }
  if (eligible == 0) return std::nullopt;
  return static_cast<double>(first_try) / static_cast<double>(eligible);
}

std::optional<double> effective_attempt_ratio(std::span<const SearchRecord> searches,
                                              std::span<const PeerDisposition> dispositions) {
  struct Tally {
    double reciprocal_sum = 0.0;
    std::size_t searches = 0;
  };
  std::vector<Tally> per_peer(dispositions.size());
  for (const auto& s : searches) {
    if (s.attempts == 0) continue;
    auto& t = per_peer[s.initiator.index()];
    t.reciprocal_sum += s.authentic_at > 0 ? 1.0 / static_cast<double>(s.authentic_at) : 0.0;
    ++t.searches;
  }
  double sum[2] = {0.0, 0.0};
  std::size_t count[2] = {0, 0};
  for (std::size_t p = 0; p < per_peer.size(); ++p) {
    if (per_peer[p].searches == 0) continue;
    const auto c = static_cast<std::size_t>(class_of(dispositions[p]));
    sum[c] += per_peer[p].reciprocal_sum / static_cast<double>(per_peer[p].searches);
    ++count[c];
  }
  if (count[0] == 0 || count[1] == 0) return std::nullopt;
  return 100.0 * (sum[0] / static_cast<double>(count[0]) - sum[1] / static_cast<double>(count[1]));
}

std::vector<std::uint32_t> community_distances(const OverlayGraph& g, PeerId source, std::uint32_t unreachable) {
  std::vector<std::uint32_t> dist(g.peer_count(), unreachable);
  std::vector<char> seen(g.peer_count(), 0);
  std::vector<PeerId> queue{source};
  seen[source.index()] = 1;
  dist[source.index()] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const PeerId x = queue[head];
    for (PeerId y : g.community_neighbors(x)) {
      if (seen[y.index()]) continue;
      seen[y.index()] = 1;
      dist[y.index()] = dist[x.index()] + 1;
      queue.push_back(y);
    }
  }
  return dist;
}

double closeness_centrality(const OverlayGraph& g, PeerId i, std::span<const PeerId> targets,
                            std::uint32_t unreachable) {
  const auto dist = community_distances(g, i, unreachable);
  double sum = 0.0;
  for (PeerId t : targets) {
    if (t != i) sum += dist[t.index()];
  }
  return sum > 0.0 ? 1.0 / sum : 0.0;
}

std::optional<double> clustering_coefficient(const OverlayGraph& g, PeerId i) {
  const auto nbrs = g.community_neighbors(i);
  const std::size_t k = nbrs.size();
  if (k < 2) return std::nullopt;
  std::size_t links = 0;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      if (g.has_community_edge(nbrs[a], nbrs[b])) ++links;
    }
  }
  return 2.0 * static_cast<double>(links) / (static_cast<double>(k) * static_cast<double>(k - 1));
}

namespace {

struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n), size(n, 1) { std::iota(parent.begin(), parent.end(), 0u); }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size[a] < size[b]) std::swap(a, b);
    parent[b] = a;
    size[a] += size[b];
  }
  std::vector<std::uint32_t> parent;
  std::vector<std::size_t> size;
};

}  // namespace

std::optional<double> largest_connected_component(const OverlayGraph& g, std::span<const PeerLibrary> libraries,
                                                  std::uint16_t category) {
  const std::size_t n = g.peer_count();
  std::vector<char> member(n, 0);
  std::size_t sharers = 0;
  for (std::size_t p = 0; p < n; ++p) {
    if (libraries[p].shares_category(category)) {
      member[p] = 1;
      ++sharers;
    }
  }
  if (sharers == 0) return std::nullopt;
  DisjointSets sets(n);
  for (std::size_t p = 0; p < n; ++p) {
    if (!member[p]) continue;
    for (PeerId q : g.community_neighbors(PeerId{static_cast<std::uint32_t>(p)})) {
      if (member[q.index()]) sets.unite(static_cast<std::uint32_t>(p), q.value);
    }
  }
  std::size_t largest = 0;
  for (std::size_t p = 0; p < n; ++p) {
    if (member[p] && sets.find(static_cast<std::uint32_t>(p)) == p) largest = std::max(largest, sets.size[p]);
  }
  return 100.0 * static_cast<double>(largest) / static_cast<double>(sharers);
}

namespace {

std::optional<double> mean_of(double sum, std::size_t n) {
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

std::vector<PeerId> path_targets(std::size_t n, std::size_t sample, Rng& rng) {
  std::vector<PeerId> all(n);
  for (std::size_t p = 0; p < n; ++p) all[p] = PeerId{static_cast<std::uint32_t>(p)};
  if (sample == 0 || sample >= n) return all;
  for (std::size_t i = 0; i < sample; ++i) std::swap(all[i], all[i + uniform_index(rng, n - i)]);
  all.resize(sample);
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace

MetricsReport compute_report(std::size_t generation, const Network& net, std::span<const SearchRecord> searches,
                             const MetricsParams& params, std::uint64_t seed) {
  const OverlayGraph& g = net.graph;
  const std::size_t n = g.peer_count();
  MetricsReport r;
  r.generation = generation;
  r.counters = net.counters;
  r.community_edges = g.community_edge_count();
  r.classes[0].cls = PeerClass::honest;
  r.classes[1].cls = PeerClass::malicious;

  std::array<std::vector<SearchRecord>, 2> by_class;
  for (const auto& s : searches) by_class[static_cast<std::size_t>(class_of(net.dispositions[s.initiator.index()]))].push_back(s);
  for (std::size_t c = 0; c < 2; ++c) {
    auto& m = r.classes[c];
    m.searches = by_class[c].size();
    m.misses = static_cast<std::size_t>(
        std::count_if(by_class[c].begin(), by_class[c].end(), [](const SearchRecord& s) { return !s.responded; }));
    m.qmr = mean_of(static_cast<double>(m.misses), m.searches);
    m.ar = attempt_ratio(by_class[c]);
  }
  r.ear = effective_attempt_ratio(searches, net.dispositions);

  // Path sums from every peer to a shared target sample; distances are
  // symmetric, so one BFS per target suffices.
  Rng rng = make_rng(seed, Stream::metrics, generation);
  const auto targets = path_targets(n, params.cc_sample, rng);
  std::vector<double> path_sum(n, 0.0);
  std::vector<std::size_t> path_count(n, 0);
  for (PeerId t : targets) {
    const auto dist = community_distances(g, t, params.unreachable_path_len);
    for (std::size_t p = 0; p < n; ++p) {
      if (p == t.index()) continue;
      path_sum[p] += dist[p];
      ++path_count[p];
    }
  }

  std::array<double, 2> ric_sum{}, cc_sum{}, clc_sum{}, aspd_sum{};
  std::array<std::size_t, 2> clc_n{}, path_n{};
  for (std::size_t p = 0; p < n; ++p) {
    const PeerId id{static_cast<std::uint32_t>(p)};
    const auto c = static_cast<std::size_t>(class_of(net.dispositions[p]));
    ++r.classes[c].peers;
    ric_sum[c] += g.ric(id);
    if (path_count[p] > 0) {
      cc_sum[c] += 1.0 / path_sum[p];
      aspd_sum[c] += path_sum[p] / static_cast<double>(path_count[p]);
      ++path_n[c];
    }
    if (auto clc = clustering_coefficient(g, id)) {
      clc_sum[c] += *clc;
      ++clc_n[c];
    }
  }
  for (std::size_t c = 0; c < 2; ++c) {
    auto& m = r.classes[c];
    m.mean_ric = mean_of(ric_sum[c], m.peers);
    m.mean_cc = mean_of(cc_sum[c], path_n[c]);
    m.aspd = mean_of(aspd_sum[c], path_n[c]);
    m.mean_clc = mean_of(clc_sum[c], clc_n[c]);
  }

  r.lcc.reserve(params.categories);
  for (std::uint16_t cat = 1; cat <= params.categories; ++cat) {
    r.lcc.push_back(largest_connected_component(g, net.libraries, cat));
  }
  return r;
}

namespace {

void put(std::ostream& out, const std::optional<double>& v) {
  if (!v) {
    out << "NA";
    return;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", *v);
  out << buf;
}

}  // namespace

void write_metrics_header(std::ostream& out) {
  out << "generation,class,peers,searches,misses,qmr,ar,ear,mean_ric,mean_cc,mean_clc,aspd,tqpo,trust_queries,"
         "community_edges,edges_added,edges_deleted\n";
}

void write_metrics_rows(std::ostream& out, const MetricsReport& r) {
  for (const auto& m : r.classes) {
    out << r.generation << ',' << to_string(m.cls) << ',' << m.peers << ',' << m.searches << ',' << m.misses << ',';
    put(out, m.qmr);
    out << ',';
    put(out, m.ar);
    out << ',';
    put(out, r.ear);
    out << ',';
    put(out, m.mean_ric);
    out << ',';
    put(out, m.mean_cc);
    out << ',';
    put(out, m.mean_clc);
    out << ',';
    put(out, m.aspd);
    out << ',' << r.counters.dfs_trust_queries << ',' << r.counters.trust_queries << ',' << r.community_edges << ','
        << r.counters.edges_added << ',' << r.counters.edges_deleted << '\n';
  }
}

void write_lcc_header(std::ostream& out) { out << "generation,category,lcc\n"; }

void write_lcc_rows(std::ostream& out, const MetricsReport& r) {
  for (std::size_t c = 0; c < r.lcc.size(); ++c) {
    out << r.generation << ',' << (c + 1) << ',';
    put(out, r.lcc[c]);
    out << '\n';
  }
}

}  // namespace trustnet
