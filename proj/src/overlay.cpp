#include "trustnet/overlay.hpp"

#include <algorithm>
#include <ostream>

#include "trustnet/rng.hpp"

namespace trustnet {

namespace {
constexpr double kCapSlack = 1e-9;
}

OverlayGraph::OverlayGraph(std::size_t peer_count, std::span<const std::pair<PeerId, PeerId>> edges,
                           double edge_limit)
    : connectivity_(peer_count), community_(peer_count), edge_limit_(edge_limit) {
  if (!(edge_limit > 1.0)) {
    throw ParameterError("edge_limit must be > 1 (got " + std::to_string(edge_limit) + ")");
  }
  for (const auto& [a, b] : edges) {
    if (a.index() >= peer_count || b.index() >= peer_count) throw ParameterError("edge endpoint out of range");
    if (a == b) throw ParameterError("self-loop on peer " + to_string(a));
    connectivity_[a.index()].push_back(b);
    connectivity_[b.index()].push_back(a);
  }
  for (std::size_t x = 0; x < peer_count; ++x) {
    auto& adj = connectivity_[x];
    std::sort(adj.begin(), adj.end());
    if (std::adjacent_find(adj.begin(), adj.end()) != adj.end()) {
      throw ParameterError("duplicate connectivity edge at peer " + std::to_string(x));
    }
    if (adj.empty()) throw ParameterError("peer " + std::to_string(x) + " has no connectivity edge");
  }
  connectivity_edge_count_ = edges.size();
}

void OverlayGraph::require_peer(PeerId x) const {
  if (x.index() >= peer_count()) throw ParameterError("unknown peer " + to_string(x));
}

double OverlayGraph::ric(PeerId x) const {
  return static_cast<double>(degree(x)) / static_cast<double>(initial_degree(x));
}

bool OverlayGraph::saturated(PeerId x) const {
  return static_cast<double>(degree(x) + 1) > edge_limit_ * static_cast<double>(initial_degree(x)) + kCapSlack;
}

bool OverlayGraph::has_connectivity_edge(PeerId a, PeerId b) const {
  const auto& adj = connectivity_[a.index()];
  return std::binary_search(adj.begin(), adj.end(), b);
}

bool OverlayGraph::has_community_edge(PeerId a, PeerId b) const {
  const auto& adj = community_[a.index()];
  return std::find(adj.begin(), adj.end(), b) != adj.end();
}

bool OverlayGraph::add_community_edge(PeerId i, PeerId j) {
  require_peer(i);
  require_peer(j);
  if (i == j) throw ParameterError("community edge endpoints must differ");
  if (adjacent(i, j) || saturated(i) || saturated(j)) return false;
  community_[i.index()].push_back(j);
  community_[j.index()].push_back(i);
  ++community_edge_count_;
  if (check_mutations_) check_after_mutation(i, j);
  return true;
}

bool OverlayGraph::remove_community_edge(PeerId i, PeerId j) {
  if (i.index() >= peer_count() || j.index() >= peer_count()) return false;
  auto erase_from = [](std::vector<PeerId>& adj, PeerId v) {
    auto it = std::find(adj.begin(), adj.end(), v);
    if (it == adj.end()) return false;
    adj.erase(it);
    return true;
  };
  if (!erase_from(community_[i.index()], j)) return false;
  erase_from(community_[j.index()], i);
  --community_edge_count_;
  if (check_mutations_) check_after_mutation(i, j);
  return true;
}

void OverlayGraph::check_after_mutation(PeerId i, PeerId j) {
  for (PeerId x : {i, j}) {
    if (static_cast<double>(degree(x)) > edge_limit_ * static_cast<double>(initial_degree(x)) + kCapSlack) {
      ++violations_;
    }
    for (PeerId y : community_[x.index()]) {
      if (y == x || has_connectivity_edge(x, y)) ++violations_;
    }
    auto adj = community_[x.index()];
    std::sort(adj.begin(), adj.end());
    if (std::adjacent_find(adj.begin(), adj.end()) != adj.end()) ++violations_;
  }
}

std::vector<std::string> OverlayGraph::validate() const {
  std::vector<std::string> out;
  std::size_t community_half_edges = 0;
  for (std::size_t xi = 0; xi < peer_count(); ++xi) {
    const PeerId x{static_cast<std::uint32_t>(xi)};
    if (static_cast<double>(degree(x)) > edge_limit_ * static_cast<double>(initial_degree(x)) + kCapSlack) {
      out.push_back("RIC above edge_limit at peer " + to_string(x));
    }
    auto adj = community_[xi];
    std::sort(adj.begin(), adj.end());
    if (std::adjacent_find(adj.begin(), adj.end()) != adj.end()) {
      out.push_back("parallel community edge at peer " + to_string(x));
    }
    for (PeerId y : community_[xi]) {
      if (y == x) out.push_back("community self-loop at peer " + to_string(x));
      if (has_connectivity_edge(x, y)) out.push_back("edge in both classes: " + to_string(x) + "-" + to_string(y));
      if (!has_community_edge(y, x)) out.push_back("asymmetric community edge " + to_string(x) + "-" + to_string(y));
    }
    community_half_edges += community_[xi].size();
  }
  if (community_half_edges != 2 * community_edge_count_) out.push_back("community edge count out of sync");
  return out;
}

std::vector<Edge> OverlayGraph::connectivity_edges() const {
  std::vector<Edge> out;
  out.reserve(connectivity_edge_count_);
  for (std::size_t xi = 0; xi < peer_count(); ++xi) {
    for (PeerId y : connectivity_[xi]) {
      if (xi < y.index()) out.push_back({PeerId{static_cast<std::uint32_t>(xi)}, y, EdgeKind::connectivity});
    }
  }
  return out;
}

std::vector<Edge> OverlayGraph::community_edges() const {
  std::vector<Edge> out;
  out.reserve(community_edge_count_);
  for (std::size_t xi = 0; xi < peer_count(); ++xi) {
    auto adj = community_[xi];
    std::sort(adj.begin(), adj.end());
    for (PeerId y : adj) {
      if (xi < y.index()) out.push_back({PeerId{static_cast<std::uint32_t>(xi)}, y, EdgeKind::community});
    }
  }
  return out;
}

OverlayGraph generate_power_law(std::size_t n, std::size_t m, std::uint64_t seed, double edge_limit) {
  if (m < 1) throw ParameterError("ba_m must be >= 1");
  if (n < m + 1) throw ParameterError("peer count must be >= ba_m + 1");

  Rng rng = make_rng(seed, Stream::topology);
  std::vector<std::pair<PeerId, PeerId>> edges;
  edges.reserve((m + 1) * m / 2 + (n - m - 1) * m);
  // Each peer appears once per incident edge, so a uniform draw from this
  // list is a degree-proportional draw.
  std::vector<std::uint32_t> endpoints;
  endpoints.reserve(2 * edges.capacity());

  for (std::uint32_t a = 0; a <= m; ++a) {
    for (std::uint32_t b = a + 1; b <= m; ++b) {
      edges.emplace_back(PeerId{a}, PeerId{b});
      endpoints.push_back(a);
      endpoints.push_back(b);
    }
  }
  // m == 1 seeds a single edge 0-1, which the loop above already produced.
  std::vector<std::uint32_t> chosen;
  for (std::uint32_t v = static_cast<std::uint32_t>(m + 1); v < n; ++v) {
    chosen.clear();
    while (chosen.size() < m) {
      const std::uint32_t t = endpoints[uniform_index(rng, endpoints.size())];
      if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) chosen.push_back(t);
    }
    for (std::uint32_t t : chosen) {
      edges.emplace_back(PeerId{v}, PeerId{t});
      endpoints.push_back(t);
      endpoints.push_back(v);
    }
  }
  return OverlayGraph(n, edges, edge_limit);
}

void write_edge_list(std::ostream& out, const OverlayGraph& g) {
  for (const Edge& e : g.connectivity_edges()) out << e.a.value << ' ' << e.b.value << " C\n";
  for (const Edge& e : g.community_edges()) out << e.a.value << ' ' << e.b.value << " M\n";
}

}  // namespace trustnet
