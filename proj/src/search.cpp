#include "trustnet/search.hpp"

#include <algorithm>
#include <cmath>

namespace trustnet {

const char* to_string(TraceAction a) {
  switch (a) {
    case TraceAction::forward: return "forward";
    case TraceAction::block: return "block";
    case TraceAction::respond: return "respond";
    case TraceAction::die: return "die";
  }
  return "?";
}

double prob_com(const OverlayGraph& g, PeerId x) {
  const double init = static_cast<double>(g.initial_degree(x));
  const double p = (static_cast<double>(g.degree(x)) - init) / (init * (g.edge_limit() - 1.0));
  return std::clamp(p, 0.0, 1.0);
}

std::size_t fanout(double p, std::size_t contactable, std::size_t max_fanout) {
  const std::size_t n = std::min(contactable, max_fanout);
  if (n == 0) return 0;
  // The slack keeps products like (1 - 0.6) * 10 from flooring to 3.
  const auto k = static_cast<std::size_t>(std::floor((1.0 - p) * static_cast<double>(n) + 1e-9));
  return std::max<std::size_t>(1, k);
}

std::size_t contactable_neighbors(const Network& net, PeerId x, const VisitSet& visited) {
  std::size_t n = 0;
  auto count = [&](PeerId y) {
    if (net.is_active(y) && !visited.contains(y)) ++n;
  };
  for (PeerId y : net.graph.community_neighbors(x)) count(y);
  for (PeerId y : net.graph.connectivity_neighbors(x)) count(y);
  return n;
}

namespace {

struct Candidate {
  int tier;
  double trust;
  double tie;
  PeerId peer;
};

// Fills `pool` with x's eligible neighbors and returns how many neighbors are
// contactable at all (active and unvisited, trusted or not).
std::size_t gather(const Network& net, PeerId x, std::optional<std::uint16_t> category, const VisitSet& visited,
                   Rng& rng, std::vector<Candidate>& pool) {
  pool.clear();
  std::size_t contactable = 0;
  // x's cached opinions spread into a dense table, so each neighbor costs
  // one lookup instead of a cache scan.
  thread_local std::vector<double> opinion;
  thread_local std::vector<std::uint32_t> stamp;
  thread_local std::uint32_t epoch = 0;
  if (stamp.size() != net.size()) {
    stamp.assign(net.size(), 0);
    opinion.assign(net.size(), kTrustThreshold);
    epoch = 0;
  }
  if (++epoch == 0) {
    std::fill(stamp.begin(), stamp.end(), 0);
    epoch = 1;
  }
  for (const auto& [subject, rec] : net.caches[x.index()].entries()) {
    stamp[subject.index()] = epoch;
    opinion[subject.index()] = trust_value(rec);
  }
  auto consider = [&](PeerId y, bool community) {
    if (!net.is_active(y) || visited.contains(y)) return;
    ++contactable;
    const double t = stamp[y.index()] == epoch ? opinion[y.index()] : kTrustThreshold;
    if (!trustworthy(t)) return;
    const bool match = category && net.libraries[y.index()].shares_category(*category);
    const int tier = (community ? 0 : 2) + (match ? 0 : 1);
    pool.push_back({tier, t, uniform01(rng), y});
  };
  for (PeerId y : net.graph.community_neighbors(x)) consider(y, true);
  for (PeerId y : net.graph.connectivity_neighbors(x)) consider(y, false);
  return contactable;
}

std::vector<PeerId> take_best(std::vector<Candidate>& pool, std::size_t k) {
  const std::size_t take = std::min(k, pool.size());
  auto before = [](const Candidate& a, const Candidate& b) {
    if (a.tier != b.tier) return a.tier < b.tier;
    if (a.trust != b.trust) return a.trust > b.trust;
    return a.tie < b.tie;
  };
  const auto mid = pool.begin() + static_cast<std::ptrdiff_t>(take);
  if (take < pool.size()) std::nth_element(pool.begin(), mid, pool.end(), before);
  std::sort(pool.begin(), mid, before);
  std::vector<PeerId> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back(pool[i].peer);
  return out;
}

}  // namespace

std::vector<PeerId> select_neighbors(const Network& net, PeerId x, std::optional<std::uint16_t> category,
                                     std::size_t k, const VisitSet& visited, Rng& rng) {
  std::vector<Candidate> pool;
  gather(net, x, category, visited, rng, pool);
  return take_best(pool, k);
}

int SearchEngine::ttl_budget(PeerId origin) const {
  return prob_com(net_.graph, origin) >= 0.5 ? params_.dfs_ttl : params_.bfs_ttl;
}

void SearchEngine::dispatch(PeerId from, const QueryPacket& base, int ttl, const QueryTarget& target, Rng& rng,
                            std::vector<std::pair<PeerId, QueryPacket>>& out) {
  thread_local std::vector<Candidate> pool;
  const std::size_t contactable = gather(net_, from, target.category, visited_, rng, pool);
  const std::size_t k = fanout(prob_com(net_.graph, from), contactable, params_.max_fanout);
  const std::vector<PeerId> chosen = take_best(pool, k);
  if (chosen.empty()) {
    emit(base, from, TraceAction::die);
    return;
  }
  emit(base, from, TraceAction::forward);
  for (PeerId n : chosen) {
    visited_.insert(n);
    out.emplace_back(n, QueryPacket{base.query_id, base.origin, from, ttl, base.hop + 1});
  }
}

bool SearchEngine::forward_query(PeerId at, const QueryPacket& packet, const QueryTarget& target, Rng& rng,
                                 std::vector<QueryResponse>& responses,
                                 std::vector<std::pair<PeerId, QueryPacket>>& out) {
  if (!net_.is_active(at)) return false;
  ++last_visited_;
  // Only the initiator is worth a trust query; later senders are judged on
  // what the receiver already knows.
  const double trust = packet.sender == packet.origin
                           ? resolve_trust(net_, at, packet.sender, params_.dfs_ttl, rng)
                           : net_.cached_trust(at, packet.sender);
  if (!trustworthy(trust)) {
    emit(packet, at, TraceAction::block);
    return false;
  }
  if (at != packet.origin && target.matches(net_.libraries[at.index()])) {
    responses.push_back({at, target.file, packet.hop});
    emit(packet, at, TraceAction::respond);
  }
  const int ttl = packet.ttl - 1;
  if (ttl > 0) {
    dispatch(at, packet, ttl, target, rng, out);
  } else {
    emit(packet, at, TraceAction::die);
  }
  return true;
}

std::vector<QueryResponse> SearchEngine::run(PeerId origin, const QueryTarget& target, Rng& rng) {
  visited_.reset(net_.size());
  visited_.insert(origin);
  last_visited_ = 0;
  std::vector<QueryResponse> responses;
  std::vector<std::pair<PeerId, QueryPacket>> frontier, next;

  const QueryPacket root{next_query_id_++, origin, origin, 0, 0};
  dispatch(origin, root, ttl_budget(origin), target, rng, frontier);
  while (!frontier.empty()) {
    next.clear();
    for (const auto& [peer, packet] : frontier) forward_query(peer, packet, target, rng, responses, next);
    frontier.swap(next);
  }
  return responses;
}

}  // namespace trustnet
