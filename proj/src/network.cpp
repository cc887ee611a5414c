#include "trustnet/network.hpp"

namespace trustnet {

Network::Network(OverlayGraph g, std::vector<PeerLibrary> libs, std::vector<PeerDisposition> disp)
    : graph(std::move(g)),
      libraries(std::move(libs)),
      dispositions(std::move(disp)),
      caches(graph.peer_count()),
      active(graph.peer_count(), 1) {
  if (libraries.size() != graph.peer_count() || dispositions.size() != graph.peer_count()) {
    throw ParameterError("network components disagree on peer count");
  }
}

double resolve_trust(Network& net, PeerId observer, PeerId subject, int dfs_ttl, Rng& rng) {
  if (const auto* rec = net.caches[observer.index()].peek(subject)) return trust_value(*rec);
  const TrustQueryResult q = trust_query(observer, subject, net.graph, net.caches, net.active, dfs_ttl, rng);
  ++net.counters.trust_queries;
  if (q.used_dfs) ++net.counters.dfs_trust_queries;
  if (q.record.vacuous()) return kTrustThreshold;
  net.caches[observer.index()].upsert(subject) = q.record;
  return trust_value(q.record);
}

}  // namespace trustnet
