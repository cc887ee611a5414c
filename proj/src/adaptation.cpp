#include "trustnet/adaptation.hpp"

#include <algorithm>

namespace trustnet {

const char* to_string(EdgeAction a) {
  switch (a) {
    case EdgeAction::none: return "none";
    case EdgeAction::add: return "add";
    case EdgeAction::del: return "del";
  }
  return "?";
}

double Adaptation::resolve_trust(PeerId observer, PeerId subject, Rng& rng) {
  return trustnet::resolve_trust(net_, observer, subject, params_.dfs_ttl, rng);
}

std::vector<DownloadAttempt> Adaptation::process_responses(PeerId requester, const FileId& target,
                                                           std::span<const QueryResponse> responses, Rng& rng,
                                                           const FetchFn& fetch) {
  struct Source {
    double trust;
    double tie;
    PeerId peer;
  };
  std::vector<PeerId> providers;
  providers.reserve(responses.size());
  for (const auto& r : responses) {
    if (r.responder != requester) providers.push_back(r.responder);
  }
  std::sort(providers.begin(), providers.end());
  providers.erase(std::unique(providers.begin(), providers.end()), providers.end());

  std::vector<Source> ranked;
  ranked.reserve(providers.size());
  for (PeerId p : providers) ranked.push_back({resolve_trust(requester, p, rng), uniform01(rng), p});
  std::sort(ranked.begin(), ranked.end(), [](const Source& a, const Source& b) {
    return a.trust != b.trust ? a.trust > b.trust : a.tie < b.tie;
  });

  std::vector<DownloadAttempt> attempts;
  for (const Source& s : ranked) {
    if (!trustworthy(s.trust)) break;
    DownloadAttempt a{requester, s.peer, target};
    if (fetch) {
      const auto got = fetch(s.peer);
      if (!got) continue;
      a.outcome = *got;
    } else {
      a.outcome = serve_decision(net_.dispositions[s.peer.index()], net_.graph, s.peer, rng);
    }
    ReputationRecord& rec = net_.caches[requester.index()].upsert(s.peer);
    rec = update_direct(rec, a.outcome, params_.recency_rho);
    a.edge_action = rewire(requester, s.peer, a.outcome, rng);
    attempts.push_back(a);
    if (log_) log_(a);
    if (a.outcome == Outcome::authentic) break;
  }
  return attempts;
}

EdgeAction Adaptation::rewire(PeerId i, PeerId j, Outcome outcome, Rng& rng) {
  if (outcome == Outcome::fake) {
    if (net_.graph.remove_community_edge(i, j)) {
      ++net_.counters.edges_deleted;
      return EdgeAction::del;
    }
    return EdgeAction::none;
  }
  if (uniform01(rng) > params_.degree_of_rewiring) return EdgeAction::none;
  if (net_.graph.adjacent(i, j)) return EdgeAction::none;
  if (!approve_link(i, j, rng)) return EdgeAction::none;
  if (!net_.graph.add_community_edge(i, j)) return EdgeAction::none;
  ++net_.counters.edges_added;
  return EdgeAction::add;
}

bool Adaptation::approve_link(PeerId i, PeerId j, Rng& rng) {
  if (net_.graph.saturated(i) || net_.graph.saturated(j)) return false;
  return trustworthy(resolve_trust(j, i, rng));
}

}  // namespace trustnet
