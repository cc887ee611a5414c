#pragma once

#include <algorithm>
#include <initializer_list>
#include <utility>
#include <vector>

#include "trustnet/network.hpp"

namespace trustnet::testing {

inline PeerId P(std::uint32_t v) { return PeerId{v}; }

inline OverlayGraph graph(std::size_t n, std::initializer_list<std::pair<int, int>> edges, double edge_limit = 2.0) {
  std::vector<std::pair<PeerId, PeerId>> e;
  for (auto [a, b] : edges) e.emplace_back(P(a), P(b));
  return OverlayGraph(n, e, edge_limit);
}

/// Every peer shares category 1 with files ranked 1..2 unless `holders`
/// says it also has the target (1:10).
inline std::vector<PeerLibrary> libraries(std::size_t n, std::initializer_list<int> holders = {},
                                          FileId target = {1, 10}) {
  std::vector<PeerLibrary> libs(n);
  for (std::size_t i = 0; i < n; ++i) {
    libs[i].owner = P(static_cast<std::uint32_t>(i));
    libs[i].categories = {1};
    libs[i].files = {FileId{1, 1}, FileId{1, 2}};
  }
  for (int h : holders) {
    libs[h].files.push_back(target);
    std::sort(libs[h].files.begin(), libs[h].files.end());
  }
  return libs;
}

inline Network network(OverlayGraph g, std::vector<PeerLibrary> libs, std::initializer_list<int> malicious = {},
                       double deception = 0.0) {
  std::vector<PeerDisposition> disp(g.peer_count());
  for (int m : malicious) disp[m] = {PeerKind::malicious_a, deception, AttackPhase::accumulating};
  return Network(std::move(g), std::move(libs), std::move(disp));
}

/// Gives `observer` a first-hand record about `subject`.
inline void know(Network& net, int observer, int subject, double alpha, double beta) {
  net.caches[observer].upsert(P(subject)) = ReputationRecord{alpha, beta};
}

}  // namespace trustnet::testing
