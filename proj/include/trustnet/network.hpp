#pragma once

#include <cstdint>
#include <vector>

#include "trustnet/adversary.hpp"
#include "trustnet/content.hpp"
#include "trustnet/overlay.hpp"
#include "trustnet/reputation.hpp"

namespace trustnet {

/// Counters reset at the start of every generation.
struct GenerationCounters {
  std::size_t trust_queries = 0;
  std::size_t dfs_trust_queries = 0;  // TQPO
  std::size_t edges_added = 0;
  std::size_t edges_deleted = 0;
};

/// Everything the peers collectively know and hold.
struct Network {
  Network(OverlayGraph g, std::vector<PeerLibrary> libs, std::vector<PeerDisposition> disp);

  std::size_t size() const { return graph.peer_count(); }
  bool is_active(PeerId p) const { return active[p.index()] != 0; }
  /// observer's view of subject from its own cache; neutral when unknown.
  double cached_trust(PeerId observer, PeerId subject) const { return caches[observer.index()].trust_of(subject); }

  OverlayGraph graph;
  std::vector<PeerLibrary> libraries;
  std::vector<PeerDisposition> dispositions;
  std::vector<TrustCache> caches;
  std::vector<char> active;
  GenerationCounters counters;
};

/// observer's trust in subject: its cache, else a trust query (kept in the
/// cache when it produced information), else neutral. Counts the query.
double resolve_trust(Network& net, PeerId observer, PeerId subject, int dfs_ttl, Rng& rng);

/// Per-query membership set that is reset in O(1).
class VisitSet {
 public:
  explicit VisitSet(std::size_t n = 0) : stamps_(n, 0) {}
  void reset(std::size_t n) {
    if (stamps_.size() != n) stamps_.assign(n, 0);
    if (++current_ == 0) {
      std::fill(stamps_.begin(), stamps_.end(), 0);
      current_ = 1;
    }
  }
  bool contains(PeerId p) const { return stamps_[p.index()] == current_; }
  void insert(PeerId p) { stamps_[p.index()] = current_; }

 private:
  std::vector<std::uint32_t> stamps_;
  std::uint32_t current_ = 0;
};

}  // namespace trustnet
