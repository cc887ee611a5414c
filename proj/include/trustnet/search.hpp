#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "trustnet/network.hpp"

namespace trustnet {

struct SearchParams {
  int bfs_ttl = 5;
  int dfs_ttl = 10;
  std::size_t max_fanout = 10;
};

/// Connectivity index (degree - initial) / (initial * (edge_limit - 1)),
/// clamped to [0, 1].
double prob_com(const OverlayGraph& g, PeerId x);

/// max(1, floor((1 - p) * min(contactable, max_fanout))). Zero contactable
/// neighbors yields zero.
std::size_t fanout(double p, std::size_t contactable, std::size_t max_fanout);

/// What a query asks for. Plain searches name a file; privacy-preserving
/// lookups hide it and supply their own match predicate instead.
struct QueryTarget {
  FileId file;
  std::optional<std::uint16_t> category;
  std::function<bool(const PeerLibrary&)> matcher;

  static QueryTarget for_file(const FileId& f) { return {f, f.category, {}}; }
  bool matches(const PeerLibrary& lib) const { return matcher ? matcher(lib) : lib.holds(file); }
};

struct QueryPacket {
  std::uint64_t query_id = 0;
  PeerId origin;
  PeerId sender;
  int ttl = 0;             // hops the packet may still take, counting this one
  std::size_t hop = 0;     // hops travelled from origin to the receiver
};

struct QueryResponse {
  PeerId responder;
  FileId target;
  std::size_t hops = 0;
};

enum class TraceAction : std::uint8_t { forward, block, respond, die };
const char* to_string(TraceAction a);

struct SearchTraceEvent {
  std::uint64_t query_id;
  std::size_t hop;
  PeerId peer;
  TraceAction action;
};

/// Up to k neighbors of x ranked by tier, then by x's trust in them:
///   1. community neighbors sharing `category`
///   2. other community neighbors
///   3. connectivity neighbors sharing `category`
///   4. other connectivity neighbors
/// Ties are broken uniformly at random. Inactive peers, peers in `visited`
/// and peers x distrusts are never returned. Without a category, tiers 1
/// and 3 are empty.
std::vector<PeerId> select_neighbors(const Network& net, PeerId x, std::optional<std::uint16_t> category,
                                     std::size_t k, const VisitSet& visited, Rng& rng);

/// Neighbors of x that are active and not yet visited by the current query.
std::size_t contactable_neighbors(const Network& net, PeerId x, const VisitSet& visited);

/// TTL-bounded, trust-filtered query propagation over the overlay.
///
/// Expansion is hop-synchronous. A peer handles a query at most once. At
/// each arrival the receiver first checks its trust in the sender and drops
/// the packet from a distrusted sender. Trust in the initiator may be
/// resolved by a trust query; trust in relays comes from the cache only.
/// Otherwise the receiver answers if it holds the target, spends one TTL unit
/// and forwards while TTL remains.
class SearchEngine {
 public:
  using TraceSink = std::function<void(const SearchTraceEvent&)>;

  SearchEngine(Network& net, SearchParams params) : net_(net), params_(params) {}

  std::vector<QueryResponse> initiate_query(PeerId origin, const FileId& target, Rng& rng) {
    return run(origin, QueryTarget::for_file(target), rng);
  }
  std::vector<QueryResponse> run(PeerId origin, const QueryTarget& target, Rng& rng);

  /// Handles one packet arriving at `at`. Appends a response if `at` answers
  /// and the packets it forwards. Returns false if the packet was blocked.
  bool forward_query(PeerId at, const QueryPacket& packet, const QueryTarget& target, Rng& rng,
                     std::vector<QueryResponse>& responses, std::vector<std::pair<PeerId, QueryPacket>>& out);

  /// TTL budget the origin gets: directed-DFS budget once it is mostly
  /// saturated, otherwise the BFS budget.
  int ttl_budget(PeerId origin) const;

  void set_trace(TraceSink sink) { trace_ = std::move(sink); }
  const SearchParams& params() const { return params_; }
  /// Peers that handled the most recent query (origin excluded).
  std::size_t last_visited() const { return last_visited_; }

 private:
  void emit(const QueryPacket& p, PeerId peer, TraceAction a) {
    if (trace_) trace_({p.query_id, p.hop, peer, a});
  }
  void dispatch(PeerId from, const QueryPacket& base, int ttl, const QueryTarget& target, Rng& rng,
                std::vector<std::pair<PeerId, QueryPacket>>& out);

  Network& net_;
  SearchParams params_;
  VisitSet visited_;
  TraceSink trace_;
  std::uint64_t next_query_id_ = 1;
  std::size_t last_visited_ = 0;
};

}  // namespace trustnet
