#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "trustnet/types.hpp"

namespace trustnet {

enum class EdgeKind : std::uint8_t { connectivity, community };

struct Edge {
  PeerId a;
  PeerId b;
  EdgeKind kind = EdgeKind::connectivity;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Peer graph with two disjoint undirected edge classes.
///
/// Connectivity edges come from the initial power-law topology and are fixed
/// for the life of the graph. Community edges are added and removed by
/// topology adaptation, subject to the per-peer cap
///
///     degree(x) / initial_degree(x) <= edge_limit
///
/// where degree counts both classes and initial_degree is the connectivity
/// degree.
class OverlayGraph {
 public:
  /// Builds a graph whose connectivity edges are `edges`. Throws
  /// ParameterError on self-loops, duplicates, out-of-range ids, isolated
  /// peers, or edge_limit <= 1.
  OverlayGraph(std::size_t peer_count, std::span<const std::pair<PeerId, PeerId>> edges, double edge_limit);

  std::size_t peer_count() const { return connectivity_.size(); }
  double edge_limit() const { return edge_limit_; }

  std::span<const PeerId> connectivity_neighbors(PeerId x) const { return connectivity_[x.index()]; }
  std::span<const PeerId> community_neighbors(PeerId x) const { return community_[x.index()]; }

  std::size_t initial_degree(PeerId x) const { return connectivity_[x.index()].size(); }
  std::size_t community_degree(PeerId x) const { return community_[x.index()].size(); }
  std::size_t degree(PeerId x) const { return initial_degree(x) + community_degree(x); }

  /// Relative increase in connectivity: degree / initial_degree.
  double ric(PeerId x) const;

  /// True when one more community edge would push RIC(x) past edge_limit.
  bool saturated(PeerId x) const;

  bool has_connectivity_edge(PeerId a, PeerId b) const;
  bool has_community_edge(PeerId a, PeerId b) const;
  bool adjacent(PeerId a, PeerId b) const { return has_connectivity_edge(a, b) || has_community_edge(a, b); }

  /// Adds community edge (i, j) iff the pair is not already adjacent and
  /// neither endpoint is saturated. Returns whether the edge was added.
  bool add_community_edge(PeerId i, PeerId j);

  /// Removes community edge (i, j) if present. Connectivity edges are never
  /// touched. Returns whether an edge was removed.
  bool remove_community_edge(PeerId i, PeerId j);

  std::size_t connectivity_edge_count() const { return connectivity_edge_count_; }
  std::size_t community_edge_count() const { return community_edge_count_; }

  /// Edge lists with a < b, sorted.
  std::vector<Edge> connectivity_edges() const;
  std::vector<Edge> community_edges() const;

  /// When enabled, every mutation re-checks the invariants at both endpoints
  /// and counts failures in violation_count().
  void enable_mutation_checks(bool on) { check_mutations_ = on; }
  std::size_t violation_count() const { return violations_; }

  /// Full scan of the graph invariants. Returns one message per violation.
  std::vector<std::string> validate() const;

 private:
  void check_after_mutation(PeerId i, PeerId j);
  void require_peer(PeerId x) const;

  std::vector<std::vector<PeerId>> connectivity_;  // sorted
  std::vector<std::vector<PeerId>> community_;     // insertion order
  double edge_limit_;
  std::size_t connectivity_edge_count_ = 0;
  std::size_t community_edge_count_ = 0;
  bool check_mutations_ = false;
  std::size_t violations_ = 0;
};

/// Barabasi-Albert graph: a clique on m+1 peers, then each new peer attaches
/// to m distinct existing peers chosen with probability proportional to
/// degree. Every edge is a connectivity edge.
OverlayGraph generate_power_law(std::size_t n, std::size_t m, std::uint64_t seed, double edge_limit = 2.0);

/// `<i> <j> <C|M>` per line; connectivity edges first.
void write_edge_list(std::ostream& out, const OverlayGraph& g);

}  // namespace trustnet
