#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "trustnet/network.hpp"

namespace trustnet {

enum class PeerClass : std::uint8_t { honest, malicious };
const char* to_string(PeerClass c);

inline PeerClass class_of(const PeerDisposition& d) { return d.malicious() ? PeerClass::malicious : PeerClass::honest; }

/// Outcome of one search, as seen by its initiator.
struct SearchRecord {
  PeerId initiator;
  bool responded = false;         // at least one response came back
  std::size_t attempts = 0;       // downloads made
  std::size_t authentic_at = 0;   // 1-based attempt that succeeded; 0 if none
};

/// Fraction of searches with responses whose first download was authentic.
std::optional<double> attempt_ratio(std::span<const SearchRecord> searches);

/// 100 * (mean over honest initiators of 1/P - mean over malicious
/// initiators of 1/P). Per initiator, 1/P is averaged over its searches that
/// made at least one download, with 1/P = 0 for a search that never got an
/// authentic copy. Absent when either class has no such initiator.
std::optional<double> effective_attempt_ratio(std::span<const SearchRecord> searches,
                                              std::span<const PeerDisposition> dispositions);

/// Hop distances from `source` over community edges; unreachable peers get
/// `unreachable`.
std::vector<std::uint32_t> community_distances(const OverlayGraph& g, PeerId source, std::uint32_t unreachable);

/// 1 / sum of community-path lengths from i to every target other than i.
double closeness_centrality(const OverlayGraph& g, PeerId i, std::span<const PeerId> targets,
                            std::uint32_t unreachable);

/// 2 E / (K (K - 1)) over i's community neighborhood; absent when K < 2.
std::optional<double> clustering_coefficient(const OverlayGraph& g, PeerId i);

/// Percentage of category-c sharers inside the largest component of the
/// community subgraph they induce. Absent when nobody shares c.
std::optional<double> largest_connected_component(const OverlayGraph& g, std::span<const PeerLibrary> libraries,
                                                  std::uint16_t category);

struct MetricsParams {
  std::size_t cc_sample = 200;       // 0 means every peer
  std::uint32_t unreachable_path_len = 15;
  std::uint16_t categories = 32;
};

struct ClassMetrics {
  PeerClass cls = PeerClass::honest;
  std::size_t peers = 0;
  std::size_t searches = 0;
  std::size_t misses = 0;
  std::optional<double> qmr;
  std::optional<double> ar;
  std::optional<double> mean_ric;
  std::optional<double> mean_cc;
  std::optional<double> mean_clc;
  std::optional<double> aspd;
};

struct MetricsReport {
  std::size_t generation = 0;
  std::array<ClassMetrics, 2> classes{};
  std::optional<double> ear;
  GenerationCounters counters;
  std::size_t community_edges = 0;
  std::vector<std::optional<double>> lcc;  // index = category - 1

  const ClassMetrics& honest() const { return classes[0]; }
  const ClassMetrics& malicious() const { return classes[1]; }
};

/// All metrics for one generation over the frozen end-of-generation state.
/// Path metrics use a target sample drawn from `seed` and the generation.
MetricsReport compute_report(std::size_t generation, const Network& net, std::span<const SearchRecord> searches,
                             const MetricsParams& params, std::uint64_t seed);

void write_metrics_header(std::ostream& out);
void write_metrics_rows(std::ostream& out, const MetricsReport& r);
void write_lcc_header(std::ostream& out);
void write_lcc_rows(std::ostream& out, const MetricsReport& r);

}  // namespace trustnet
