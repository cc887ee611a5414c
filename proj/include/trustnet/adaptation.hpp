#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "trustnet/network.hpp"
#include "trustnet/search.hpp"

namespace trustnet {

struct AdaptationParams {
  double degree_of_rewiring = 0.3;
  double recency_rho = 1.0;
  int dfs_ttl = 10;
};

enum class EdgeAction : std::uint8_t { none, add, del };
const char* to_string(EdgeAction a);

struct DownloadAttempt {
  PeerId requester;
  PeerId provider;
  FileId target;
  Outcome outcome = Outcome::fake;
  EdgeAction edge_action = EdgeAction::none;
};

/// Source selection, first-hand trust updates and rewiring after a search.
class Adaptation {
 public:
  /// Delivers a file from `provider` and reports whether it checked out.
  /// nullopt means the provider turned out to have nothing to serve; no
  /// attempt is recorded. The default asks the provider's disposition.
  using FetchFn = std::function<std::optional<Outcome>(PeerId provider)>;
  using LogSink = std::function<void(const DownloadAttempt&)>;

  Adaptation(Network& net, AdaptationParams params) : net_(net), params_(params) {}

  /// observer's trust in subject: its cache, else a trust query (kept in the
  /// cache when it produced information), else neutral.
  double resolve_trust(PeerId observer, PeerId subject, Rng& rng);

  /// Downloads from responders in descending trust order until one serves
  /// an authentic copy or the remaining ones are distrusted. Every download
  /// updates the requester's record on the provider and rewires.
  std::vector<DownloadAttempt> process_responses(PeerId requester, const FileId& target,
                                                 std::span<const QueryResponse> responses, Rng& rng,
                                                 const FetchFn& fetch = {});

  /// fake: drop community edge (i, j). authentic: with probability
  /// degree_of_rewiring ask j to approve a new community edge.
  EdgeAction rewire(PeerId i, PeerId j, Outcome outcome, Rng& rng);

  /// j's decision on a community edge requested by i.
  bool approve_link(PeerId i, PeerId j, Rng& rng);

  void set_log(LogSink sink) { log_ = std::move(sink); }
  const AdaptationParams& params() const { return params_; }

 private:
  Network& net_;
  AdaptationParams params_;
  LogSink log_;
};

}  // namespace trustnet
