#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "trustnet/rng.hpp"
#include "trustnet/types.hpp"

namespace trustnet {

class OverlayGraph;

/// Beta reputation: alpha successful, beta unsuccessful transactions.
/// Counts become real-valued once second-hand reports are merged in.
struct ReputationRecord {
  double alpha = 0.0;
  double beta = 0.0;

  bool vacuous() const { return alpha == 0.0 && beta == 0.0; }
  friend bool operator==(const ReputationRecord&, const ReputationRecord&) = default;
};

/// Below this trust value a peer is treated as malicious.
inline constexpr double kTrustThreshold = 0.5;

/// Mean of Beta(alpha + 1, beta + 1).
double trust_value(const ReputationRecord& rec);

inline bool trustworthy(double trust) { return trust >= kTrustThreshold; }

/// First-hand update. With rho < 1 both counts decay by rho before the new
/// observation is added, so recent transactions weigh more.
ReputationRecord update_direct(ReputationRecord rec, Outcome outcome, double rho = 1.0);

/// Folds k's report on j into i's record on j, discounted by i's opinion of
/// k:
///
///     d = (beta_ik + 2)(alpha_kj + beta_kj + 2) + 2 alpha_ik
///     alpha_ij' = alpha_ij + 2 alpha_ik alpha_kj / d
///     beta_ij'  = beta_ij  + 2 alpha_ik beta_kj  / d
///
/// A recommender with no successful history (alpha_ik = 0) has no effect.
ReputationRecord merge_indirect(const ReputationRecord& r_ij, const ReputationRecord& r_ik,
                                const ReputationRecord& r_kj);

/// Bounded most-recently-used store of first-hand records.
class TrustCache {
 public:
  static constexpr std::size_t kDefaultCapacity = 32;

  explicit TrustCache(std::size_t capacity = kDefaultCapacity) : capacity_(capacity) {
    entries_.reserve(capacity);
    ids_.reserve(capacity);
  }

  /// Lookup without changing recency (used when answering other peers).
  const ReputationRecord* peek(PeerId subject) const {
    const auto i = find(subject);
    return i < 0 ? nullptr : &entries_[static_cast<std::size_t>(i)].second;
  }
  /// Lookup that marks the entry most recently used.
  ReputationRecord* touch(PeerId subject);
  /// Returns the entry for `subject`, creating a vacuous one if absent.
  /// Inserting into a full cache evicts the least recently used entry.
  ReputationRecord& upsert(PeerId subject);

  double trust_of(PeerId subject) const {
    const auto* r = peek(subject);
    return r ? trust_value(*r) : kTrustThreshold;
  }

  void clear() {
    entries_.clear();
    ids_.clear();
  }
  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return capacity_; }
  /// Most recently used first.
  std::span<const std::pair<PeerId, ReputationRecord>> entries() const { return entries_; }

 private:
  std::size_t capacity_;
  std::ptrdiff_t find(PeerId subject) const {
    const std::uint32_t* ids = ids_.data();
    const auto n = static_cast<std::ptrdiff_t>(ids_.size());
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      if (ids[i] == subject.value) return i;
    }
    return -1;
  }

  std::vector<std::pair<PeerId, ReputationRecord>> entries_;
  std::vector<std::uint32_t> ids_;  // entries_[i].first, packed for scanning
};

struct TrustQueryResult {
  ReputationRecord record;
  std::size_t responders = 0;   // peers that returned a record
  bool used_dfs = false;        // phase 2 was launched
  std::size_t dfs_hops = 0;
};

/// Resolves i's opinion of j from other peers' caches.
///
/// Phase 1 polls i's active community neighbors in id order; each holding a
/// record on j contributes through merge_indirect. Only if nobody answers,
/// phase 2 walks a single path of at most `dfs_ttl` hops, each hop moving to
/// the current peer's most trusted unvisited active neighbor (ties broken at
/// random), and stops at the first peer holding a record on j.
TrustQueryResult trust_query(PeerId i, PeerId j, const OverlayGraph& g, std::span<const TrustCache> caches,
                             std::span<const char> active, int dfs_ttl, Rng& rng);

}  // namespace trustnet
