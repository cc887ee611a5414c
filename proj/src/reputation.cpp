#include "trustnet/reputation.hpp"

#include <algorithm>

#include "trustnet/overlay.hpp"

namespace trustnet {

double trust_value(const ReputationRecord& rec) { return (rec.alpha + 1.0) / (rec.alpha + rec.beta + 2.0); }

ReputationRecord update_direct(ReputationRecord rec, Outcome outcome, double rho) {
  rec.alpha *= rho;
  rec.beta *= rho;
  if (outcome == Outcome::authentic) {
    rec.alpha += 1.0;
  } else {
    rec.beta += 1.0;
  }
  return rec;
}

ReputationRecord merge_indirect(const ReputationRecord& r_ij, const ReputationRecord& r_ik,
                                const ReputationRecord& r_kj) {
  const double weight = 2.0 * r_ik.alpha;
  if (weight == 0.0) return r_ij;
  const double denom = (r_ik.beta + 2.0) * (r_kj.alpha + r_kj.beta + 2.0) + weight;
  return {r_ij.alpha + weight * r_kj.alpha / denom, r_ij.beta + weight * r_kj.beta / denom};
}

ReputationRecord* TrustCache::touch(PeerId subject) {
  const auto i = find(subject);
  if (i < 0) return nullptr;
  std::rotate(entries_.begin(), entries_.begin() + i, entries_.begin() + i + 1);
  std::rotate(ids_.begin(), ids_.begin() + i, ids_.begin() + i + 1);
  return &entries_.front().second;
}

ReputationRecord& TrustCache::upsert(PeerId subject) {
  if (auto* rec = touch(subject)) return *rec;
  if (entries_.size() == capacity_) {
    entries_.pop_back();
    ids_.pop_back();
  }
  entries_.insert(entries_.begin(), {subject, ReputationRecord{}});
  ids_.insert(ids_.begin(), subject.value);
  return entries_.front().second;
}

TrustQueryResult trust_query(PeerId i, PeerId j, const OverlayGraph& g, std::span<const TrustCache> caches,
                             std::span<const char> active, int dfs_ttl, Rng& rng) {
  TrustQueryResult result;
  const TrustCache& own = caches[i.index()];

  thread_local std::vector<PeerId> polled, visited, best, distrusted;
  polled.assign(g.community_neighbors(i).begin(), g.community_neighbors(i).end());
  std::sort(polled.begin(), polled.end());
  for (PeerId k : polled) {
    if (!active[k.index()] || k == j) continue;
    const ReputationRecord* r_kj = caches[k.index()].peek(j);
    if (!r_kj) continue;
    const ReputationRecord* r_ik = own.peek(k);
    result.record = merge_indirect(result.record, r_ik ? *r_ik : ReputationRecord{}, *r_kj);
    ++result.responders;
  }
  if (result.responders > 0) return result;

  result.used_dfs = true;
  visited.assign(1, i);
  PeerId current = i;
  for (int hop = 0; hop < dfs_ttl; ++hop) {
    // Highest-trust eligible neighbor of `current`. Uncached neighbors sit
    // at the neutral 0.5, so only cached entries can beat or undercut it.
    best.clear();
    distrusted.clear();
    const TrustCache& view = caches[current.index()];
    auto eligible = [&](PeerId n) {
      return active[n.index()] && std::find(visited.begin(), visited.end(), n) == visited.end();
    };
    auto keep_best = [&](double& best_trust, PeerId n, double t) {
      if (t > best_trust) {
        best_trust = t;
        best.assign(1, n);
      } else if (t == best_trust) {
        best.push_back(n);
      }
    };
    double best_trust = kTrustThreshold;
    for (const auto& [n, rec] : view.entries()) {
      const double t = trust_value(rec);
      if (t == kTrustThreshold || !eligible(n) || !g.adjacent(current, n)) continue;
      if (t > kTrustThreshold) {
        keep_best(best_trust, n, t);
      } else {
        distrusted.push_back(n);
      }
    }
    if (best.empty()) {
      auto neutral = [&](PeerId n) {
        if (eligible(n) && std::find(distrusted.begin(), distrusted.end(), n) == distrusted.end()) best.push_back(n);
      };
      for (PeerId n : g.connectivity_neighbors(current)) neutral(n);
      for (PeerId n : g.community_neighbors(current)) neutral(n);
    }
    if (best.empty()) {
      best_trust = -1.0;
      for (PeerId n : distrusted) keep_best(best_trust, n, view.trust_of(n));
    }
    if (best.empty()) break;
    std::sort(best.begin(), best.end());
    current = best[uniform_index(rng, best.size())];
    visited.push_back(current);
    result.dfs_hops = static_cast<std::size_t>(hop + 1);
    if (current == j) continue;
    if (const ReputationRecord* r_kj = caches[current.index()].peek(j)) {
      const ReputationRecord* r_ik = own.peek(current);
      result.record = merge_indirect(result.record, r_ik ? *r_ik : ReputationRecord{}, *r_kj);
      result.responders = 1;
      break;
    }
  }
  return result;
}

}  // namespace trustnet
