#pragma once

#include <cstdint>
#include <vector>

#include "trustnet/rng.hpp"
#include "trustnet/types.hpp"

namespace trustnet {

class OverlayGraph;

enum class PeerKind : std::uint8_t { honest, malicious_a, malicious_b };
enum class ThreatModel : std::uint8_t { a, b };
enum class AttackPhase : std::uint8_t { accumulating, attacking };

struct PeerDisposition {
  PeerKind kind = PeerKind::honest;
  double deception = 0.0;  // model A: probability of serving an authentic file
  AttackPhase phase = AttackPhase::accumulating;

  bool malicious() const { return kind != PeerKind::honest; }
};

/// floor(fraction * n) peers, sampled uniformly, become malicious under
/// `model`; the rest are honest.
std::vector<PeerDisposition> mark_malicious(std::size_t n, double fraction, ThreatModel model, double deception,
                                            std::uint64_t seed);

/// What `provider` serves. Model B peers switch to attacking, for good, once
/// their community degree can no longer grow under edge_limit.
Outcome serve_decision(PeerDisposition& provider_state, const OverlayGraph& g, PeerId provider, Rng& rng);

/// floor(fraction * n) peers drawn uniformly, returned sorted. Requires
/// fraction in [0, 1).
std::vector<PeerId> apply_churn(std::size_t n, double fraction, Rng& rng);

}  // namespace trustnet
