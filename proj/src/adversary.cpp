#include "trustnet/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "trustnet/overlay.hpp"

namespace trustnet {

namespace {

std::vector<std::uint32_t> sample_without_replacement(std::size_t n, std::size_t count, Rng& rng) {
  std::vector<std::uint32_t> ids(n);
  std::iota(ids.begin(), ids.end(), 0u);
  // Partial Fisher-Yates: the first `count` slots end up a uniform sample.
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + uniform_index(rng, n - i);
    std::swap(ids[i], ids[j]);
  }
  ids.resize(count);
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::size_t fraction_count(std::size_t n, double fraction) {
  return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));
}

}  // namespace

std::vector<PeerDisposition> mark_malicious(std::size_t n, double fraction, ThreatModel model, double deception,
                                            std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw ParameterError("malicious_fraction must be in [0, 1]");
  if (!(deception >= 0.0 && deception <= 1.0)) throw ParameterError("degree_of_deception must be in [0, 1]");
  std::vector<PeerDisposition> out(n);
  Rng rng = make_rng(seed, Stream::adversary);
  for (std::uint32_t id : sample_without_replacement(n, fraction_count(n, fraction), rng)) {
    out[id].kind = model == ThreatModel::a ? PeerKind::malicious_a : PeerKind::malicious_b;
    out[id].deception = deception;
  }
  return out;
}

Outcome serve_decision(PeerDisposition& state, const OverlayGraph& g, PeerId provider, Rng& rng) {
  switch (state.kind) {
    case PeerKind::honest:
      return Outcome::authentic;
    case PeerKind::malicious_a:
      return uniform01(rng) < state.deception ? Outcome::authentic : Outcome::fake;
    case PeerKind::malicious_b:
      if (state.phase == AttackPhase::accumulating && g.saturated(provider)) state.phase = AttackPhase::attacking;
      return state.phase == AttackPhase::attacking ? Outcome::fake : Outcome::authentic;
  }
  return Outcome::fake;
}

std::vector<PeerId> apply_churn(std::size_t n, double fraction, Rng& rng) {
  if (!(fraction >= 0.0 && fraction < 1.0)) throw ParameterError("churn_fraction must be in [0, 1)");
  std::vector<PeerId> out;
  for (std::uint32_t id : sample_without_replacement(n, fraction_count(n, fraction), rng)) out.emplace_back(id);
  return out;
}

}  // namespace trustnet
