#pragma once

#include <cstdint>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_int_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

namespace trustnet {

// Boost distributions are header-implemented, so draws are identical across
// standard libraries. std:: distributions are not.
using Rng = boost::random::mt19937_64;

/// Independent random streams carved out of one master seed.
enum class Stream : std::uint64_t {
  topology = 1,
  content,
  adversary,
  churn,
  queries,
  search,
  metrics,
  crypto,
  privacy,
};

std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint64_t index = 0);

inline Rng make_rng(std::uint64_t master, Stream stream, std::uint64_t index = 0) {
  return Rng(derive_seed(master, stream, index));
}

inline double uniform01(Rng& rng) { return boost::random::uniform_real_distribution<double>(0.0, 1.0)(rng); }

/// Uniform integer in [0, n). n must be positive.
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return boost::random::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

/// Fisher-Yates with the portable index draw above.
template <typename It>
void shuffle(It first, It last, Rng& rng) {
  const auto n = static_cast<std::size_t>(last - first);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = uniform_index(rng, i);
    using std::swap;
    swap(first[i - 1], first[j]);
  }
}

}  // namespace trustnet
