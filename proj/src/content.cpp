#include "trustnet/content.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include <boost/random/poisson_distribution.hpp>

namespace trustnet {

namespace {

std::size_t weighted_index(std::span<const double> weights, Rng& rng) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  double u = uniform01(rng) * total;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    last_positive = i;
    if (u < weights[i]) return i;
    u -= weights[i];
  }
  return last_positive;
}

std::size_t cdf_index(std::span<const double> cdf, Rng& rng) {
  const double u = uniform01(rng) * cdf.back();
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return std::min(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

// Draws `count` distinct indices from `weights` without replacement.
std::vector<std::size_t> draw_distinct(std::vector<double> weights, std::size_t count, Rng& rng) {
  std::vector<std::size_t> out;
  out.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    const std::size_t i = weighted_index(weights, rng);
    out.push_back(i);
    weights[i] = 0.0;
  }
  return out;
}

}  // namespace

std::size_t PeerLibrary::files_in(std::uint16_t c) const {
  return static_cast<std::size_t>(
      std::count_if(files.begin(), files.end(), [c](const FileId& f) { return f.category == c; }));
}

double zipf_weight(std::uint32_t rank, double alpha) {
  if (rank == 0) throw ParameterError("zipf rank must be >= 1");
  if (!(alpha > 0.0)) throw ParameterError("zipf alpha must be > 0");
  return std::pow(static_cast<double>(rank), -alpha);
}

double poisson_rate(std::size_t total_queries, std::size_t peers) {
  if (peers == 0) throw ParameterError("peer count must be >= 1");
  return static_cast<double>(total_queries) / static_cast<double>(peers);
}

std::vector<PeerLibrary> assign_content(std::size_t peer_count, const ContentParams& p, std::uint64_t seed) {
  if (p.categories < p.max_categories) throw ParameterError("need at least max_categories content categories");
  if (p.min_categories < 1 || p.min_categories > p.max_categories) throw ParameterError("bad category range");
  if (p.files_per_peer < p.max_categories) throw ParameterError("files_per_peer must be >= max_categories");

  std::vector<double> category_weights(p.categories);
  for (std::uint16_t c = 0; c < p.categories; ++c) category_weights[c] = zipf_weight(c + 1u, p.zipf_alpha);
  std::vector<double> rank_weights(p.files_per_category);
  for (std::uint32_t r = 0; r < p.files_per_category; ++r) rank_weights[r] = zipf_weight(r + 1, p.zipf_alpha);

  std::vector<PeerLibrary> libs(peer_count);
  for (std::size_t peer = 0; peer < peer_count; ++peer) {
    Rng rng = make_rng(seed, Stream::content, peer);
    PeerLibrary& lib = libs[peer];
    lib.owner = PeerId{static_cast<std::uint32_t>(peer)};

    const std::size_t k =
        p.min_categories + uniform_index(rng, p.max_categories - p.min_categories + 1);
    for (std::size_t i : draw_distinct(category_weights, k, rng)) lib.categories.push_back(static_cast<std::uint16_t>(i + 1));
    std::sort(lib.categories.begin(), lib.categories.end());

    // One file per category up front, the rest by largest remainder on the
    // normalized category weight. Counts are then handed out in popularity
    // order so the more popular category never gets fewer files.
    double total_w = 0.0;
    for (auto c : lib.categories) total_w += category_weights[c - 1];
    const std::size_t spare = p.files_per_peer - k;
    std::vector<std::size_t> counts(k, 1);
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < k; ++i) {
      const double share = category_weights[lib.categories[i] - 1] / total_w * static_cast<double>(spare);
      const auto whole = static_cast<std::size_t>(std::floor(share));
      counts[i] += whole;
      assigned += whole;
      remainders.emplace_back(share - static_cast<double>(whole), i);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t i = 0; assigned < spare; ++i, ++assigned) ++counts[remainders[i % k].second];
    std::sort(counts.begin(), counts.end(), std::greater<>());

    for (std::size_t i = 0; i < k; ++i) {
      if (counts[i] > p.files_per_category) throw ParameterError("files_per_category too small for files_per_peer");
      for (std::size_t r : draw_distinct(rank_weights, counts[i], rng)) {
        lib.files.push_back(FileId{lib.categories[i], static_cast<std::uint32_t>(r + 1)});
      }
    }
    std::sort(lib.files.begin(), lib.files.end());
  }
  return libs;
}

FileCatalog::FileCatalog(const ContentParams& params, std::span<const PeerLibrary> libraries)
    : per_category_(params.files_per_category),
      counts_(static_cast<std::size_t>(params.categories) * params.files_per_category, 0),
      cdf_(params.categories),
      ranks_(params.categories) {
  for (const auto& lib : libraries) {
    for (const auto& f : lib.files) ++counts_[slot(f)];
  }
  for (std::uint16_t c = 1; c <= params.categories; ++c) {
    double acc = 0.0;
    for (std::uint32_t r = 1; r <= per_category_; ++r) {
      if (counts_[slot({c, r})] == 0) continue;
      acc += zipf_weight(r, params.zipf_alpha);
      cdf_[c - 1].push_back(acc);
      ranks_[c - 1].push_back(r);
    }
  }
}

std::vector<double> category_interest(const PeerLibrary& lib, double alpha) {
  std::vector<double> w;
  w.reserve(lib.categories.size());
  for (auto c : lib.categories) w.push_back(zipf_weight(c, alpha));
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= total;
  return w;
}

namespace {

constexpr int kTargetRetries = 32;

bool draw_target(const PeerLibrary& lib, const std::vector<double>& interest, const FileCatalog& catalog, Rng& rng,
                 FileId& out) {
  const std::uint16_t c = lib.categories[weighted_index(interest, rng)];
  const auto cdf = catalog.rank_cdf(c);
  if (cdf.empty()) return false;
  const auto ranks = catalog.held_ranks(c);
  for (int attempt = 0; attempt < kTargetRetries; ++attempt) {
    const FileId f{c, ranks[cdf_index(cdf, rng)]};
    if (!lib.holds(f)) {
      out = f;
      return true;
    }
  }
  return false;
}

}  // namespace

QueryWorkload sample_queries(std::size_t generation, std::size_t total_queries, std::span<const PeerLibrary> libraries,
                             std::span<const char> active, const FileCatalog& catalog, const ContentParams& params,
                             std::uint64_t seed, bool exact_count) {
  QueryWorkload w;
  w.generation = generation;
  if (total_queries == 0 || libraries.empty()) return w;
  const std::uint64_t gen_seed = derive_seed(seed, Stream::queries, generation);

  std::vector<std::vector<double>> interest_cache(libraries.size());
  auto interest_of = [&](std::size_t p) -> const std::vector<double>& {
    if (interest_cache[p].empty()) interest_cache[p] = category_interest(libraries[p], params.zipf_alpha);
    return interest_cache[p];
  };

  if (exact_count) {
    std::vector<std::size_t> live;
    for (std::size_t p = 0; p < libraries.size(); ++p) {
      if (active[p]) live.push_back(p);
    }
    if (live.empty()) return w;
    Rng rng = make_rng(gen_seed, Stream::queries, 0);
    for (std::size_t q = 0; q < total_queries; ++q) {
      const std::size_t p = live[uniform_index(rng, live.size())];
      FileId f;
      if (draw_target(libraries[p], interest_of(p), catalog, rng, f)) w.queries.push_back({PeerId{static_cast<std::uint32_t>(p)}, f});
    }
    return w;
  }

  const double lambda = poisson_rate(total_queries, libraries.size());
  for (std::size_t p = 0; p < libraries.size(); ++p) {
    if (!active[p]) continue;
    Rng rng = make_rng(gen_seed, Stream::queries, p + 1);
    const int k = boost::random::poisson_distribution<int, double>(lambda)(rng);
    for (int q = 0; q < k; ++q) {
      FileId f;
      if (draw_target(libraries[p], interest_of(p), catalog, rng, f)) w.queries.push_back({PeerId{static_cast<std::uint32_t>(p)}, f});
    }
  }
  Rng order = make_rng(gen_seed, Stream::search, 0);
  shuffle(w.queries.begin(), w.queries.end(), order);
  return w;
}

void churn_exchange(std::span<PeerLibrary> libraries, std::span<const PeerId> churned, Rng& rng) {
  if (churned.size() < 2) return;
  std::vector<PeerId> cycle(churned.begin(), churned.end());
  shuffle(cycle.begin(), cycle.end(), rng);
  PeerLibrary first = std::move(libraries[cycle.front().index()]);
  for (std::size_t i = 0; i + 1 < cycle.size(); ++i) {
    libraries[cycle[i].index()] = std::move(libraries[cycle[i + 1].index()]);
  }
  libraries[cycle.back().index()] = std::move(first);
  for (PeerId p : cycle) libraries[p.index()].owner = p;
}

void write_census_rows(std::ostream& out, std::size_t generation, std::span<const PeerLibrary> libraries,
                       std::uint16_t categories) {
  std::vector<std::size_t> holders(categories + 1u, 0), files(categories + 1u, 0);
  for (const auto& lib : libraries) {
    for (auto c : lib.categories) ++holders[c];
    for (const auto& f : lib.files) ++files[f.category];
  }
  for (std::uint16_t c = 1; c <= categories; ++c) {
    out << generation << ',' << c << ',' << holders[c] << ',' << files[c] << '\n';
  }
}

}  // namespace trustnet
