#pragma once

#include <algorithm>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "trustnet/rng.hpp"
#include "trustnet/types.hpp"

namespace trustnet {

struct ContentParams {
  std::uint16_t categories = 32;
  double zipf_alpha = 0.8;
  std::size_t files_per_peer = 20;
  std::uint32_t files_per_category = 100;
  std::size_t min_categories = 3;
  std::size_t max_categories = 6;
};

/// What a peer shares. `categories` is sorted by global popularity (ascending
/// index), `files` is sorted.
struct PeerLibrary {
  PeerId owner;
  std::vector<std::uint16_t> categories;
  std::vector<FileId> files;

  bool holds(const FileId& f) const { return std::binary_search(files.begin(), files.end(), f); }
  bool shares_category(std::uint16_t c) const {
    return std::find(categories.begin(), categories.end(), c) != categories.end();
  }
  std::size_t files_in(std::uint16_t c) const;
};

/// Unnormalized zipf weight r^-alpha. Throws ParameterError for r == 0 or
/// alpha <= 0.
double zipf_weight(std::uint32_t rank, double alpha);

/// Per-generation Poisson mean of queries per peer.
double poisson_rate(std::size_t total_queries, std::size_t peers);

/// Draws a library for each of `peer_count` peers. Requires at least
/// max_categories categories.
std::vector<PeerLibrary> assign_content(std::size_t peer_count, const ContentParams& params, std::uint64_t seed);

/// Holder counts for every (category, rank) in the finite file space.
class FileCatalog {
 public:
  FileCatalog(const ContentParams& params, std::span<const PeerLibrary> libraries);

  std::uint32_t holders(const FileId& f) const { return counts_[slot(f)]; }
  /// Cumulative zipf weights over ranks that have at least one holder.
  std::span<const double> rank_cdf(std::uint16_t c) const { return cdf_[c - 1]; }
  std::span<const std::uint32_t> held_ranks(std::uint16_t c) const { return ranks_[c - 1]; }

 private:
  std::size_t slot(const FileId& f) const { return (f.category - 1) * static_cast<std::size_t>(per_category_) + (f.rank - 1); }

  std::uint32_t per_category_;
  std::vector<std::uint32_t> counts_;
  std::vector<std::vector<double>> cdf_;
  std::vector<std::vector<std::uint32_t>> ranks_;
};

struct Query {
  PeerId initiator;
  FileId target;
};

struct QueryWorkload {
  std::size_t generation = 0;
  std::vector<Query> queries;
};

/// Per-peer interest in each of its categories: normalized zipf weight of
/// the category's global rank among the peer's chosen categories.
std::vector<double> category_interest(const PeerLibrary& lib, double alpha);

/// Each active peer draws K ~ Poisson(M/N) queries (or, with exact_count, M
/// initiators are drawn uniformly from the active peers). A query picks one
/// of the initiator's categories by interest, then a rank by zipf weight
/// among files held somewhere in the network but not by the initiator.
QueryWorkload sample_queries(std::size_t generation, std::size_t total_queries, std::span<const PeerLibrary> libraries,
                             std::span<const char> active, const FileCatalog& catalog, const ContentParams& params,
                             std::uint64_t seed, bool exact_count = false);

/// Rotates libraries among churned peers along a random cycle, so every
/// churned peer ends up with another's content. Fewer than two peers: no-op.
void churn_exchange(std::span<PeerLibrary> libraries, std::span<const PeerId> churned, Rng& rng);

/// `generation,category,holders,files` rows; no header.
void write_census_rows(std::ostream& out, std::size_t generation, std::span<const PeerLibrary> libraries,
                       std::uint16_t categories);

}  // namespace trustnet
