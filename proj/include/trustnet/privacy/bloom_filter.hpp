#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace trustnet::privacy {

/// Classic m-bit, k-hash Bloom filter. Indices come from double hashing of
/// two keyed SipHash values, so membership is stable across platforms.
class BloomFilter {
 public:
  BloomFilter(std::size_t bits = 1024, std::size_t hashes = 7);

  void insert(std::span<const std::uint8_t> element);
  /// False means definitely absent; true means possibly present.
  bool may_contain(std::span<const std::uint8_t> element) const;

  std::size_t bit_count() const { return bits_; }
  std::size_t hash_count() const { return hashes_; }
  std::size_t inserted() const { return inserted_; }
  std::size_t popcount() const;

  /// (1 - e^(-k n / m))^k
  static double expected_fpr(std::size_t bits, std::size_t hashes, std::size_t n);

 private:
  template <typename Fn>
  void for_each_index(std::span<const std::uint8_t> element, Fn&& fn) const;

  std::size_t bits_;
  std::size_t hashes_;
  std::size_t inserted_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace trustnet::privacy
