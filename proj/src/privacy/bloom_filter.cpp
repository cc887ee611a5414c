#include "trustnet/privacy/bloom_filter.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include <sodium.h>

#include "trustnet/privacy/crypto.hpp"
#include "trustnet/types.hpp"

namespace trustnet::privacy {

namespace {

constexpr unsigned char kKeyA[crypto_shorthash_KEYBYTES] = {'b', 'l', 'o', 'o', 'm', '-', 'h', 'a',
                                                            's', 'h', '-', 'k', 'e', 'y', '-', '1'};
constexpr unsigned char kKeyB[crypto_shorthash_KEYBYTES] = {'b', 'l', 'o', 'o', 'm', '-', 'h', 'a',
                                                            's', 'h', '-', 'k', 'e', 'y', '-', '2'};

std::uint64_t siphash(std::span<const std::uint8_t> data, const unsigned char* key) {
  unsigned char out[crypto_shorthash_BYTES];
  crypto_shorthash(out, data.data(), data.size(), key);
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | out[i];
  return v;
}

}  // namespace

BloomFilter::BloomFilter(std::size_t bits, std::size_t hashes)
    : bits_(bits), hashes_(hashes), words_((bits + 63) / 64, 0) {
  if (bits == 0 || hashes == 0) throw ParameterError("bloom filter needs m > 0 and k > 0");
  ensure_sodium();
}

template <typename Fn>
void BloomFilter::for_each_index(std::span<const std::uint8_t> element, Fn&& fn) const {
  const std::uint64_t h1 = siphash(element, kKeyA);
  const std::uint64_t h2 = siphash(element, kKeyB) | 1u;
  for (std::size_t i = 0; i < hashes_; ++i) fn((h1 + i * h2) % bits_);
}

void BloomFilter::insert(std::span<const std::uint8_t> element) {
  for_each_index(element, [this](std::size_t b) { words_[b / 64] |= std::uint64_t{1} << (b % 64); });
  ++inserted_;
}

bool BloomFilter::may_contain(std::span<const std::uint8_t> element) const {
  bool all = true;
  for_each_index(element, [&](std::size_t b) { all = all && ((words_[b / 64] >> (b % 64)) & 1u); });
  return all;
}

std::size_t BloomFilter::popcount() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

double BloomFilter::expected_fpr(std::size_t bits, std::size_t hashes, std::size_t n) {
  const double k = static_cast<double>(hashes);
  return std::pow(1.0 - std::exp(-k * static_cast<double>(n) / static_cast<double>(bits)), k);
}

}  // namespace trustnet::privacy
