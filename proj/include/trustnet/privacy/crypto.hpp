#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "trustnet/types.hpp"

namespace trustnet::privacy {

using Bytes = std::vector<std::uint8_t>;
using Digest = std::array<std::uint8_t, 32>;

struct SessionKey {
  std::array<std::uint8_t, 32> bytes{};
};

Bytes to_bytes(std::string_view s);

/// Identity-bound primitives the privacy protocols are written against.
/// A peer's public key is its identity; the registry of keys stands in for
/// the key exchange peers would do on first contact.
class CryptoSuite {
 public:
  virtual ~CryptoSuite() = default;

  virtual Digest hash(std::span<const std::uint8_t> data) const = 0;
  virtual Bytes public_key(PeerId owner) = 0;

  /// Public-key encryption to `recipient`; only `recipient` can open it.
  virtual Bytes seal(PeerId recipient, std::span<const std::uint8_t> plaintext) = 0;
  virtual std::optional<Bytes> open(PeerId recipient, std::span<const std::uint8_t> ciphertext) = 0;

  virtual Bytes sign(PeerId signer, std::span<const std::uint8_t> message) = 0;
  virtual bool verify(PeerId signer, std::span<const std::uint8_t> message, std::span<const std::uint8_t> sig) = 0;

  virtual SessionKey new_session_key() = 0;
  virtual Bytes encrypt(const SessionKey& key, std::span<const std::uint8_t> plaintext) = 0;
  virtual std::optional<Bytes> decrypt(const SessionKey& key, std::span<const std::uint8_t> ciphertext) const = 0;
};

/// libsodium-backed suite: BLAKE2b hashing, X25519 sealed boxes, Ed25519
/// signatures and XSalsa20-Poly1305 session encryption. Keys and session
/// keys derive from the seed, so a run is reproducible.
class SodiumCrypto final : public CryptoSuite {
 public:
  explicit SodiumCrypto(std::uint64_t seed);

  Digest hash(std::span<const std::uint8_t> data) const override;
  Bytes public_key(PeerId owner) override;
  Bytes seal(PeerId recipient, std::span<const std::uint8_t> plaintext) override;
  std::optional<Bytes> open(PeerId recipient, std::span<const std::uint8_t> ciphertext) override;
  Bytes sign(PeerId signer, std::span<const std::uint8_t> message) override;
  bool verify(PeerId signer, std::span<const std::uint8_t> message, std::span<const std::uint8_t> sig) override;
  SessionKey new_session_key() override;
  Bytes encrypt(const SessionKey& key, std::span<const std::uint8_t> plaintext) override;
  std::optional<Bytes> decrypt(const SessionKey& key, std::span<const std::uint8_t> ciphertext) const override;

 private:
  struct Identity {
    std::array<std::uint8_t, 32> box_pk{}, box_sk{};
    std::array<std::uint8_t, 32> sign_pk{};
    std::array<std::uint8_t, 64> sign_sk{};
  };
  const Identity& identity(PeerId p);

  std::array<std::uint8_t, 32> master_{};
  std::vector<std::optional<Identity>> identities_;
  std::uint64_t session_counter_ = 0;
  std::uint64_t nonce_counter_ = 0;
};

/// Makes sure libsodium is initialized; safe to call repeatedly.
void ensure_sodium();

}  // namespace trustnet::privacy
