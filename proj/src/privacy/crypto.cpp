#include "trustnet/privacy/crypto.hpp"

#include <cstring>
#include <stdexcept>

#include <sodium.h>

namespace trustnet::privacy {

void ensure_sodium() {
  static const int rc = sodium_init();
  if (rc < 0) throw std::runtime_error("libsodium initialization failed");
}

Bytes to_bytes(std::string_view s) { return Bytes(s.begin(), s.end()); }

namespace {

void put_u64(std::uint8_t* out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out[i] = static_cast<std::uint8_t>(v >> (8 * i));
}

}  // namespace

SodiumCrypto::SodiumCrypto(std::uint64_t seed) {
  ensure_sodium();
  std::uint8_t seed_bytes[8];
  put_u64(seed_bytes, seed);
  crypto_generichash(master_.data(), master_.size(), seed_bytes, sizeof seed_bytes, nullptr, 0);
}

const SodiumCrypto::Identity& SodiumCrypto::identity(PeerId p) {
  if (identities_.size() <= p.index()) identities_.resize(p.index() + 1);
  auto& slot = identities_[p.index()];
  if (!slot) {
    Identity id;
    std::uint8_t seed[32];
    crypto_kdf_derive_from_key(seed, sizeof seed, 2 * std::uint64_t{p.value}, "peer-key", master_.data());
    crypto_box_seed_keypair(id.box_pk.data(), id.box_sk.data(), seed);
    crypto_kdf_derive_from_key(seed, sizeof seed, 2 * std::uint64_t{p.value} + 1, "peer-key", master_.data());
    crypto_sign_seed_keypair(id.sign_pk.data(), id.sign_sk.data(), seed);
    slot = id;
  }
  return *slot;
}

Digest SodiumCrypto::hash(std::span<const std::uint8_t> data) const {
  Digest d;
  crypto_generichash(d.data(), d.size(), data.data(), data.size(), nullptr, 0);
  return d;
}

Bytes SodiumCrypto::public_key(PeerId owner) {
  const auto& id = identity(owner);
  Bytes out(id.box_pk.begin(), id.box_pk.end());
  out.insert(out.end(), id.sign_pk.begin(), id.sign_pk.end());
  return out;
}

Bytes SodiumCrypto::seal(PeerId recipient, std::span<const std::uint8_t> plaintext) {
  const auto& id = identity(recipient);
  Bytes out(plaintext.size() + crypto_box_SEALBYTES);
  crypto_box_seal(out.data(), plaintext.data(), plaintext.size(), id.box_pk.data());
  return out;
}

std::optional<Bytes> SodiumCrypto::open(PeerId recipient, std::span<const std::uint8_t> ciphertext) {
  if (ciphertext.size() < crypto_box_SEALBYTES) return std::nullopt;
  const auto& id = identity(recipient);
  Bytes out(ciphertext.size() - crypto_box_SEALBYTES);
  if (crypto_box_seal_open(out.data(), ciphertext.data(), ciphertext.size(), id.box_pk.data(), id.box_sk.data()) !=
      0) {
    return std::nullopt;
  }
  return out;
}

Bytes SodiumCrypto::sign(PeerId signer, std::span<const std::uint8_t> message) {
  const auto& id = identity(signer);
  Bytes sig(crypto_sign_BYTES);
  crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(), id.sign_sk.data());
  return sig;
}

bool SodiumCrypto::verify(PeerId signer, std::span<const std::uint8_t> message, std::span<const std::uint8_t> sig) {
  if (sig.size() != crypto_sign_BYTES) return false;
  const auto& id = identity(signer);
  return crypto_sign_verify_detached(sig.data(), message.data(), message.size(), id.sign_pk.data()) == 0;
}

SessionKey SodiumCrypto::new_session_key() {
  SessionKey k;
  crypto_kdf_derive_from_key(k.bytes.data(), k.bytes.size(), session_counter_++, "session_", master_.data());
  return k;
}

Bytes SodiumCrypto::encrypt(const SessionKey& key, std::span<const std::uint8_t> plaintext) {
  Bytes out(crypto_secretbox_NONCEBYTES + crypto_secretbox_MACBYTES + plaintext.size(), 0);
  put_u64(out.data(), ++nonce_counter_);
  crypto_secretbox_easy(out.data() + crypto_secretbox_NONCEBYTES, plaintext.data(), plaintext.size(), out.data(),
                        key.bytes.data());
  return out;
}

std::optional<Bytes> SodiumCrypto::decrypt(const SessionKey& key, std::span<const std::uint8_t> ciphertext) const {
  constexpr std::size_t overhead = crypto_secretbox_NONCEBYTES + crypto_secretbox_MACBYTES;
  if (ciphertext.size() < overhead) return std::nullopt;
  Bytes out(ciphertext.size() - overhead);
  if (crypto_secretbox_open_easy(out.data(), ciphertext.data() + crypto_secretbox_NONCEBYTES,
                                 ciphertext.size() - crypto_secretbox_NONCEBYTES, ciphertext.data(),
                                 key.bytes.data()) != 0) {
    return std::nullopt;
  }
  return out;
}

}  // namespace trustnet::privacy
