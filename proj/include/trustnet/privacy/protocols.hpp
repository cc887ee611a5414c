#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "trustnet/adaptation.hpp"
#include "trustnet/privacy/bloom_filter.hpp"
#include "trustnet/privacy/crypto.hpp"
#include "trustnet/search.hpp"

namespace trustnet::privacy {

/// off: plain search. proxy: a trusted neighbor searches and downloads on
/// the requester's behalf. handle: proxy plus a partially revealed handle
/// hash answered with Bloom filters. full: handle plus an end-to-end session
/// key the proxy never learns.
enum class PrivacyMode : std::uint8_t { off, proxy, handle, full };
const char* to_string(PrivacyMode m);
std::optional<PrivacyMode> parse_privacy_mode(std::string_view s);

enum class MsgType : std::uint8_t {
  request,            // requester -> proxy, plain lookup request
  download_request,   // proxy -> supplier
  data,               // file content, any direction
  prefix_request,     // partial handle hash
  filter,             // Bloom filter plus supplier key
  encrypted_request,  // full request sealed to the supplier
  fallback,           // no trusted proxy; requester searched directly
  violation,          // relay signature did not verify
};
const char* to_string(MsgType t);

struct TraceMessage {
  std::uint64_t session = 0;
  std::uint32_t step = 0;
  PeerId from;
  PeerId to;
  MsgType type = MsgType::request;
  bool payload_visible = false;  // the receiver could read the payload
};

struct SessionInfo {
  std::uint64_t id = 0;
  PeerId requester;
  std::optional<PeerId> proxy;  // empty for a direct fallback
  PrivacyMode mode = PrivacyMode::off;
  std::vector<PeerId> suppliers;
  bool proxy_read_payload = false;
  bool aborted = false;
};

/// Message log of privacy sessions plus the assertions checked against it.
class ProtocolTrace {
 public:
  std::uint64_t begin(PeerId requester, std::optional<PeerId> proxy, PrivacyMode mode);
  void send(std::uint64_t session, PeerId from, PeerId to, MsgType type, bool payload_visible);
  void add_supplier(std::uint64_t session, PeerId supplier);
  void note_proxy_read(std::uint64_t session, bool could_read);
  void note_abort(std::uint64_t session);

  const SessionInfo& session(std::uint64_t id) const { return sessions_.at(id); }
  const std::map<std::uint64_t, SessionInfo>& sessions() const { return sessions_; }
  const std::vector<TraceMessage>& messages() const { return messages_; }

  /// The requester talks only to its proxy, and no supplier ever exchanges
  /// a message with the requester. Vacuously true for direct fallbacks.
  bool requester_anonymous(std::uint64_t session) const;
  /// In full mode the proxy never received a payload it could read.
  bool proxy_blind(std::uint64_t session) const;

  /// `session_id,step,from,to,msg_type,payload_visible`; no header.
  void write_rows(std::ostream& out) const;
  void clear();

 private:
  std::uint64_t next_session_ = 1;
  std::map<std::uint64_t, SessionInfo> sessions_;
  std::map<std::uint64_t, std::uint32_t> steps_;
  std::vector<TraceMessage> messages_;
};

/// Revealed leading bits of a handle digest.
struct HandleRequest {
  Digest prefix{};        // bits past `bits` are zero
  unsigned bits = 16;
};

HandleRequest make_handle_request(const Digest& d, unsigned bits);
bool prefix_matches(const Digest& d, const HandleRequest& req);
/// The unrevealed part: the digest with the leading `bits` zeroed.
Digest handle_suffix(const Digest& d, unsigned bits);
Bytes handle_bytes(const FileId& f);
/// Content a supplier hands out; authentic copies are recognizable.
Bytes file_content(const FileId& f, Outcome o);

struct HandleLookupResult {
  std::size_t receivers = 0;        // peers that handled the prefix request
  std::size_t prefix_matched = 0;   // peers that answered with a filter
  std::size_t filter_rejected = 0;  // filters that rejected the suffix
  std::vector<PeerId> candidates;   // filters that accepted it
};

struct TransferResult {
  bool completed = false;      // false when a relay signature failed
  bool proxy_could_read = false;
  Bytes plaintext;
};

struct PrivacyParams {
  PrivacyMode mode = PrivacyMode::off;
  unsigned prefix_bits = 16;
  std::size_t bloom_bits = 1024;
  std::size_t bloom_hashes = 7;
};

struct PrivateSearchResult {
  std::uint64_t session = 0;
  bool private_path = false;  // false: no trusted proxy, searched directly
  std::optional<PeerId> proxy;
  std::size_t responses = 0;
  std::vector<DownloadAttempt> attempts;
};

/// Runs searches through a trusted proxy, optionally hiding the handle and
/// the content from it. The proxy is the visible counterparty, so it is the
/// one that ranks suppliers, records outcomes and rewires.
class PrivacyProtocols {
 public:
  PrivacyProtocols(Network& net, SearchEngine& search, Adaptation& adaptation, CryptoSuite& crypto,
                   ProtocolTrace& trace, PrivacyParams params);

  /// The active community neighbor i trusts most, if i trusts it at all.
  std::optional<PeerId> pick_proxy(PeerId i) const;

  /// Entry point: dispatches on the configured mode.
  PrivateSearchResult search(PeerId i, const FileId& target, Rng& rng);

  /// Scheme (a). Falls back to a direct search without a trusted proxy.
  PrivateSearchResult proxy_lookup(PeerId i, const FileId& target, Rng& rng);

  /// Scheme (b) lookup phase through proxy j.
  HandleLookupResult partial_hash_lookup(std::uint64_t session, PeerId i, PeerId j, const FileId& target, Rng& rng);

  /// Scheme (c): i -> j -> k with a session key only i and k know; j signs
  /// what it relays. `tamper_relay` corrupts j's relayed reply (for tests).
  TransferResult secure_transfer(std::uint64_t session, PeerId i, PeerId j, PeerId k, const Bytes& request,
                                 const std::function<Bytes(const Bytes&)>& serve, bool tamper_relay = false);

  const Digest& digest_of(const FileId& f);
  const PrivacyParams& params() const { return params_; }

 private:
  PrivateSearchResult direct(std::uint64_t session, PeerId i, const FileId& target, Rng& rng);
  PrivateSearchResult handle_search(PeerId i, PeerId j, const FileId& target, Rng& rng);

  Network& net_;
  SearchEngine& search_;
  Adaptation& adaptation_;
  CryptoSuite& crypto_;
  ProtocolTrace& trace_;
  PrivacyParams params_;
  std::map<FileId, Digest> digests_;
};

}  // namespace trustnet::privacy
