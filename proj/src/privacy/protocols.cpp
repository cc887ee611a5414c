#include "trustnet/privacy/protocols.hpp"

#include <algorithm>
#include <ostream>
#include <string>

namespace trustnet::privacy {

const char* to_string(PrivacyMode m) {
  switch (m) {
    case PrivacyMode::off: return "off";
    case PrivacyMode::proxy: return "proxy";
    case PrivacyMode::handle: return "handle";
    case PrivacyMode::full: return "full";
  }
  return "?";
}

std::optional<PrivacyMode> parse_privacy_mode(std::string_view s) {
  if (s == "off") return PrivacyMode::off;
  if (s == "proxy") return PrivacyMode::proxy;
  if (s == "handle") return PrivacyMode::handle;
  if (s == "full") return PrivacyMode::full;
  return std::nullopt;
}

const char* to_string(MsgType t) {
  switch (t) {
    case MsgType::request: return "REQ";
    case MsgType::download_request: return "DL_REQ";
    case MsgType::data: return "DATA";
    case MsgType::prefix_request: return "PREFIX_REQ";
    case MsgType::filter: return "FILTER";
    case MsgType::encrypted_request: return "ENC_REQ";
    case MsgType::fallback: return "DIRECT_FALLBACK";
    case MsgType::violation: return "VIOLATION";
  }
  return "?";
}

// --- trace -----------------------------------------------------------------

std::uint64_t ProtocolTrace::begin(PeerId requester, std::optional<PeerId> proxy, PrivacyMode mode) {
  const std::uint64_t id = next_session_++;
  SessionInfo info;
  info.id = id;
  info.requester = requester;
  info.proxy = proxy;
  info.mode = mode;
  sessions_.emplace(id, std::move(info));
  return id;
}

void ProtocolTrace::send(std::uint64_t session, PeerId from, PeerId to, MsgType type, bool payload_visible) {
  messages_.push_back({session, steps_[session]++, from, to, type, payload_visible});
}

void ProtocolTrace::add_supplier(std::uint64_t session, PeerId supplier) {
  auto& s = sessions_.at(session).suppliers;
  if (std::find(s.begin(), s.end(), supplier) == s.end()) s.push_back(supplier);
}

void ProtocolTrace::note_proxy_read(std::uint64_t session, bool could_read) {
  sessions_.at(session).proxy_read_payload |= could_read;
}

void ProtocolTrace::note_abort(std::uint64_t session) { sessions_.at(session).aborted = true; }

bool ProtocolTrace::requester_anonymous(std::uint64_t session) const {
  const SessionInfo& info = sessions_.at(session);
  if (!info.proxy) return true;
  for (const auto& m : messages_) {
    if (m.session != session) continue;
    if (m.from == info.requester && m.to != *info.proxy) return false;
    if (m.to == info.requester && m.from != *info.proxy) return false;
  }
  return true;
}

bool ProtocolTrace::proxy_blind(std::uint64_t session) const {
  const SessionInfo& info = sessions_.at(session);
  if (!info.proxy || info.mode != PrivacyMode::full) return true;
  if (info.proxy_read_payload) return false;
  for (const auto& m : messages_) {
    if (m.session != session || m.to != *info.proxy) continue;
    if ((m.type == MsgType::data || m.type == MsgType::encrypted_request) && m.payload_visible) return false;
  }
  return true;
}

void ProtocolTrace::write_rows(std::ostream& out) const {
  for (const auto& m : messages_) {
    out << m.session << ',' << m.step << ',' << m.from.value << ',' << m.to.value << ',' << to_string(m.type) << ','
        << (m.payload_visible ? 1 : 0) << '\n';
  }
}

void ProtocolTrace::clear() {
  sessions_.clear();
  steps_.clear();
  messages_.clear();
}

// --- handles -----------------------------------------------------------------

HandleRequest make_handle_request(const Digest& d, unsigned bits) {
  if (bits == 0 || bits >= d.size() * 8) throw ParameterError("revealed prefix length must be in (0, 256)");
  HandleRequest req;
  req.bits = bits;
  for (unsigned b = 0; b < bits; ++b) {
    const unsigned byte = b / 8, shift = 7 - b % 8;
    req.prefix[byte] |= static_cast<std::uint8_t>(d[byte] & (1u << shift));
  }
  return req;
}

bool prefix_matches(const Digest& d, const HandleRequest& req) {
  const unsigned full = req.bits / 8;
  if (!std::equal(d.begin(), d.begin() + full, req.prefix.begin())) return false;
  const unsigned rest = req.bits % 8;
  if (rest == 0) return true;
  const auto mask = static_cast<std::uint8_t>(0xFFu << (8 - rest));
  return (d[full] & mask) == req.prefix[full];
}

Digest handle_suffix(const Digest& d, unsigned bits) {
  Digest s = d;
  for (unsigned b = 0; b < bits; ++b) s[b / 8] &= static_cast<std::uint8_t>(~(1u << (7 - b % 8)));
  return s;
}

Bytes handle_bytes(const FileId& f) { return to_bytes("file:" + trustnet::to_string(f)); }

Bytes file_content(const FileId& f, Outcome o) {
  return to_bytes("content:" + trustnet::to_string(f) + (o == Outcome::authentic ? ":genuine" : ":corrupt"));
}

// --- protocols ---------------------------------------------------------------

PrivacyProtocols::PrivacyProtocols(Network& net, SearchEngine& search, Adaptation& adaptation, CryptoSuite& crypto,
                                   ProtocolTrace& trace, PrivacyParams params)
    : net_(net), search_(search), adaptation_(adaptation), crypto_(crypto), trace_(trace), params_(params) {
  make_handle_request(Digest{}, params_.prefix_bits);  // validates the prefix length
}

const Digest& PrivacyProtocols::digest_of(const FileId& f) {
  auto it = digests_.find(f);
  if (it == digests_.end()) it = digests_.emplace(f, crypto_.hash(handle_bytes(f))).first;
  return it->second;
}

std::optional<PeerId> PrivacyProtocols::pick_proxy(PeerId i) const {
  std::optional<PeerId> best;
  double best_trust = -1.0;
  for (PeerId k : net_.graph.community_neighbors(i)) {
    if (!net_.is_active(k)) continue;
    const double t = net_.cached_trust(i, k);
    if (!trustworthy(t)) continue;
    if (t > best_trust || (t == best_trust && k < *best)) {
      best = k;
      best_trust = t;
    }
  }
  return best;
}

PrivateSearchResult PrivacyProtocols::search(PeerId i, const FileId& target, Rng& rng) {
  if (params_.mode == PrivacyMode::off) {
    const std::uint64_t s = trace_.begin(i, std::nullopt, params_.mode);
    return direct(s, i, target, rng);
  }
  if (params_.mode == PrivacyMode::proxy) return proxy_lookup(i, target, rng);
  const auto proxy = pick_proxy(i);
  if (!proxy) {
    const std::uint64_t s = trace_.begin(i, std::nullopt, params_.mode);
    return direct(s, i, target, rng);
  }
  return handle_search(i, *proxy, target, rng);
}

PrivateSearchResult PrivacyProtocols::direct(std::uint64_t session, PeerId i, const FileId& target, Rng& rng) {
  trace_.send(session, i, i, MsgType::fallback, true);
  PrivateSearchResult r;
  r.session = session;
  const auto responses = search_.initiate_query(i, target, rng);
  r.responses = responses.size();
  r.attempts = adaptation_.process_responses(i, target, responses, rng);
  return r;
}

PrivateSearchResult PrivacyProtocols::proxy_lookup(PeerId i, const FileId& target, Rng& rng) {
  const auto proxy = pick_proxy(i);
  const std::uint64_t s = trace_.begin(i, proxy, PrivacyMode::proxy);
  if (!proxy) return direct(s, i, target, rng);
  const PeerId j = *proxy;

  PrivateSearchResult r;
  r.session = s;
  r.private_path = true;
  r.proxy = j;
  trace_.send(s, i, j, MsgType::request, true);
  auto responses = search_.initiate_query(j, target, rng);
  std::erase_if(responses, [i](const QueryResponse& q) { return q.responder == i; });
  r.responses = responses.size();

  auto fetch = [&](PeerId k) -> std::optional<Outcome> {
    trace_.add_supplier(s, k);
    trace_.send(s, j, k, MsgType::download_request, true);
    const Outcome o = serve_decision(net_.dispositions[k.index()], net_.graph, k, rng);
    trace_.send(s, k, j, MsgType::data, true);
    if (o == Outcome::authentic) trace_.send(s, j, i, MsgType::data, true);
    return o;
  };
  r.attempts = adaptation_.process_responses(j, target, responses, rng, fetch);
  return r;
}

HandleLookupResult PrivacyProtocols::partial_hash_lookup(std::uint64_t session, PeerId i, PeerId j,
                                                         const FileId& target, Rng& rng) {
  const Digest& wanted = digest_of(target);
  const HandleRequest req = make_handle_request(wanted, params_.prefix_bits);
  const Digest own_suffix = handle_suffix(wanted, params_.prefix_bits);
  trace_.send(session, i, j, MsgType::prefix_request, true);

  QueryTarget qt{target, std::nullopt, [this, &req](const PeerLibrary& lib) {
                   return std::any_of(lib.files.begin(), lib.files.end(),
                                      [&](const FileId& f) { return prefix_matches(digest_of(f), req); });
                 }};
  const auto responses = search_.run(j, qt, rng);

  HandleLookupResult out;
  out.receivers = search_.last_visited();
  std::vector<PeerId> responders;
  for (const auto& q : responses) {
    if (q.responder != i) responders.push_back(q.responder);
  }
  std::sort(responders.begin(), responders.end());
  responders.erase(std::unique(responders.begin(), responders.end()), responders.end());

  for (PeerId k : responders) {
    trace_.send(session, j, k, MsgType::prefix_request, true);
    BloomFilter filter(params_.bloom_bits, params_.bloom_hashes);
    for (const FileId& f : net_.libraries[k.index()].files) {
      const Digest& d = digest_of(f);
      if (prefix_matches(d, req)) filter.insert(handle_suffix(d, params_.prefix_bits));
    }
    ++out.prefix_matched;
    trace_.send(session, k, j, MsgType::filter, true);
    trace_.send(session, j, i, MsgType::filter, true);
    if (filter.may_contain(own_suffix)) {
      out.candidates.push_back(k);
    } else {
      ++out.filter_rejected;
    }
  }
  return out;
}

PrivateSearchResult PrivacyProtocols::handle_search(PeerId i, PeerId j, const FileId& target, Rng& rng) {
  const std::uint64_t s = trace_.begin(i, j, params_.mode);
  PrivateSearchResult r;
  r.session = s;
  r.private_path = true;
  r.proxy = j;

  const HandleLookupResult lookup = partial_hash_lookup(s, i, j, target, rng);
  std::vector<QueryResponse> candidates;
  for (PeerId k : lookup.candidates) candidates.push_back({k, target, 0});
  r.responses = candidates.size();

  const Bytes request = handle_bytes(target);
  auto fetch = [&](PeerId k) -> std::optional<Outcome> {
    trace_.add_supplier(s, k);
    const bool holds = net_.libraries[k.index()].holds(target);
    Outcome served = Outcome::fake;
    auto serve = [&](const Bytes&) {
      if (!holds) return Bytes{};
      served = serve_decision(net_.dispositions[k.index()], net_.graph, k, rng);
      return file_content(target, served);
    };

    if (params_.mode == PrivacyMode::full) {
      const TransferResult t = secure_transfer(s, i, j, k, request, serve);
      if (!t.completed) return Outcome::fake;
      if (t.plaintext.empty()) return std::nullopt;  // Bloom false positive
      return t.plaintext == file_content(target, Outcome::authentic) ? Outcome::authentic : Outcome::fake;
    }

    const Bytes sealed = crypto_.seal(k, request);
    trace_.send(s, i, j, MsgType::encrypted_request, crypto_.open(j, sealed).has_value());
    const auto opened = crypto_.open(k, sealed);
    trace_.send(s, j, k, MsgType::encrypted_request, opened.has_value());
    const Bytes content = serve(*opened);
    trace_.send(s, k, j, MsgType::data, true);
    trace_.send(s, j, i, MsgType::data, true);
    if (content.empty()) return std::nullopt;
    return served;
  };
  r.attempts = adaptation_.process_responses(j, target, candidates, rng, fetch);
  return r;
}

TransferResult PrivacyProtocols::secure_transfer(std::uint64_t session, PeerId i, PeerId j, PeerId k,
                                                 const Bytes& request,
                                                 const std::function<Bytes(const Bytes&)>& serve, bool tamper_relay) {
  TransferResult result;
  const SessionKey key = crypto_.new_session_key();
  Bytes inner(key.bytes.begin(), key.bytes.end());
  inner.insert(inner.end(), request.begin(), request.end());
  const Bytes wrapped = crypto_.seal(k, inner);
  trace_.send(session, i, j, MsgType::encrypted_request, crypto_.open(j, wrapped).has_value());

  const Bytes request_sig = crypto_.sign(j, wrapped);
  const auto opened = crypto_.open(k, wrapped);
  trace_.send(session, j, k, MsgType::encrypted_request, opened.has_value());
  if (!opened || opened->size() < key.bytes.size() || !crypto_.verify(j, wrapped, request_sig)) {
    trace_.send(session, k, j, MsgType::violation, true);
    trace_.note_abort(session);
    return result;
  }
  SessionKey supplier_key;
  std::copy_n(opened->begin(), supplier_key.bytes.size(), supplier_key.bytes.begin());
  const Bytes plain_request(opened->begin() + static_cast<std::ptrdiff_t>(supplier_key.bytes.size()), opened->end());

  const Bytes ciphertext = crypto_.encrypt(supplier_key, serve(plain_request));
  // The proxy holds only its own identity keys; see whether they help it.
  result.proxy_could_read = crypto_.open(j, ciphertext).has_value();
  trace_.send(session, k, j, MsgType::data, result.proxy_could_read);
  trace_.note_proxy_read(session, result.proxy_could_read);

  const Bytes relay_sig = crypto_.sign(j, ciphertext);
  Bytes relayed = ciphertext;
  if (tamper_relay && !relayed.empty()) relayed.back() ^= 0x01;
  if (!crypto_.verify(j, relayed, relay_sig)) {
    trace_.send(session, j, i, MsgType::data, false);
    trace_.send(session, i, j, MsgType::violation, true);
    trace_.note_abort(session);
    return result;
  }
  const auto plaintext = crypto_.decrypt(key, relayed);
  trace_.send(session, j, i, MsgType::data, plaintext.has_value());
  if (!plaintext) {
    trace_.note_abort(session);
    return result;
  }
  result.completed = true;
  result.plaintext = *plaintext;
  return result;
}

}  // namespace trustnet::privacy
