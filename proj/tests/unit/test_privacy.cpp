#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "fixtures.hpp"
#include "trustnet/adaptation.hpp"
#include "trustnet/privacy/bloom_filter.hpp"
#include "trustnet/privacy/crypto.hpp"
#include "trustnet/privacy/protocols.hpp"
#include "trustnet/search.hpp"

using namespace trustnet;
using namespace trustnet::privacy;
using namespace trustnet::testing;

namespace {

Bytes key_bytes(std::uint64_t v) {
  Bytes b(8);
  for (int i = 0; i < 8; ++i) b[i] = static_cast<std::uint8_t>(v >> (8 * i));
  return b;
}

}  // namespace

TEST(Bloom, NoFalseNegatives) {
  BloomFilter f(1024, 7);
  EXPECT_FALSE(f.may_contain(key_bytes(42)));
  for (std::uint64_t v = 0; v < 1000; ++v) {
    f.insert(key_bytes(v));
    for (std::uint64_t w = 0; w <= v; ++w) ASSERT_TRUE(f.may_contain(key_bytes(w))) << v << " " << w;
  }
  EXPECT_EQ(f.inserted(), 1000u);
}

TEST(Bloom, FalsePositiveRateMatchesFormula) {
  const double expected = std::pow(1.0 - std::exp(-700.0 / 1024.0), 7.0);
  EXPECT_NEAR(BloomFilter::expected_fpr(1024, 7, 100), expected, 1e-15);
  std::size_t hits = 0, probes = 0;
  for (std::uint64_t trial = 0; trial < 10; ++trial) {
    BloomFilter f(1024, 7);
    for (std::uint64_t v = 0; v < 100; ++v) f.insert(key_bytes(trial << 40 | v));
    for (std::uint64_t p = 0; p < 10000; ++p, ++probes) hits += f.may_contain(key_bytes(1ull << 63 | trial << 40 | p));
  }
  const double fpr = static_cast<double>(hits) / static_cast<double>(probes);
  EXPECT_GT(fpr, 0.5 * expected);
  EXPECT_LT(fpr, 1.5 * expected);
}

TEST(Crypto, SealSignEncryptRoundTrips) {
  SodiumCrypto c(3);
  const Bytes msg = to_bytes("hello");
  const Bytes sealed = c.seal(P(2), msg);
  EXPECT_EQ(c.open(P(2), sealed), msg);
  EXPECT_FALSE(c.open(P(3), sealed).has_value());
  const Bytes sig = c.sign(P(1), msg);
  EXPECT_TRUE(c.verify(P(1), msg, sig));
  EXPECT_FALSE(c.verify(P(2), msg, sig));
  Bytes bad = msg;
  bad[0] ^= 1;
  EXPECT_FALSE(c.verify(P(1), bad, sig));
  const SessionKey k = c.new_session_key();
  const Bytes ct = c.encrypt(k, msg);
  EXPECT_EQ(c.decrypt(k, ct), msg);
  EXPECT_FALSE(c.decrypt(c.new_session_key(), ct).has_value());
  EXPECT_EQ(c.hash(msg), SodiumCrypto(99).hash(msg));
  EXPECT_EQ(c.public_key(P(5)), SodiumCrypto(3).public_key(P(5)));
}

TEST(Privacy, HandlePrefixes) {
  SodiumCrypto c(1);
  const Digest d = c.hash(handle_bytes(FileId{3, 7}));
  EXPECT_THROW(make_handle_request(d, 0), std::exception);
  EXPECT_THROW(make_handle_request(d, 256), std::exception);
  for (unsigned bits : {1u, 4u, 8u, 13u, 16u, 255u}) {
    const auto req = make_handle_request(d, bits);
    EXPECT_TRUE(prefix_matches(d, req));
    Digest flipped = d;
    flipped[(bits - 1) / 8] ^= static_cast<std::uint8_t>(1u << (7 - (bits - 1) % 8));
    EXPECT_FALSE(prefix_matches(flipped, req));
    const Digest s = handle_suffix(d, bits);
    for (unsigned b = 0; b < 256; ++b) {
      const bool bit = s[b / 8] >> (7 - b % 8) & 1;
      const bool orig = d[b / 8] >> (7 - b % 8) & 1;
      EXPECT_EQ(bit, b < bits ? false : orig);
    }
  }
}

namespace {

// Star around proxy 0; requester 1 hangs off peer 2 and reaches 0 over a
// community edge. Peers 2..n-1
// hold `per_peer` distinct files of category 1; holders also get 1:1000.
struct PrivacyBed {
  PrivacyBed(std::size_t n, std::size_t per_peer, std::initializer_list<int> holders, PrivacyMode mode,
             unsigned bits = 16, std::initializer_list<int> malicious = {})
      : net(make(n, per_peer, holders, malicious)),
        engine(net, SearchParams{5, 10, 200}),
        adaptation(net, AdaptationParams{}),
        crypto(11),
        protocols(net, engine, adaptation, crypto, trace, PrivacyParams{mode, bits, 1024, 7}) {}

  static Network make(std::size_t n, std::size_t per_peer, std::initializer_list<int> holders,
                      std::initializer_list<int> malicious) {
    std::vector<std::pair<PeerId, PeerId>> edges;
    for (std::uint32_t p = 2; p < n; ++p) edges.emplace_back(P(0), P(p));
    edges.emplace_back(P(1), P(2));
    OverlayGraph g(n, edges, 3.0);
    EXPECT_TRUE(g.add_community_edge(P(1), P(0)));
    auto libs = libraries(n);
    std::uint16_t rank = 1;
    for (std::size_t p = 2; p < n; ++p) {
      libs[p].files.clear();
      for (std::size_t f = 0; f < per_peer; ++f) libs[p].files.push_back(FileId{1, rank++});
    }
    for (int h : holders) libs[h].files.push_back(FileId{1, 1000});
    for (auto& l : libs) std::sort(l.files.begin(), l.files.end());
    std::vector<PeerDisposition> disp(n);
    for (int m : malicious) disp[m] = {PeerKind::malicious_a, 0.0, AttackPhase::accumulating};
    return Network(std::move(g), std::move(libs), std::move(disp));
  }

  Network net;
  SearchEngine engine;
  Adaptation adaptation;
  SodiumCrypto crypto;
  ProtocolTrace trace;
  PrivacyProtocols protocols;
};

const FileId kTarget{1, 1000};

}  // namespace

TEST(Privacy, ProxyHidesRequester) {
  PrivacyBed bed(30, 3, {5, 9}, PrivacyMode::proxy);
  Rng rng(1);
  const auto r = bed.protocols.search(P(1), kTarget, rng);
  ASSERT_TRUE(r.private_path);
  EXPECT_EQ(r.proxy, P(0));
  ASSERT_FALSE(r.attempts.empty());
  for (const auto& a : r.attempts) EXPECT_EQ(a.requester, P(0));
  EXPECT_TRUE(bed.trace.requester_anonymous(r.session));
  for (const auto& m : bed.trace.messages()) {
    if (m.from == P(1)) EXPECT_EQ(m.to, P(0));
    if (m.to == P(1)) EXPECT_EQ(m.from, P(0));
  }
}

TEST(Privacy, NoTrustedProxyFallsBack) {
  PrivacyBed bed(30, 3, {5}, PrivacyMode::proxy);
  know(bed.net, 1, 0, 0, 2);
  Rng rng(1);
  const auto r = bed.protocols.search(P(1), kTarget, rng);
  EXPECT_FALSE(r.private_path);
  EXPECT_FALSE(bed.trace.session(r.session).proxy.has_value());
  EXPECT_EQ(bed.trace.messages().front().type, MsgType::fallback);
}

TEST(Privacy, DistrustedProxyIsReplaced) {
  PrivacyBed bed(30, 3, {5}, PrivacyMode::proxy);
  ASSERT_TRUE(bed.net.graph.add_community_edge(P(1), P(7)));
  EXPECT_EQ(bed.protocols.pick_proxy(P(1)), P(0));
  know(bed.net, 1, 0, 0, 1);
  EXPECT_EQ(bed.protocols.pick_proxy(P(1)), P(7));
}

TEST(Privacy, HoldersSurvivePrefixElimination) {
  PrivacyBed bed(40, 30, {4, 11, 25}, PrivacyMode::handle, 4);
  Rng rng(2);
  const std::uint64_t s = bed.trace.begin(P(1), P(0), PrivacyMode::handle);
  const auto r = bed.protocols.partial_hash_lookup(s, P(1), P(0), kTarget, rng);
  const std::set<PeerId> cands(r.candidates.begin(), r.candidates.end());
  for (int h : {4, 11, 25}) EXPECT_TRUE(cands.count(P(h))) << h;
  EXPECT_EQ(r.prefix_matched, r.candidates.size() + r.filter_rejected);
}

TEST(Privacy, EliminationGrowsWithPrefixLength) {
  std::vector<std::size_t> matched;
  for (unsigned bits : {4u, 8u, 16u}) {
    PrivacyBed bed(120, 40, {4, 11}, PrivacyMode::handle, bits);
    Rng rng(3);
    const std::uint64_t s = bed.trace.begin(P(1), P(0), PrivacyMode::handle);
    const auto r = bed.protocols.partial_hash_lookup(s, P(1), P(0), kTarget, rng);
    EXPECT_GE(r.candidates.size(), 2u);
    matched.push_back(r.prefix_matched);
  }
  EXPECT_GT(matched[0], matched[1]);
  EXPECT_GE(matched[1], matched[2]);
}

TEST(Privacy, SecureTransferEndToEnd) {
  PrivacyBed bed(10, 3, {5}, PrivacyMode::full);
  const std::uint64_t s = bed.trace.begin(P(1), P(0), PrivacyMode::full);
  const Bytes served = file_content(kTarget, Outcome::authentic);
  const auto ok = bed.protocols.secure_transfer(s, P(1), P(0), P(5), handle_bytes(kTarget),
                                                [&](const Bytes& req) {
                                                  EXPECT_EQ(req, handle_bytes(kTarget));
                                                  return served;
                                                });
  EXPECT_TRUE(ok.completed);
  EXPECT_FALSE(ok.proxy_could_read);
  EXPECT_EQ(ok.plaintext, served);
  EXPECT_TRUE(bed.trace.proxy_blind(s));

  const std::uint64_t t = bed.trace.begin(P(1), P(0), PrivacyMode::full);
  const auto bad = bed.protocols.secure_transfer(t, P(1), P(0), P(5), handle_bytes(kTarget),
                                                 [&](const Bytes&) { return served; }, true);
  EXPECT_FALSE(bad.completed);
  EXPECT_TRUE(bed.trace.session(t).aborted);
  EXPECT_EQ(bed.trace.messages().back().type, MsgType::violation);
}

TEST(Privacy, FullModeSessionsPassAssertions) {
  PrivacyBed bed(60, 10, {4, 11, 30}, PrivacyMode::full, 8, {4});
  Rng rng(5);
  std::size_t authentic = 0;
  for (int q = 0; q < 20; ++q) {
    const auto r = bed.protocols.search(P(1), kTarget, rng);
    for (const auto& a : r.attempts) authentic += a.outcome == Outcome::authentic;
  }
  EXPECT_GT(authentic, 0u);
  for (const auto& [id, info] : bed.trace.sessions()) {
    EXPECT_TRUE(bed.trace.requester_anonymous(id));
    EXPECT_TRUE(bed.trace.proxy_blind(id));
  }
  std::ostringstream rows;
  bed.trace.write_rows(rows);
  EXPECT_NE(rows.str().find(",ENC_REQ,0"), std::string::npos);
}
