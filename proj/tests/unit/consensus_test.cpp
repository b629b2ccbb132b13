#include <gtest/gtest.h>

#include <algorithm>

#include "oracle.hpp"
#include "por/consensus.hpp"
#include "por/error.hpp"
#include "por/sha256.hpp"

using oracle::big;
using por::Contribution;
using por::Hash256;
using por::NodeId;
using por::RoundConfig;
using por::RoundMode;
using por::Score;
using por::SelectionRule;

namespace {

const big kMod = big(1) << 256;

template <typename F>
por::ErrorCode error_of(F&& f) {
  try {
    f();
  } catch (const por::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return por::ErrorCode::InvalidArgument;
}

por::RandomBlob blob_of(std::string_view s) { return por::RandomBlob{por::to_bytes(s), 0}; }

struct Network {
  const por::Curve& curve = por::Curve::test64();
  std::vector<por::KeyPair> keys;
  por::KeyDirectory dir;
  por::EntropySource nonces = por::EntropySource::seeded(71);

  explicit Network(std::size_t n, std::uint64_t seed = 70) {
    auto src = por::EntropySource::seeded(seed);
    for (std::size_t i = 0; i < n; ++i) {
      keys.push_back(por::keygen(curve, src));
      dir.keys[NodeId{i}] = keys.back().K;
    }
  }

  Contribution contribute(std::uint64_t node, std::uint64_t round, const por::RandomBlob& blob, std::uint64_t t1,
                          std::uint64_t t2) {
    return por::make_contribution(curve, NodeId{node}, round, blob, t1, t2, keys[node], nonces);
  }
};

big hash_of_sum(const big& v) { return oracle::big_from_bytes(oracle::openssl_sha256(oracle::be32(v % kMod))); }
big absdiff(const big& a, const big& b) { return a > b ? a - b : b - a; }

TEST(Contribution, FirstHashAndClock) {
  Network net(1);
  auto c = net.contribute(0, 1, blob_of("abc"), 100, 250);
  EXPECT_EQ(c.first_hash.to_hex(), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_TRUE(por::verify(net.curve, net.keys[0].K, c.canonical_encoding(), c.signature));
  auto again = net.contribute(0, 1, blob_of("abc"), 100, 250);
  EXPECT_EQ(again.first_hash, c.first_hash);
  EXPECT_EQ(error_of([&] { net.contribute(0, 1, blob_of("abc"), 100, 100); }),
            por::ErrorCode::ClockInvariantViolated);
}

TEST(Contribution, CanonicalEncodingLayout) {
  Contribution c;
  c.node = NodeId{0x0102};
  c.round = 7;
  c.first_hash = Hash256(0xAB);
  c.t1 = 1;
  c.t2 = 0x0100;
  auto enc = c.canonical_encoding();
  ASSERT_EQ(enc.size(), Contribution::kEncodedSize);
  por::Bytes expected(Contribution::kEncodedSize, 0);
  expected[6] = 0x01;
  expected[7] = 0x02;
  expected[15] = 7;
  expected[47] = 0xAB;
  expected[55] = 1;
  expected[62] = 0x01;
  EXPECT_EQ(enc, expected);
}

TEST(SecondHash, Examples) {
  Contribution a, b;
  a.node = NodeId{1};
  b.node = NodeId{2};
  a.first_hash = Hash256(1);
  b.first_hash = Hash256(2);
  std::vector<Contribution> one{a};
  EXPECT_EQ(oracle::to_big(por::second_hash(one)), hash_of_sum(1));
  std::vector<Contribution> two{a, b}, rev{b, a};
  EXPECT_EQ(oracle::to_big(por::second_hash(two)), hash_of_sum(3));
  EXPECT_EQ(por::second_hash(two), por::second_hash(rev));

  std::vector<Contribution> none;
  EXPECT_EQ(error_of([&] { por::second_hash(none); }), por::ErrorCode::EmptyRound);
  std::vector<Contribution> dup{a, a};
  EXPECT_EQ(error_of([&] { por::second_hash(dup); }), por::ErrorCode::DuplicateNode);
  b.round = 9;
  std::vector<Contribution> mixed{a, b};
  EXPECT_EQ(error_of([&] { por::second_hash(mixed); }), por::ErrorCode::MixedRounds);
}

TEST(Scores, SmallAndLargeExamples) {
  Contribution c;
  c.first_hash = Hash256(3);
  EXPECT_EQ(por::score_small(Hash256(10), c), Hash256(7));
  EXPECT_EQ(por::score_small(Hash256(3), c), Hash256());

  std::mt19937_64 rng(72);
  Hash256 prev = oracle::random_uint<4>(rng);
  c.first_hash = Hash256();
  EXPECT_EQ(oracle::to_big(por::derive_large(c, prev)), hash_of_sum(oracle::to_big(prev)));

  c.first_hash = Hash256(1);
  EXPECT_EQ(oracle::to_big(por::derive_large(c, Hash256(2))), hash_of_sum(3));
  EXPECT_EQ(oracle::to_big(por::score_large(c, Hash256(2))), absdiff(hash_of_sum(3), 1));
  EXPECT_EQ(por::score_large(c, Hash256(2)), por::score_large(c, Hash256(2)));

  Hash256 h = oracle::random_uint<4>(rng);
  Contribution x, y;
  x.first_hash = h;
  y.first_hash = prev;
  EXPECT_EQ(por::derive_large(x, prev), por::derive_large(y, h));
}

TEST(Scores, TimeWeighted) {
  Contribution c;
  c.t1 = 10;
  c.t2 = 12;
  EXPECT_EQ(por::time_weighted_score(Hash256(6), c), Score(12));
  EXPECT_EQ(por::time_weighted_score(Hash256(), c), Score());
  c.t2 = 14;
  EXPECT_EQ(oracle::to_big(por::time_weighted_score(Hash256(1) << 255, c)), big(1) << 257);
  c.t2 = 10;
  EXPECT_EQ(error_of([&] { por::time_weighted_score(Hash256(1), c); }), por::ErrorCode::ClockInvariantViolated);
}

TEST(Validate, Reasons) {
  Network net(2);
  RoundConfig weighted{RoundMode::TimeWeighted, SelectionRule::Min, 100};
  auto at_floor = net.contribute(0, 5, blob_of("x"), 1000, 1100);
  EXPECT_EQ(por::validate_contribution(at_floor, net.curve, &net.keys[0].K, weighted, 5), std::nullopt);
  auto below = net.contribute(0, 5, blob_of("x"), 1000, 1099);
  EXPECT_EQ(por::validate_contribution(below, net.curve, &net.keys[0].K, weighted, 5),
            por::Rejection::DeltaBelowFloor);
  RoundConfig large{RoundMode::LargePrevhash, SelectionRule::Min, 100};
  EXPECT_EQ(por::validate_contribution(below, net.curve, &net.keys[0].K, large, 5), std::nullopt);

  auto flipped = at_floor;
  flipped.signature.response = flipped.signature.response ^ Hash256(1);
  EXPECT_EQ(por::validate_contribution(flipped, net.curve, &net.keys[0].K, weighted, 5), por::Rejection::BadSignature);
  auto edited = at_floor;
  edited.t2 += 1;
  EXPECT_EQ(por::validate_contribution(edited, net.curve, &net.keys[0].K, weighted, 5), por::Rejection::BadSignature);
  EXPECT_EQ(por::validate_contribution(at_floor, net.curve, &net.keys[1].K, weighted, 5), por::Rejection::BadSignature);
  EXPECT_EQ(por::validate_contribution(at_floor, net.curve, nullptr, weighted, 5), por::Rejection::UnknownNode);
  EXPECT_EQ(por::validate_contribution(at_floor, net.curve, &net.keys[0].K, weighted, 6), por::Rejection::WrongRound);
}

TEST(Validate, FloorMonotonicity) {
  Network net(1);
  std::mt19937_64 rng(73);
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t dt = 1 + rng() % 300;
    auto c = net.contribute(0, 1, blob_of("f"), 1000, 1000 + dt);
    bool prev_ok = true;
    for (std::uint64_t floor = 0; floor < 400; floor += 7) {
      RoundConfig cfg{RoundMode::TimeWeighted, SelectionRule::Min, floor};
      bool ok = !por::validate_contribution(c, net.curve, &net.keys[0].K, cfg, 1).has_value();
      EXPECT_FALSE(ok && !prev_ok);
      EXPECT_EQ(ok, dt >= floor);
      prev_ok = ok;
    }
  }
}

TEST(SelectWinner, Examples) {
  using Entry = std::pair<NodeId, Score>;
  std::vector<Entry> s{{NodeId{1}, Score(5)}, {NodeId{2}, Score(3)}, {NodeId{3}, Score(9)}};
  EXPECT_EQ(por::select_winner(s, SelectionRule::Min), NodeId{2});
  EXPECT_EQ(por::select_winner(s, SelectionRule::Max), NodeId{3});
  std::vector<Entry> tie{{NodeId{7}, Score(4)}, {NodeId{2}, Score(4)}};
  EXPECT_EQ(por::select_winner(tie, SelectionRule::Min), NodeId{2});
  EXPECT_EQ(por::select_winner(tie, SelectionRule::Max), NodeId{2});
  std::vector<Entry> none;
  EXPECT_EQ(error_of([&] { por::select_winner(none, SelectionRule::Min); }), por::ErrorCode::EmptyRound);
}

TEST(Reveal, Binding) {
  Network net(1);
  auto blob = blob_of("reveal me");
  auto c = net.contribute(0, 1, blob, 1, 200);
  EXPECT_TRUE(por::verify_reveal(c, blob));
  for (std::size_t i = 0; i < blob.bytes.size(); ++i) {
    auto bad = blob;
    bad.bytes[i] ^= 0x80;
    EXPECT_FALSE(por::verify_reveal(c, bad));
  }
  Contribution empty;
  empty.first_hash = por::sha256("");
  EXPECT_TRUE(por::verify_reveal(empty, por::Bytes{}));
}

// Straight-line reference for one round over honest, valid contributions.
NodeId oracle_winner(const std::vector<Contribution>& cs, const Hash256& prevhash, RoundMode mode,
                     SelectionRule rule) {
  big hs = 0;
  if (mode == RoundMode::SmallSync) {
    big sum = 0;
    for (const auto& c : cs) sum += oracle::to_big(c.first_hash);
    hs = hash_of_sum(sum);
  }
  std::optional<std::pair<big, std::uint64_t>> best;
  for (const auto& c : cs) {
    big h = oracle::to_big(c.first_hash);
    big d = mode == RoundMode::SmallSync ? absdiff(hs, h) : absdiff(hash_of_sum(h + oracle::to_big(prevhash)), h);
    if (mode == RoundMode::TimeWeighted) d *= (c.t2 - c.t1);
    std::pair<big, std::uint64_t> key{rule == SelectionRule::Min ? d : -d, c.node.value};
    if (!best || key < *best) best = key;
  }
  return NodeId{best->second};
}

TEST(RunRound, FourNodeFixtureMatchesOracle) {
  Network net(4);
  std::vector<Contribution> cs;
  const char* blobs[] = {"a", "b", "c", "d"};
  for (std::uint64_t i = 0; i < 4; ++i) cs.push_back(net.contribute(i, 1, blob_of(blobs[i]), 0, 100 + 37 * i));
  const Hash256 prev = por::sha256("genesis");
  for (auto mode : {RoundMode::SmallSync, RoundMode::LargePrevhash, RoundMode::TimeWeighted}) {
    for (auto rule : {SelectionRule::Min, SelectionRule::Max}) {
      RoundConfig cfg{mode, rule, 100};
      auto r = por::run_round(1, cs, prev, cfg, net.dir);
      EXPECT_EQ(r.winner, oracle_winner(cs, prev, mode, rule)) << por::to_string(mode) << por::to_string(rule);
      EXPECT_EQ(r.second_hash.has_value(), mode == RoundMode::SmallSync);
      EXPECT_EQ(r.accepted.size(), 4u);
      EXPECT_TRUE(r.rejected.empty());
    }
  }
}

TEST(RunRound, SingletonWinsEveryMode) {
  Network net(3);
  std::vector<Contribution> cs{net.contribute(2, 4, blob_of("solo"), 0, 500)};
  for (auto mode : {RoundMode::SmallSync, RoundMode::LargePrevhash, RoundMode::TimeWeighted}) {
    auto r = por::run_round(4, cs, Hash256(9), RoundConfig{mode, SelectionRule::Min, 100}, net.dir);
    EXPECT_EQ(r.winner, NodeId{2});
  }
}

TEST(RunRound, PropertiesOverRandomRounds) {
  Network net(12);
  std::mt19937_64 rng(74);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<Contribution> cs;
    for (std::uint64_t i = 0; i < 12; ++i) {
      if (rng() % 4 == 0) continue;
      por::RandomBlob blob{por::Bytes(8), 0};
      for (auto& b : blob.bytes) b = static_cast<std::uint8_t>(rng());
      const std::uint64_t t1 = 1000, t2 = t1 + 60 + rng() % 200;
      cs.push_back(net.contribute(i, 3, blob, t1, t2));
    }
    if (cs.empty()) continue;
    const Hash256 prev = oracle::random_uint<4>(rng);
    for (auto mode : {RoundMode::SmallSync, RoundMode::LargePrevhash, RoundMode::TimeWeighted}) {
      for (auto rule : {SelectionRule::Min, SelectionRule::Max}) {
        RoundConfig cfg{mode, rule, 100};
        std::optional<por::RoundResult> base;
        try {
          base = por::run_round(3, cs, prev, cfg, net.dir);
        } catch (const por::Error& e) {
          ASSERT_EQ(e.code(), por::ErrorCode::NoValidContributions);
          continue;
        }
        // Order invariance.
        auto shuffled = cs;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        EXPECT_EQ(por::run_round(3, shuffled, prev, cfg, net.dir), *base);
        // Extremality.
        const Score* w = nullptr;
        for (const auto& ns : base->per_node)
          if (ns.node == base->winner) w = &ns.score;
        ASSERT_NE(w, nullptr);
        for (const auto& ns : base->per_node) {
          if (rule == SelectionRule::Min) EXPECT_LE(*w, ns.score);
          else EXPECT_GE(*w, ns.score);
          if (ns.score == *w) EXPECT_LE(base->winner, ns.node);
        }
        // Mode consistency: prevhash is irrelevant in SmallSync.
        if (mode == RoundMode::SmallSync) {
          EXPECT_EQ(por::run_round(3, cs, Hash256(), cfg, net.dir).per_node, base->per_node);
        }
        if (mode == RoundMode::TimeWeighted) {
          for (const auto& r : base->rejected) EXPECT_EQ(r.second, por::Rejection::DeltaBelowFloor);
        }
      }
    }
  }
}

TEST(RunRound, FiltersInvalidAndDuplicates) {
  Network net(4);
  std::vector<Contribution> cs;
  cs.push_back(net.contribute(0, 2, blob_of("ok"), 0, 200));
  cs.push_back(net.contribute(1, 2, blob_of("dup1"), 0, 200));
  cs.push_back(net.contribute(1, 2, blob_of("dup2"), 0, 200));
  cs.push_back(net.contribute(2, 1, blob_of("stale"), 0, 200));
  auto forged = net.contribute(3, 2, blob_of("forged"), 0, 200);
  forged.first_hash = por::sha256("other");
  cs.push_back(forged);
  Contribution stranger = net.contribute(0, 2, blob_of("s"), 0, 200);
  stranger.node = NodeId{99};
  cs.push_back(stranger);

  auto r = por::run_round(2, cs, Hash256(), RoundConfig{}, net.dir);
  EXPECT_EQ(r.winner, NodeId{0});
  ASSERT_EQ(r.accepted.size(), 1u);
  std::map<std::uint64_t, por::Rejection> rej;
  for (auto [n, why] : r.rejected) rej[n.value] = why;
  EXPECT_EQ(rej.at(1), por::Rejection::DuplicateNode);
  EXPECT_EQ(rej.at(2), por::Rejection::WrongRound);
  EXPECT_EQ(rej.at(3), por::Rejection::BadSignature);
  EXPECT_EQ(rej.at(99), por::Rejection::UnknownNode);
  EXPECT_EQ(r.contribution_of(NodeId{0}), &r.accepted[0]);
  EXPECT_EQ(r.contribution_of(NodeId{1}), nullptr);

  std::vector<Contribution> bad{cs[3]};
  EXPECT_EQ(error_of([&] { por::run_round(2, bad, Hash256(), RoundConfig{}, net.dir); }),
            por::ErrorCode::NoValidContributions);
}

TEST(Names, ParseAndPrint) {
  for (auto mode : {RoundMode::SmallSync, RoundMode::LargePrevhash, RoundMode::TimeWeighted})
    EXPECT_EQ(por::parse_round_mode(por::to_string(mode)), mode);
  EXPECT_EQ(por::parse_round_mode("weighted"), RoundMode::TimeWeighted);
  EXPECT_EQ(por::parse_selection_rule("max"), SelectionRule::Max);
  EXPECT_THROW(por::parse_round_mode("fast"), por::Error);
  EXPECT_THROW(por::parse_selection_rule("median"), por::Error);
}

}  // namespace
