#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "por/curve.hpp"
#include "por/ecc.hpp"
#include "por/randomness.hpp"
#include "por/uint.hpp"

namespace por {

struct NodeId {
  std::uint64_t value = 0;

  friend constexpr auto operator<=>(const NodeId&, const NodeId&) = default;
};

enum class RoundMode : std::uint8_t {
  SmallSync = 0,      // D = |HS - H_n|, HS = sha256(Σ H_n)
  LargePrevhash = 1,  // D = |H'_n - H_n|, H'_n = sha256(H_n + prevhash)
  TimeWeighted = 2,   // LargePrevhash D multiplied by Δt = t2 - t1
};

enum class SelectionRule : std::uint8_t { Min, Max };

std::string_view to_string(RoundMode mode);
std::string_view to_string(SelectionRule rule);
/// Accepts the canonical names and the CLI aliases "small", "large", "weighted".
RoundMode parse_round_mode(std::string_view text);
SelectionRule parse_selection_rule(std::string_view text);

struct RoundConfig {
  RoundMode mode = RoundMode::LargePrevhash;
  SelectionRule rule = SelectionRule::Min;
  std::uint64_t min_dt_ms = 100;

  friend bool operator==(const RoundConfig&, const RoundConfig&) = default;
};

/// D·Δt fits in 256 + 64 bits.
using Score = UInt320;

/// One node's signed per-round broadcast.
struct Contribution {
  NodeId node;
  std::uint64_t round = 0;
  Hash256 first_hash;
  std::uint64_t t1 = 0;
  std::uint64_t t2 = 0;
  Signature signature;

  static constexpr std::size_t kEncodedSize = 8 + 8 + 32 + 8 + 8;

  /// node ‖ round ‖ first_hash ‖ t1 ‖ t2, integers 8-byte big-endian. This is
  /// the signature preimage.
  Bytes canonical_encoding() const;

  friend bool operator==(const Contribution&, const Contribution&) = default;
};

/// Public keys of the network, all on one curve.
struct KeyDirectory {
  const Curve* curve = &Curve::test64();
  std::map<NodeId, Point> keys;

  const Point* find(NodeId node) const {
    auto it = keys.find(node);
    return it == keys.end() ? nullptr : &it->second;
  }
};

enum class Rejection : std::uint8_t {
  BadSignature,
  WrongRound,
  ClockInvariantViolated,
  DeltaBelowFloor,
  UnknownNode,
  DuplicateNode,
};

std::string_view to_string(Rejection reason);

struct NodeScore {
  NodeId node;
  Hash256 distance;
  Score score;

  friend bool operator==(const NodeScore&, const NodeScore&) = default;
};

struct RoundResult {
  std::uint64_t round = 0;
  NodeId winner;
  std::vector<NodeScore> per_node;               // ascending NodeId
  std::optional<Hash256> second_hash;            // SmallSync only
  std::vector<Contribution> accepted;            // ascending NodeId
  std::vector<std::pair<NodeId, Rejection>> rejected;

  const Contribution* contribution_of(NodeId node) const;

  friend bool operator==(const RoundResult&, const RoundResult&) = default;
};

Contribution make_contribution(const Curve& curve, NodeId node, std::uint64_t round, const RandomBlob& blob,
                               std::uint64_t t1, std::uint64_t t2, const KeyPair& keys, EntropySource& nonce_source);

/// HS = sha256(Σ first_hash mod 2^256). Throws EmptyRound, DuplicateNode or MixedRounds.
Hash256 second_hash(std::span<const Contribution> contributions);

Hash256 score_small(const Hash256& hs, const Contribution& c);
/// H'_n = sha256(first_hash + prevhash mod 2^256).
Hash256 derive_large(const Contribution& c, const Hash256& prevhash);
Hash256 score_large(const Contribution& c, const Hash256& prevhash);
/// d · (t2 - t1), exact. Throws ClockInvariantViolated when t2 <= t1.
Score time_weighted_score(const Hash256& d, const Contribution& c);

/// std::nullopt means accepted.
std::optional<Rejection> validate_contribution(const Contribution& c, const Curve& curve, const Point* public_key,
                                               const RoundConfig& cfg, std::uint64_t round);

/// Extremal score under `rule`; ties go to the smallest NodeId. Throws EmptyRound.
NodeId select_winner(std::span<const std::pair<NodeId, Score>> scored, SelectionRule rule);

bool verify_reveal(const Contribution& c, const RandomBlob& blob);
bool verify_reveal(const Contribution& c, std::span<const std::uint8_t> blob);

/// Filters invalid and duplicate contributions, scores the rest per
/// `cfg.mode` and picks the winner. Independent of input order. Throws
/// NoValidContributions.
RoundResult run_round(std::uint64_t round, std::span<const Contribution> contributions, const Hash256& prevhash,
                      const RoundConfig& cfg, const KeyDirectory& keys);

}  // namespace por
