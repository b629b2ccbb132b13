#include "por/consensus.hpp"

#include <algorithm>

#include "por/error.hpp"
#include "por/macau.hpp"
#include "por/sha256.hpp"

namespace por {

std::string_view to_string(RoundMode mode) {
  switch (mode) {
    case RoundMode::SmallSync: return "small_sync";
    case RoundMode::LargePrevhash: return "large_prevhash";
    case RoundMode::TimeWeighted: return "time_weighted";
  }
  return "unknown";
}

std::string_view to_string(SelectionRule rule) { return rule == SelectionRule::Min ? "min" : "max"; }

RoundMode parse_round_mode(std::string_view text) {
  if (text == "small_sync" || text == "small") return RoundMode::SmallSync;
  if (text == "large_prevhash" || text == "large") return RoundMode::LargePrevhash;
  if (text == "time_weighted" || text == "weighted") return RoundMode::TimeWeighted;
  throw Error(ErrorCode::InvalidArgument, "unknown round mode '" + std::string(text) + "'");
}

SelectionRule parse_selection_rule(std::string_view text) {
  if (text == "min") return SelectionRule::Min;
  if (text == "max") return SelectionRule::Max;
  throw Error(ErrorCode::InvalidArgument, "unknown selection rule '" + std::string(text) + "'");
}

std::string_view to_string(Rejection reason) {
  switch (reason) {
    case Rejection::BadSignature: return "BadSignature";
    case Rejection::WrongRound: return "WrongRound";
    case Rejection::ClockInvariantViolated: return "ClockInvariantViolated";
    case Rejection::DeltaBelowFloor: return "DeltaBelowFloor";
    case Rejection::UnknownNode: return "UnknownNode";
    case Rejection::DuplicateNode: return "DuplicateNode";
  }
  return "Unknown";
}

Bytes Contribution::canonical_encoding() const {
  ByteWriter w;
  w.u64(node.value).u64(round).raw(first_hash.to_bytes()).u64(t1).u64(t2);
  return std::move(w).bytes();
}

const Contribution* RoundResult::contribution_of(NodeId node) const {
  auto it = std::lower_bound(accepted.begin(), accepted.end(), node,
                             [](const Contribution& c, NodeId id) { return c.node < id; });
  return (it != accepted.end() && it->node == node) ? &*it : nullptr;
}

Contribution make_contribution(const Curve& curve, NodeId node, std::uint64_t round, const RandomBlob& blob,
                               std::uint64_t t1, std::uint64_t t2, const KeyPair& keys, EntropySource& nonce_source) {
  if (t2 <= t1) {
    throw Error(ErrorCode::ClockInvariantViolated,
                "t2 (" + std::to_string(t2) + ") must exceed t1 (" + std::to_string(t1) + ")");
  }
  Contribution c{node, round, sha256(blob.bytes), t1, t2, {}};
  c.signature = sign(curve, keys, c.canonical_encoding(), nonce_source);
  return c;
}

Hash256 second_hash(std::span<const Contribution> contributions) {
  if (contributions.empty()) throw Error(ErrorCode::EmptyRound, "no contributions to aggregate");
  std::vector<NodeId> seen;
  std::vector<Hash256> firsts;
  seen.reserve(contributions.size());
  firsts.reserve(contributions.size());
  for (const auto& c : contributions) {
    if (c.round != contributions.front().round) throw Error(ErrorCode::MixedRounds, "contributions span rounds");
    seen.push_back(c.node);
    firsts.push_back(c.first_hash);
  }
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
    throw Error(ErrorCode::DuplicateNode, "a node contributed twice");
  }
  return macau_aggregate(firsts, MacauCombiner::Sum, rehash);
}

Hash256 score_small(const Hash256& hs, const Contribution& c) { return abs_diff(hs, c.first_hash); }

Hash256 derive_large(const Contribution& c, const Hash256& prevhash) { return rehash(add_mod(c.first_hash, prevhash)); }

Hash256 score_large(const Contribution& c, const Hash256& prevhash) {
  return abs_diff(derive_large(c, prevhash), c.first_hash);
}

Score time_weighted_score(const Hash256& d, const Contribution& c) {
  if (c.t2 <= c.t1) throw Error(ErrorCode::ClockInvariantViolated, "time-weighted score needs t2 > t1");
  return mul_wide(d, UInt<1>(c.t2 - c.t1));
}

std::optional<Rejection> validate_contribution(const Contribution& c, const Curve& curve, const Point* public_key,
                                               const RoundConfig& cfg, std::uint64_t round) {
  if (c.round != round) return Rejection::WrongRound;
  if (public_key == nullptr) return Rejection::UnknownNode;
  if (!verify(curve, *public_key, c.canonical_encoding(), c.signature)) return Rejection::BadSignature;
  if (c.t2 <= c.t1) return Rejection::ClockInvariantViolated;
  if (cfg.mode == RoundMode::TimeWeighted && c.t2 - c.t1 < cfg.min_dt_ms) return Rejection::DeltaBelowFloor;
  return std::nullopt;
}

NodeId select_winner(std::span<const std::pair<NodeId, Score>> scored, SelectionRule rule) {
  if (scored.empty()) throw Error(ErrorCode::EmptyRound, "no scores to select from");
  const std::pair<NodeId, Score>* best = &scored.front();
  for (const auto& entry : scored.subspan(1)) {
    auto cmp = entry.second <=> best->second;
    bool better = rule == SelectionRule::Min ? cmp < 0 : cmp > 0;
    if (better || (cmp == 0 && entry.first < best->first)) best = &entry;
  }
  return best->first;
}

bool verify_reveal(const Contribution& c, std::span<const std::uint8_t> blob) { return sha256(blob) == c.first_hash; }

bool verify_reveal(const Contribution& c, const RandomBlob& blob) { return verify_reveal(c, std::span(blob.bytes)); }

RoundResult run_round(std::uint64_t round, std::span<const Contribution> contributions, const Hash256& prevhash,
                      const RoundConfig& cfg, const KeyDirectory& keys) {
  RoundResult result;
  result.round = round;

  std::vector<const Contribution*> sorted;
  sorted.reserve(contributions.size());
  for (const auto& c : contributions) sorted.push_back(&c);
  std::sort(sorted.begin(), sorted.end(), [](const Contribution* a, const Contribution* b) { return a->node < b->node; });

  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j]->node == sorted[i]->node) ++j;
    const Contribution& c = *sorted[i];
    if (j - i > 1) {
      // Equivocation: every submission from that node is dropped.
      result.rejected.emplace_back(c.node, Rejection::DuplicateNode);
    } else if (auto reason = validate_contribution(c, *keys.curve, keys.find(c.node), cfg, round)) {
      result.rejected.emplace_back(c.node, *reason);
    } else {
      result.accepted.push_back(c);
    }
    i = j;
  }
  if (result.accepted.empty()) {
    throw Error(ErrorCode::NoValidContributions, "round " + std::to_string(round) + " has no valid contributions");
  }

  std::optional<Hash256> hs;
  if (cfg.mode == RoundMode::SmallSync) hs = second_hash(result.accepted);

  std::vector<std::pair<NodeId, Score>> scored;
  scored.reserve(result.accepted.size());
  for (const auto& c : result.accepted) {
    Hash256 d;
    Score s;
    switch (cfg.mode) {
      case RoundMode::SmallSync:
        d = score_small(*hs, c);
        s = d.resize<5>();
        break;
      case RoundMode::LargePrevhash:
        d = score_large(c, prevhash);
        s = d.resize<5>();
        break;
      case RoundMode::TimeWeighted:
        d = score_large(c, prevhash);
        s = time_weighted_score(d, c);
        break;
    }
    result.per_node.push_back(NodeScore{c.node, d, s});
    scored.emplace_back(c.node, s);
  }
  result.second_hash = hs;
  result.winner = select_winner(scored, cfg.rule);
  return result;
}

}  // namespace por
