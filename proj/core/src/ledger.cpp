#include "por/ledger.hpp"

#include <algorithm>

#include "por/error.hpp"
#include "por/sha256.hpp"

namespace por {
namespace {

constexpr std::string_view kGenesisTag = "por-genesis-v1";

void append_signature(ByteWriter& w, const Signature& sig) {
  w.raw(sig.challenge.to_bytes()).raw(sig.response.to_bytes());
}

}  // namespace

std::string_view to_string(BlockRejection reason) {
  switch (reason) {
    case BlockRejection::BadHeight: return "BadHeight";
    case BlockRejection::BadPrevHash: return "BadPrevHash";
    case BlockRejection::BadSignature: return "BadSignature";
    case BlockRejection::RevealMismatch: return "RevealMismatch";
    case BlockRejection::InvalidContribution: return "InvalidContribution";
    case BlockRejection::WrongWinner: return "WrongWinner";
    case BlockRejection::BadBlockHash: return "BadBlockHash";
    case BlockRejection::BadGenesis: return "BadGenesis";
    case BlockRejection::MissingGenesis: return "MissingGenesis";
  }
  return "Unknown";
}

Bytes canonical_block_bytes(const Block& b) {
  ByteWriter w;
  w.u64(b.height).u64(b.timestamp_ms).raw(b.prevhash.to_bytes()).u64(b.owner.value);
  w.u8(static_cast<std::uint8_t>(b.mode));
  w.blob(b.owner_blob);
  w.u64(b.contributions.size());
  for (const auto& c : b.contributions) {
    w.raw(c.canonical_encoding());
    append_signature(w, c.signature);
  }
  w.u64(b.transactions.size());
  for (const auto& tx : b.transactions) w.blob(tx);
  return std::move(w).bytes();
}

Hash256 block_hash(const Block& b) { return sha256(canonical_block_bytes(b)); }

Bytes encode_chain_params(const ChainParams& params) {
  ByteWriter w;
  w.raw(to_bytes(kGenesisTag));
  w.blob(to_bytes(params.network_id));
  w.u8(static_cast<std::uint8_t>(params.round.mode));
  w.u8(static_cast<std::uint8_t>(params.round.rule));
  w.u64(params.round.min_dt_ms);
  return std::move(w).bytes();
}

ChainParams decode_chain_params(std::span<const std::uint8_t> payload) {
  auto fail = [] { return Error(ErrorCode::ParseFailure, "genesis payload is malformed"); };
  std::size_t pos = 0;
  auto take = [&](std::size_t n) {
    if (payload.size() - pos < n) throw fail();
    auto s = payload.subspan(pos, n);
    pos += n;
    return s;
  };
  auto take_u64 = [&] {
    std::uint64_t v = 0;
    for (auto b : take(8)) v = (v << 8) | b;
    return v;
  };
  auto tag = take(kGenesisTag.size());
  if (!std::equal(tag.begin(), tag.end(), kGenesisTag.begin())) throw fail();
  std::uint64_t id_len = take_u64();
  if (id_len > payload.size()) throw fail();
  auto id = take(static_cast<std::size_t>(id_len));
  ChainParams params;
  params.network_id.assign(id.begin(), id.end());
  std::uint8_t mode = take(1)[0];
  std::uint8_t rule = take(1)[0];
  if (mode > 2 || rule > 1) throw fail();
  params.round.mode = static_cast<RoundMode>(mode);
  params.round.rule = static_cast<SelectionRule>(rule);
  params.round.min_dt_ms = take_u64();
  if (pos != payload.size()) throw fail();
  return params;
}

Block genesis(std::string_view network_id, const RoundConfig& cfg) {
  Block b;
  b.mode = cfg.mode;
  b.transactions.push_back(encode_chain_params(ChainParams{std::string(network_id), cfg}));
  b.block_hash = block_hash(b);
  return b;
}

Chain new_chain(std::string_view network_id, const RoundConfig& cfg) {
  return Chain{ChainParams{std::string(network_id), cfg}, {genesis(network_id, cfg)}};
}

Block build_block(const RoundResult& result, RoundMode mode, std::span<const std::uint8_t> reveal,
                  std::vector<Bytes> transactions, const Block& prev, std::uint64_t timestamp_ms) {
  if (result.round != prev.height + 1) {
    throw Error(ErrorCode::HeightMismatch, "round " + std::to_string(result.round) + " cannot follow height " +
                                               std::to_string(prev.height));
  }
  const Contribution* winner = result.contribution_of(result.winner);
  if (winner == nullptr || !verify_reveal(*winner, reveal)) {
    throw Error(ErrorCode::RevealMismatch, "reveal does not match the winner's first hash");
  }
  Block b;
  b.height = result.round;
  b.timestamp_ms = timestamp_ms;
  b.prevhash = prev.block_hash;
  b.owner = result.winner;
  b.mode = mode;
  b.owner_blob.assign(reveal.begin(), reveal.end());
  b.contributions = result.accepted;
  b.transactions = std::move(transactions);
  b.block_hash = block_hash(b);
  return b;
}

std::optional<BlockRejection> validate_block(const Block& b, const Block& prev, const RoundConfig& cfg,
                                             const KeyDirectory& keys) {
  if (b.height != prev.height + 1) return BlockRejection::BadHeight;
  if (b.prevhash != prev.block_hash) return BlockRejection::BadPrevHash;
  for (const auto& c : b.contributions) {
    const Point* key = keys.find(c.node);
    if (key == nullptr || !verify(*keys.curve, *key, c.canonical_encoding(), c.signature)) {
      return BlockRejection::BadSignature;
    }
  }
  auto owner = std::find_if(b.contributions.begin(), b.contributions.end(),
                            [&](const Contribution& c) { return c.node == b.owner; });
  if (owner == b.contributions.end() || !verify_reveal(*owner, b.owner_blob)) return BlockRejection::RevealMismatch;

  if (b.mode != cfg.mode) return BlockRejection::InvalidContribution;
  try {
    RoundResult replay = run_round(b.height, b.contributions, b.prevhash, cfg, keys);
    if (replay.accepted != b.contributions) return BlockRejection::InvalidContribution;
    if (replay.winner != b.owner) return BlockRejection::WrongWinner;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoValidContributions) throw;
    return BlockRejection::WrongWinner;
  }
  if (block_hash(b) != b.block_hash) return BlockRejection::BadBlockHash;
  return std::nullopt;
}

std::optional<ChainFailure> validate_chain(const Chain& chain, const KeyDirectory& keys) {
  if (chain.blocks.empty()) return ChainFailure{0, BlockRejection::MissingGenesis};
  const Block& first = chain.blocks.front();
  if (first.block_hash != block_hash(first)) return ChainFailure{0, BlockRejection::BadBlockHash};
  if (!(first == genesis(chain.params.network_id, chain.params.round))) {
    return ChainFailure{0, BlockRejection::BadGenesis};
  }
  // Failures are located by position, which is the expected height.
  for (std::size_t i = 1; i < chain.blocks.size(); ++i) {
    if (auto reason = validate_block(chain.blocks[i], chain.blocks[i - 1], chain.params.round, keys)) {
      return ChainFailure{i, *reason};
    }
  }
  return std::nullopt;
}

}  // namespace por
