#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "por/consensus.hpp"

namespace por {

/// A block records the owner's revealed random blob in place of a PoW nonce,
/// together with the full set of accepted contributions of its round.
struct Block {
  std::uint64_t height = 0;
  std::uint64_t timestamp_ms = 0;
  Hash256 prevhash;
  NodeId owner;
  RoundMode mode = RoundMode::LargePrevhash;
  Bytes owner_blob;
  std::vector<Contribution> contributions;  // ascending NodeId
  std::vector<Bytes> transactions;          // opaque payloads
  Hash256 block_hash;

  friend bool operator==(const Block&, const Block&) = default;
};

struct ChainParams {
  std::string network_id;
  RoundConfig round;

  friend bool operator==(const ChainParams&, const ChainParams&) = default;
};

struct Chain {
  ChainParams params;
  std::vector<Block> blocks;

  const Block& tip() const { return blocks.back(); }

  friend bool operator==(const Chain&, const Chain&) = default;
};

enum class BlockRejection : std::uint8_t {
  BadHeight,
  BadPrevHash,
  BadSignature,
  RevealMismatch,
  InvalidContribution,
  WrongWinner,
  BadBlockHash,
  BadGenesis,
  MissingGenesis,
};

std::string_view to_string(BlockRejection reason);

struct ChainFailure {
  std::uint64_t height = 0;
  BlockRejection reason = BlockRejection::BadBlockHash;

  friend bool operator==(const ChainFailure&, const ChainFailure&) = default;
};

/// Binary preimage of block_hash: height, timestamp, prevhash, owner, mode
/// tag, owner_blob, contributions (canonical encoding ‖ 64-byte signature),
/// transactions. Integers 8-byte big-endian; variable fields length-prefixed.
Bytes canonical_block_bytes(const Block& b);
Hash256 block_hash(const Block& b);

/// Genesis carries the chain parameters as its single transaction so that
/// differing networks never share a genesis hash.
Block genesis(std::string_view network_id, const RoundConfig& cfg);
Bytes encode_chain_params(const ChainParams& params);
ChainParams decode_chain_params(std::span<const std::uint8_t> payload);

Chain new_chain(std::string_view network_id, const RoundConfig& cfg);

/// Throws RevealMismatch when the reveal does not hash to the winner's
/// first_hash and HeightMismatch when result.round != prev.height + 1.
Block build_block(const RoundResult& result, RoundMode mode, std::span<const std::uint8_t> reveal,
                  std::vector<Bytes> transactions, const Block& prev, std::uint64_t timestamp_ms);

/// First failing check, or std::nullopt when the block is valid.
std::optional<BlockRejection> validate_block(const Block& b, const Block& prev, const RoundConfig& cfg,
                                             const KeyDirectory& keys);

std::optional<ChainFailure> validate_chain(const Chain& chain, const KeyDirectory& keys);

/// JSON-lines, one block per line, written atomically via a temp file.
void save_chain(const Chain& chain, const std::filesystem::path& path);
Chain load_chain(const std::filesystem::path& path);

std::string block_to_json_line(const Block& b);
/// Rejects lines that are not exactly what block_to_json_line would write.
Block block_from_json_line(std::string_view line, std::size_t line_number);

/// {"curve": name, "keys": [{"node": id, "K": hex}, ...]}
void save_key_directory(const KeyDirectory& keys, const std::filesystem::path& path);
KeyDirectory load_key_directory(const std::filesystem::path& path);

}  // namespace por
