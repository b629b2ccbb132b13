#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include "por/uint.hpp"

namespace por {

/// Incremental FIPS 180-4 SHA-256.
class Sha256 {
 public:
  static constexpr std::size_t kDigestSize = 32;
  using Digest = std::array<std::uint8_t, kDigestSize>;

  Sha256();

  Sha256& update(std::span<const std::uint8_t> data);
  Sha256& update(std::string_view text);

  /// Pads, produces the digest and resets the state.
  Digest finalize();

 private:
  void compress(const std::uint8_t* block);

  std::array<std::uint32_t, 8> state_{};
  std::array<std::uint8_t, 64> buffer_{};
  std::size_t buffered_ = 0;
  std::uint64_t total_bytes_ = 0;
};

Hash256 sha256(std::span<const std::uint8_t> data);
Hash256 sha256(std::string_view text);

}  // namespace por
