#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace por {

using Bytes = std::vector<std::uint8_t>;

std::string to_hex(std::span<const std::uint8_t> bytes);

/// Lowercase or uppercase hex, even length. Throws InvalidArgument otherwise.
Bytes from_hex(std::string_view hex);

Bytes to_bytes(std::string_view text);

/// Appends big-endian fixed-width fields to a byte buffer.
class ByteWriter {
 public:
  ByteWriter& u8(std::uint8_t v) {
    out_.push_back(v);
    return *this;
  }
  ByteWriter& u64(std::uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8) out_.push_back(static_cast<std::uint8_t>(v >> shift));
    return *this;
  }
  ByteWriter& raw(std::span<const std::uint8_t> bytes) {
    out_.insert(out_.end(), bytes.begin(), bytes.end());
    return *this;
  }
  /// 8-byte length prefix followed by the bytes.
  ByteWriter& blob(std::span<const std::uint8_t> bytes) {
    u64(bytes.size());
    return raw(bytes);
  }

  const Bytes& bytes() const& { return out_; }
  Bytes bytes() && { return std::move(out_); }

 private:
  Bytes out_;
};

}  // namespace por
