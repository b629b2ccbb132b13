#include "por/encoding.hpp"

#include "por/error.hpp"

namespace por {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::SourceExhausted: return "SourceExhausted";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::PoolTooShort: return "PoolTooShort";
    case ErrorCode::BlockLenInvalid: return "BlockLenInvalid";
    case ErrorCode::IndivisiblePool: return "IndivisiblePool";
    case ErrorCode::EmptyPieces: return "EmptyPieces";
    case ErrorCode::ClockInvariantViolated: return "ClockInvariantViolated";
    case ErrorCode::EmptyRound: return "EmptyRound";
    case ErrorCode::DuplicateNode: return "DuplicateNode";
    case ErrorCode::MixedRounds: return "MixedRounds";
    case ErrorCode::NoValidContributions: return "NoValidContributions";
    case ErrorCode::RevealMismatch: return "RevealMismatch";
    case ErrorCode::HeightMismatch: return "HeightMismatch";
    case ErrorCode::ParseFailure: return "ParseFailure";
    case ErrorCode::PointNotOnCurve: return "PointNotOnCurve";
    case ErrorCode::MessageTooLong: return "MessageTooLong";
    case ErrorCode::EncodingFailed: return "EncodingFailed";
    case ErrorCode::KeyLengthMismatch: return "KeyLengthMismatch";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::GateFailed: return "GateFailed";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
  }
  return "Unknown";
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  s.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    s.push_back(kDigits[b >> 4]);
    s.push_back(kDigits[b & 0xF]);
  }
  return s;
}

namespace {
int nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}
}  // namespace

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw Error(ErrorCode::InvalidArgument, "odd-length hex string");
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    int hi = nibble(hex[2 * i]), lo = nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw Error(ErrorCode::InvalidArgument, "bad hex digit");
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

Bytes to_bytes(std::string_view text) { return Bytes(text.begin(), text.end()); }

}  // namespace por
