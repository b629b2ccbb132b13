#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace por {

enum class ErrorCode {
  InvalidArgument,
  EmptyInput,
  SourceExhausted,
  IoFailure,
  PoolTooShort,
  BlockLenInvalid,
  IndivisiblePool,
  EmptyPieces,
  ClockInvariantViolated,
  EmptyRound,
  DuplicateNode,
  MixedRounds,
  NoValidContributions,
  RevealMismatch,
  HeightMismatch,
  ParseFailure,
  PointNotOnCurve,
  MessageTooLong,
  EncodingFailed,
  KeyLengthMismatch,
  ConfigInvalid,
  GateFailed,
  DegenerateInput,
};

std::string_view to_string(ErrorCode code);

/// Faults raised by library operations. Validation outcomes that are part of
/// the protocol (rejections) are returned as values instead.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace por
