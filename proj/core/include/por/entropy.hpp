#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <variant>

#include "por/encoding.hpp"

namespace por {

/// A stream of random bytes. Stands in for TRNG/QRNG hardware.
///
/// Sources are single-consumer cursors: each draw advances the stream. The
/// seeded kind exists for reproducible simulation and is not a true random
/// source.
class EntropySource {
 public:
  enum class Kind { SeededDeterministic, OsEntropy, FileBacked };

  /// mt19937_64 seeded with `seed`; each 64-bit output is emitted as 8
  /// big-endian bytes.
  static EntropySource seeded(std::uint64_t seed);
  static EntropySource os();
  static EntropySource file(const std::filesystem::path& path);

  EntropySource(EntropySource&&) noexcept = default;
  EntropySource& operator=(EntropySource&&) noexcept = default;
  EntropySource(const EntropySource&) = delete;
  EntropySource& operator=(const EntropySource&) = delete;

  Kind kind() const noexcept;
  std::string describe() const;

  /// Fills `out` completely or throws SourceExhausted / IoFailure.
  void fill(std::span<std::uint8_t> out);

  Bytes draw(std::size_t n);
  std::uint8_t next_byte();
  std::uint64_t next_u64();

  /// Uniform integer in [0, bound) by rejection sampling; bound > 0.
  std::uint64_t uniform_below(std::uint64_t bound);

 private:
  struct Seeded {
    std::uint64_t seed;
    std::mt19937_64 engine;
    std::array<std::uint8_t, 8> buffer{};
    std::size_t used = 8;
  };
  struct Os {
    std::unique_ptr<std::ifstream> stream;
  };
  struct File {
    std::filesystem::path path;
    std::unique_ptr<std::ifstream> stream;
  };

  explicit EntropySource(std::variant<Seeded, Os, File> impl) : impl_(std::move(impl)) {}

  std::variant<Seeded, Os, File> impl_;
};

}  // namespace por
