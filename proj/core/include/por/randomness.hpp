#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "por/encoding.hpp"
#include "por/entropy.hpp"

namespace por {

inline constexpr double kDefaultAlpha = 0.01;
inline constexpr std::size_t kDefaultBlockLen = 128;
inline constexpr std::size_t kMinTestBits = 100;

/// Bit sequence under test. Bits are most-significant-first within each
/// byte; pad bits past `length_bits` are zero.
class BitPool {
 public:
  BitPool() = default;
  /// Takes the first `length_bits` bits of `bytes`; remaining bits are cleared.
  BitPool(Bytes bytes, std::size_t length_bits);
  explicit BitPool(Bytes bytes);

  /// Parses a string of '0'/'1' characters.
  static BitPool from_bit_string(std::string_view bits);

  std::size_t length_bits() const noexcept { return length_bits_; }
  const Bytes& bytes() const noexcept { return bytes_; }
  bool bit(std::size_t i) const { return (bytes_[i / 8] >> (7 - i % 8)) & 1U; }
  std::size_t count_ones() const;

 private:
  Bytes bytes_;
  std::size_t length_bits_ = 0;
};

struct TestResult {
  std::string test_name;
  double statistic = 0.0;
  double p_value = 0.0;
  bool passed = false;
};

struct SuiteReport {
  std::vector<TestResult> results;
  bool all_passed = false;
  std::size_t pool_length_bits = 0;
};

/// One per-round random piece R(m,n) cut from a tested pool.
struct RandomBlob {
  Bytes bytes;
  std::size_t piece_index = 0;

  friend bool operator==(const RandomBlob&, const RandomBlob&) = default;
};

BitPool fill_pool(EntropySource& source, std::size_t n_bits);

TestResult monobit_test(const BitPool& pool, double alpha = kDefaultAlpha);
TestResult block_frequency_test(const BitPool& pool, std::size_t block_len = kDefaultBlockLen,
                                double alpha = kDefaultAlpha);
/// `enforce_min_length` off permits short sequences such as textbook examples.
TestResult runs_test(const BitPool& pool, double alpha = kDefaultAlpha, bool enforce_min_length = true);

SuiteReport run_suite(const BitPool& pool, double alpha = kDefaultAlpha, std::size_t block_len = kDefaultBlockLen);

std::string suite_report_json(const SuiteReport& report, int indent = 2);
std::string suite_report_text(const SuiteReport& report);

std::vector<RandomBlob> split_pool(const BitPool& pool, std::size_t piece_count);

/// pieces[b mod pieces.size()] for one byte b drawn from `source`.
RandomBlob select_piece(std::span<const RandomBlob> pieces, EntropySource& source);

}  // namespace por
