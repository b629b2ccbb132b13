#include "por/randomness.hpp"

#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "por/error.hpp"
#include "por/special_functions.hpp"

namespace por {
namespace {

void require_length(const BitPool& pool, std::size_t min_bits, std::string_view test) {
  if (pool.length_bits() < min_bits) {
    throw Error(ErrorCode::PoolTooShort, std::string(test) + " needs at least " + std::to_string(min_bits) +
                                             " bits, pool has " + std::to_string(pool.length_bits()));
  }
}

TestResult make_result(std::string name, double statistic, double p, double alpha) {
  p = std::clamp(p, 0.0, 1.0);
  return TestResult{std::move(name), statistic, p, p >= alpha};
}

}  // namespace

BitPool::BitPool(Bytes bytes, std::size_t length_bits) : bytes_(std::move(bytes)), length_bits_(length_bits) {
  if (length_bits_ > bytes_.size() * 8) {
    throw Error(ErrorCode::InvalidArgument, "bit length exceeds byte storage");
  }
  bytes_.resize((length_bits_ + 7) / 8);
  if (length_bits_ % 8 != 0) {
    bytes_.back() &= static_cast<std::uint8_t>(0xFF << (8 - length_bits_ % 8));
  }
}

BitPool::BitPool(Bytes bytes) : bytes_(std::move(bytes)), length_bits_(bytes_.size() * 8) {}

BitPool BitPool::from_bit_string(std::string_view bits) {
  Bytes bytes((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      bytes[i / 8] |= static_cast<std::uint8_t>(0x80 >> (i % 8));
    } else if (bits[i] != '0') {
      throw Error(ErrorCode::InvalidArgument, "bit string may contain only '0' and '1'");
    }
  }
  return BitPool(std::move(bytes), bits.size());
}

std::size_t BitPool::count_ones() const {
  // Pad bits are zero, so whole-byte popcount is exact.
  return std::accumulate(bytes_.begin(), bytes_.end(), std::size_t{0},
                         [](std::size_t acc, std::uint8_t b) { return acc + std::popcount(b); });
}

BitPool fill_pool(EntropySource& source, std::size_t n_bits) {
  if (n_bits == 0) throw Error(ErrorCode::InvalidArgument, "pool size must be positive");
  Bytes bytes = source.draw((n_bits + 7) / 8);
  return BitPool(std::move(bytes), n_bits);
}

TestResult monobit_test(const BitPool& pool, double alpha) {
  require_length(pool, kMinTestBits, "monobit");
  const double n = static_cast<double>(pool.length_bits());
  const double ones = static_cast<double>(pool.count_ones());
  const double s_obs = std::fabs(2.0 * ones - n) / std::sqrt(n);
  return make_result("monobit", s_obs, std::erfc(s_obs / std::sqrt(2.0)), alpha);
}

TestResult block_frequency_test(const BitPool& pool, std::size_t block_len, double alpha) {
  if (block_len < 20) throw Error(ErrorCode::BlockLenInvalid, "block length must be at least 20 bits");
  const std::size_t blocks = pool.length_bits() / block_len;
  if (blocks == 0) {
    throw Error(ErrorCode::PoolTooShort, "block frequency needs one complete block of " + std::to_string(block_len) +
                                             " bits");
  }
  double chi = 0.0;
  for (std::size_t b = 0; b < blocks; ++b) {
    std::size_t ones = 0;
    for (std::size_t i = b * block_len; i < (b + 1) * block_len; ++i) ones += pool.bit(i);
    double dev = static_cast<double>(ones) / static_cast<double>(block_len) - 0.5;
    chi += dev * dev;
  }
  chi *= 4.0 * static_cast<double>(block_len);
  return make_result("block_frequency", chi, igamc(static_cast<double>(blocks) / 2.0, chi / 2.0), alpha);
}

TestResult runs_test(const BitPool& pool, double alpha, bool enforce_min_length) {
  if (enforce_min_length) require_length(pool, kMinTestBits, "runs");
  const std::size_t n = pool.length_bits();
  if (n < 2) throw Error(ErrorCode::PoolTooShort, "runs test needs at least 2 bits");
  const double nd = static_cast<double>(n);
  const double pi = static_cast<double>(pool.count_ones()) / nd;
  // Frequency prerequisite.
  if (std::fabs(pi - 0.5) >= 2.0 / std::sqrt(nd)) return make_result("runs", 0.0, 0.0, alpha);

  std::size_t runs = 1;
  for (std::size_t i = 0; i + 1 < n; ++i) runs += pool.bit(i) != pool.bit(i + 1);
  const double v = static_cast<double>(runs);
  const double spread = pi * (1.0 - pi);
  const double p = std::erfc(std::fabs(v - 2.0 * nd * spread) / (2.0 * std::sqrt(2.0 * nd) * spread));
  return make_result("runs", v, p, alpha);
}

SuiteReport run_suite(const BitPool& pool, double alpha, std::size_t block_len) {
  require_length(pool, std::max(kMinTestBits, block_len), "randomness suite");
  SuiteReport report;
  report.pool_length_bits = pool.length_bits();
  report.results.push_back(monobit_test(pool, alpha));
  report.results.push_back(block_frequency_test(pool, block_len, alpha));
  report.results.push_back(runs_test(pool, alpha));
  report.all_passed = std::all_of(report.results.begin(), report.results.end(),
                                  [](const TestResult& r) { return r.passed; });
  return report;
}

std::string suite_report_json(const SuiteReport& report, int indent) {
  nlohmann::ordered_json j;
  j["pool_length_bits"] = report.pool_length_bits;
  j["all_passed"] = report.all_passed;
  j["results"] = nlohmann::ordered_json::array();
  for (const auto& r : report.results) {
    j["results"].push_back(
        {{"test", r.test_name}, {"statistic", r.statistic}, {"p_value", r.p_value}, {"passed", r.passed}});
  }
  return j.dump(indent);
}

std::string suite_report_text(const SuiteReport& report) {
  std::ostringstream os;
  os << "pool: " << report.pool_length_bits << " bits\n";
  for (const auto& r : report.results) {
    os << "  " << r.test_name << ": statistic=" << r.statistic << " p=" << r.p_value
       << (r.passed ? " PASS" : " FAIL") << '\n';
  }
  os << (report.all_passed ? "suite: PASS" : "suite: FAIL") << '\n';
  return os.str();
}

std::vector<RandomBlob> split_pool(const BitPool& pool, std::size_t piece_count) {
  if (piece_count == 0 || pool.length_bits() % (piece_count * 8) != 0) {
    throw Error(ErrorCode::IndivisiblePool, std::to_string(pool.length_bits()) + "-bit pool cannot be split into " +
                                                std::to_string(piece_count) + " whole-byte pieces");
  }
  const std::size_t piece_bytes = pool.length_bits() / 8 / piece_count;
  std::vector<RandomBlob> pieces;
  pieces.reserve(piece_count);
  auto it = pool.bytes().begin();
  for (std::size_t i = 0; i < piece_count; ++i, it += static_cast<std::ptrdiff_t>(piece_bytes)) {
    pieces.push_back(RandomBlob{Bytes(it, it + static_cast<std::ptrdiff_t>(piece_bytes)), i});
  }
  return pieces;
}

RandomBlob select_piece(std::span<const RandomBlob> pieces, EntropySource& source) {
  if (pieces.empty()) throw Error(ErrorCode::EmptyPieces, "no pieces to select from");
  // Modulo reduction; slightly biased when the count does not divide 256.
  return pieces[source.next_byte() % pieces.size()];
}

}  // namespace por
