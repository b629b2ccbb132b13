#include <gtest/gtest.h>

#include <algorithm>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <set>

#include "por/entropy.hpp"
#include "por/error.hpp"
#include "por/randomness.hpp"

namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const por::Bytes& data) {
  fs::path p = fs::temp_directory_path() / ("por_rand_" + name + "_" + std::to_string(::getpid()));
  std::ofstream out(p, std::ios::binary);
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  return p;
}

template <typename F>
por::ErrorCode error_of(F&& f) {
  try {
    f();
  } catch (const por::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return por::ErrorCode::InvalidArgument;
}

por::BitPool alternating(std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s.push_back(i % 2 ? '0' : '1');
  return por::BitPool::from_bit_string(s);
}

TEST(Entropy, SeededMatchesEngineBigEndian) {
  auto src = por::EntropySource::seeded(1);
  std::mt19937_64 ref(1);
  for (int word = 0; word < 4; ++word) {
    const std::uint64_t v = ref();
    for (int shift = 56; shift >= 0; shift -= 8) {
      EXPECT_EQ(src.next_byte(), static_cast<std::uint8_t>(v >> shift));
    }
  }
}

TEST(Entropy, SeededIsReproducibleAndSeedSensitive) {
  auto a = por::EntropySource::seeded(99), b = por::EntropySource::seeded(99), c = por::EntropySource::seeded(100);
  por::Bytes da = a.draw(64);
  EXPECT_EQ(da, b.draw(64));
  EXPECT_NE(da, c.draw(64));
}

TEST(Entropy, FileSourceExhausts) {
  por::Bytes data(16);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = static_cast<std::uint8_t>(i);
  auto path = write_temp("exhaust", data);
  auto src = por::EntropySource::file(path);
  EXPECT_EQ(src.draw(16), data);
  EXPECT_EQ(error_of([&] { src.draw(1); }), por::ErrorCode::SourceExhausted);
  fs::remove(path);
  EXPECT_EQ(error_of([] { por::EntropySource::file("/nonexistent/por/entropy.bin"); }), por::ErrorCode::IoFailure);
}

TEST(Entropy, UniformBelowStaysInRange) {
  auto src = por::EntropySource::seeded(4);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 7000; ++i) {
    auto v = src.uniform_below(7);
    ASSERT_LT(v, 7u);
    ++counts[v];
  }
  for (int c : counts) EXPECT_NEAR(c, 1000, 150);
}

TEST(BitPool, LengthAndPadding) {
  por::BitPool p(por::Bytes{0xFF, 0xFF}, 12);
  EXPECT_EQ(p.length_bits(), 12u);
  EXPECT_EQ(p.bytes()[1], 0xF0);
  EXPECT_EQ(p.count_ones(), 12u);
  EXPECT_THROW(por::BitPool(por::Bytes{0x00}, 9), por::Error);
  EXPECT_THROW(por::BitPool::from_bit_string("0102"), por::Error);
  auto q = por::BitPool::from_bit_string("1011");
  EXPECT_TRUE(q.bit(0));
  EXPECT_FALSE(q.bit(1));
  EXPECT_TRUE(q.bit(3));
}

TEST(Monobit, AlternatingIsPerfectlyBalanced) {
  auto r = por::monobit_test(alternating(1000));
  EXPECT_DOUBLE_EQ(r.statistic, 0.0);
  EXPECT_DOUBLE_EQ(r.p_value, 1.0);
  EXPECT_TRUE(r.passed);
}

TEST(Monobit, AllZerosFailsHard) {
  por::BitPool zeros(por::Bytes(125, 0));
  auto r = por::monobit_test(zeros);
  EXPECT_LT(r.p_value, 1e-20);
  EXPECT_FALSE(r.passed);
  EXPECT_NEAR(r.p_value, boost::math::erfc(std::sqrt(1000.0) / std::sqrt(2.0)), 1e-250);
}

TEST(Monobit, ShortZerosAndPiPrefix) {
  auto zeros = por::monobit_test(por::BitPool(por::Bytes(16, 0)));
  EXPECT_NEAR(zeros.statistic, std::sqrt(128.0), 1e-12);
  EXPECT_NEAR(zeros.p_value, boost::math::erfc(8.0), 1e-40);
  EXPECT_LT(zeros.p_value, 1e-20);

  // First 100 bits of the binary expansion of pi.
  const std::string pi =
      "1100100100001111110110101010001000100001011010001100001000110100110001001100011001100010100010111000";
  std::size_t ones = std::count(pi.begin(), pi.end(), '1');
  const double s = std::fabs(2.0 * double(ones) - 100.0) / 10.0;
  auto r = por::monobit_test(por::BitPool::from_bit_string(pi));
  EXPECT_NEAR(r.p_value, boost::math::erfc(s / std::sqrt(2.0)), 1e-12);
  EXPECT_NEAR(r.p_value, 0.109599, 1e-6);
}

TEST(Monobit, MatchesIndependentFormulaAndComplementSymmetry) {
  auto src = por::EntropySource::seeded(5);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 100 + src.uniform_below(5000);
    auto pool = por::fill_pool(src, n);
    std::size_t ones = 0;
    for (std::size_t i = 0; i < n; ++i) ones += pool.bit(i);
    const double s = std::fabs(2.0 * static_cast<double>(ones) - static_cast<double>(n)) / std::sqrt(double(n));
    auto r = por::monobit_test(pool);
    EXPECT_NEAR(r.p_value, boost::math::erfc(s / std::sqrt(2.0)), 1e-12);
    por::Bytes flipped = pool.bytes();
    for (auto& b : flipped) b = static_cast<std::uint8_t>(~b);
    EXPECT_NEAR(por::monobit_test(por::BitPool(flipped, n)).p_value, r.p_value, 1e-12);
  }
}

TEST(Monobit, RejectsShortPool) {
  EXPECT_EQ(error_of([] { por::monobit_test(alternating(99)); }), por::ErrorCode::PoolTooShort);
}

TEST(BlockFrequency, MatchesIndependentFormula) {
  auto src = por::EntropySource::seeded(6);
  for (std::size_t m : {20u, 64u, 128u, 1000u}) {
    for (int trial = 0; trial < 10; ++trial) {
      const std::size_t n = m + src.uniform_below(20000);
      auto pool = por::fill_pool(src, n);
      const std::size_t blocks = n / m;
      double chi = 0;
      for (std::size_t b = 0; b < blocks; ++b) {
        double ones = 0;
        for (std::size_t i = 0; i < m; ++i) ones += pool.bit(b * m + i);
        chi += std::pow(ones / double(m) - 0.5, 2);
      }
      chi *= 4.0 * double(m);
      auto r = por::block_frequency_test(pool, m);
      EXPECT_NEAR(r.statistic, chi, 1e-9 * std::max(1.0, chi));
      EXPECT_NEAR(r.p_value, boost::math::gamma_q(double(blocks) / 2.0, chi / 2.0), 1e-9);
    }
  }
}

TEST(BlockFrequency, PerfectBlocksAndAllOnes) {
  auto r = por::block_frequency_test(alternating(1280), 128);
  EXPECT_DOUBLE_EQ(r.statistic, 0.0);
  EXPECT_DOUBLE_EQ(r.p_value, 1.0);
  por::BitPool ones(por::Bytes(160, 0xFF));
  auto f = por::block_frequency_test(ones, 128);
  EXPECT_DOUBLE_EQ(f.statistic, 1280.0);
  EXPECT_LT(f.p_value, 1e-100);
  EXPECT_FALSE(f.passed);
}

TEST(BlockFrequency, Guards) {
  EXPECT_EQ(error_of([] { por::block_frequency_test(alternating(1000), 19); }), por::ErrorCode::BlockLenInvalid);
  EXPECT_EQ(error_of([] { por::block_frequency_test(alternating(100), 128); }), por::ErrorCode::PoolTooShort);
}

TEST(Runs, TextbookExample) {
  auto r = por::runs_test(por::BitPool::from_bit_string("1001101011"), por::kDefaultAlpha, false);
  EXPECT_DOUBLE_EQ(r.statistic, 7.0);
  EXPECT_NEAR(r.p_value, 0.147232, 1e-4);
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(error_of([] { por::runs_test(por::BitPool::from_bit_string("1001101011")); }),
            por::ErrorCode::PoolTooShort);
}

TEST(Runs, PrerequisiteFailureGivesZero) {
  por::BitPool ones(por::Bytes(125, 0xFF));
  auto r = por::runs_test(ones);
  EXPECT_EQ(r.p_value, 0.0);
  EXPECT_FALSE(r.passed);
}

TEST(Runs, AlternatingAgainstOracle) {
  const std::size_t n = 1000;
  auto r = por::runs_test(alternating(n));
  EXPECT_DOUBLE_EQ(r.statistic, double(n));
  const double expected = boost::math::erfc(std::fabs(double(n) - double(n) / 2.0) / (2.0 * std::sqrt(2.0 * n) * 0.25));
  EXPECT_NEAR(r.p_value, expected, 1e-200);
  EXPECT_FALSE(r.passed);
}

TEST(Suite, ReportsThreeTestsAndValidJson) {
  auto src = por::EntropySource::seeded(7);
  auto pool = por::fill_pool(src, 1 << 16);
  auto rep = por::run_suite(pool);
  std::set<std::string> names;
  for (const auto& r : rep.results) names.insert(r.test_name);
  EXPECT_EQ(names, (std::set<std::string>{"monobit", "block_frequency", "runs"}));
  EXPECT_EQ(rep.pool_length_bits, 1u << 16);
  bool all = true;
  for (const auto& r : rep.results) {
    EXPECT_GE(r.p_value, 0.0);
    EXPECT_LE(r.p_value, 1.0);
    EXPECT_EQ(r.passed, r.p_value >= por::kDefaultAlpha);
    all = all && r.passed;
  }
  EXPECT_EQ(rep.all_passed, all);
  auto j = nlohmann::json::parse(por::suite_report_json(rep));
  EXPECT_EQ(j["results"].size(), 3u);
  EXPECT_EQ(j["all_passed"].get<bool>(), rep.all_passed);
  EXPECT_NE(por::suite_report_text(rep).find("monobit"), std::string::npos);
}

TEST(Suite, ZerosFail) {
  por::BitPool zeros(por::Bytes(1024, 0));
  EXPECT_FALSE(por::run_suite(zeros).all_passed);
}

TEST(Split, EqualPiecesConcatenateToPool) {
  auto src = por::EntropySource::seeded(8);
  auto pool = por::fill_pool(src, 2048);
  auto pieces = por::split_pool(pool, 256);
  ASSERT_EQ(pieces.size(), 256u);
  por::Bytes joined;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    EXPECT_EQ(pieces[i].bytes.size(), 1u);
    EXPECT_EQ(pieces[i].piece_index, i);
    joined.insert(joined.end(), pieces[i].bytes.begin(), pieces[i].bytes.end());
  }
  EXPECT_EQ(joined, pool.bytes());
}

TEST(Split, IndivisibleRejected) {
  auto src = por::EntropySource::seeded(9);
  auto pool = por::fill_pool(src, 2047);
  EXPECT_EQ(error_of([&] { por::split_pool(pool, 256); }), por::ErrorCode::IndivisiblePool);
  auto whole = por::fill_pool(src, 2048);
  EXPECT_EQ(error_of([&] { por::split_pool(whole, 0); }), por::ErrorCode::IndivisiblePool);
  EXPECT_EQ(error_of([&] { por::split_pool(whole, 3); }), por::ErrorCode::IndivisiblePool);
}

TEST(Select, ByteModuloPieceCount) {
  std::vector<por::RandomBlob> pieces;
  for (std::size_t i = 0; i < 256; ++i) pieces.push_back({por::Bytes{static_cast<std::uint8_t>(i)}, i});
  auto path = write_temp("select", por::Bytes{0x00, 0xFF, 0xFF});
  auto src = por::EntropySource::file(path);
  EXPECT_EQ(por::select_piece(pieces, src).piece_index, 0u);
  EXPECT_EQ(por::select_piece(pieces, src).piece_index, 255u);
  std::span<const por::RandomBlob> first100(pieces.data(), 100);
  EXPECT_EQ(por::select_piece(first100, src).piece_index, 55u);
  fs::remove(path);
  std::vector<por::RandomBlob> none;
  EXPECT_EQ(error_of([&] { por::select_piece(none, src); }), por::ErrorCode::EmptyPieces);
}

}  // namespace
