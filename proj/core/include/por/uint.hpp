#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "por/error.hpp"

namespace por {

__extension__ using u128 = unsigned __int128;

/// Fixed-width unsigned integer of `Limbs` 64-bit words.
///
/// Arithmetic wraps modulo 2^(64*Limbs). Limbs are stored least significant
/// first; the byte and hex forms are big-endian and fixed width.
template <std::size_t Limbs>
class UInt {
 public:
  static constexpr std::size_t kLimbs = Limbs;
  static constexpr std::size_t kBytes = Limbs * 8;
  static constexpr std::size_t kBits = Limbs * 64;

  constexpr UInt() = default;
  constexpr explicit UInt(std::uint64_t low) { limbs_[0] = low; }

  static constexpr UInt max() {
    UInt r;
    r.limbs_.fill(~std::uint64_t{0});
    return r;
  }

  /// Big-endian decode; shorter inputs are left-padded with zeros.
  static UInt from_bytes(std::span<const std::uint8_t> bytes) {
    if (bytes.size() > kBytes) {
      throw Error(ErrorCode::InvalidArgument, "integer encoding wider than " + std::to_string(kBytes) + " bytes");
    }
    UInt r;
    std::size_t shift = 0;
    for (std::size_t i = bytes.size(); i-- > 0; shift += 8) {
      r.limbs_[shift / 64] |= std::uint64_t{bytes[i]} << (shift % 64);
    }
    return r;
  }

  /// Exactly 2*kBytes hex digits, either case.
  static UInt from_hex(std::string_view hex) {
    if (hex.size() != 2 * kBytes) {
      throw Error(ErrorCode::InvalidArgument,
                  "expected " + std::to_string(2 * kBytes) + " hex digits, got " + std::to_string(hex.size()));
    }
    UInt r;
    for (char c : hex) {
      int v = hex_value(c);
      if (v < 0) throw Error(ErrorCode::InvalidArgument, "bad hex digit in integer");
      r = (r << 4);
      r.limbs_[0] |= static_cast<std::uint64_t>(v);
    }
    return r;
  }

  std::array<std::uint8_t, kBytes> to_bytes() const {
    std::array<std::uint8_t, kBytes> out{};
    for (std::size_t i = 0; i < kBytes; ++i) {
      std::size_t bit = 8 * (kBytes - 1 - i);
      out[i] = static_cast<std::uint8_t>(limbs_[bit / 64] >> (bit % 64));
    }
    return out;
  }

  std::string to_hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string s;
    s.reserve(2 * kBytes);
    for (std::uint8_t b : to_bytes()) {
      s.push_back(kDigits[b >> 4]);
      s.push_back(kDigits[b & 0xF]);
    }
    return s;
  }

  constexpr std::uint64_t limb(std::size_t i) const { return limbs_[i]; }
  constexpr std::uint64_t& limb(std::size_t i) { return limbs_[i]; }

  constexpr bool is_zero() const {
    return std::all_of(limbs_.begin(), limbs_.end(), [](std::uint64_t w) { return w == 0; });
  }

  constexpr bool bit(std::size_t i) const { return (limbs_[i / 64] >> (i % 64)) & 1U; }

  constexpr std::size_t bit_length() const {
    for (std::size_t i = Limbs; i-- > 0;) {
      if (limbs_[i] != 0) return 64 * i + (64 - static_cast<std::size_t>(std::countl_zero(limbs_[i])));
    }
    return 0;
  }

  /// Number of significant limbs (at least 1).
  constexpr std::size_t limb_count() const { return std::max<std::size_t>(1, (bit_length() + 63) / 64); }

  template <std::size_t M>
  constexpr UInt<M> resize() const {
    UInt<M> r;
    for (std::size_t i = 0; i < std::min(M, Limbs); ++i) r.limb(i) = limbs_[i];
    return r;
  }

  friend constexpr bool operator==(const UInt&, const UInt&) = default;

  friend constexpr std::strong_ordering operator<=>(const UInt& a, const UInt& b) {
    for (std::size_t i = Limbs; i-- > 0;) {
      if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] <=> b.limbs_[i];
    }
    return std::strong_ordering::equal;
  }

  /// Adds in place; returns the carry out of the top limb.
  constexpr bool add_carry(const UInt& o) {
    u128 carry = 0;
    for (std::size_t i = 0; i < Limbs; ++i) {
      carry += static_cast<u128>(limbs_[i]) + o.limbs_[i];
      limbs_[i] = static_cast<std::uint64_t>(carry);
      carry >>= 64;
    }
    return carry != 0;
  }

  /// Subtracts in place; returns the borrow out of the top limb.
  constexpr bool sub_borrow(const UInt& o) {
    std::uint64_t borrow = 0;
    for (std::size_t i = 0; i < Limbs; ++i) {
      std::uint64_t a = limbs_[i];
      std::uint64_t d = a - o.limbs_[i] - borrow;
      borrow = (a < o.limbs_[i] || (a == o.limbs_[i] && borrow)) ? 1 : 0;
      limbs_[i] = d;
    }
    return borrow != 0;
  }

  friend constexpr UInt operator+(UInt a, const UInt& b) {
    a.add_carry(b);
    return a;
  }
  friend constexpr UInt operator-(UInt a, const UInt& b) {
    a.sub_borrow(b);
    return a;
  }
  friend constexpr UInt operator*(const UInt& a, const UInt& b) {
    UInt r;
    for (std::size_t i = 0; i < Limbs; ++i) {
      u128 carry = 0;
      for (std::size_t j = 0; i + j < Limbs; ++j) {
        carry += static_cast<u128>(a.limbs_[i]) * b.limbs_[j] + r.limbs_[i + j];
        r.limbs_[i + j] = static_cast<std::uint64_t>(carry);
        carry >>= 64;
      }
    }
    return r;
  }

  friend constexpr UInt operator<<(const UInt& a, std::size_t n) {
    UInt r;
    if (n >= kBits) return r;
    std::size_t words = n / 64, bits = n % 64;
    for (std::size_t i = Limbs; i-- > words;) {
      std::uint64_t v = a.limbs_[i - words] << bits;
      if (bits != 0 && i - words > 0) v |= a.limbs_[i - words - 1] >> (64 - bits);
      r.limbs_[i] = v;
    }
    return r;
  }
  friend constexpr UInt operator>>(const UInt& a, std::size_t n) {
    UInt r;
    if (n >= kBits) return r;
    std::size_t words = n / 64, bits = n % 64;
    for (std::size_t i = 0; i + words < Limbs; ++i) {
      std::uint64_t v = a.limbs_[i + words] >> bits;
      if (bits != 0 && i + words + 1 < Limbs) v |= a.limbs_[i + words + 1] << (64 - bits);
      r.limbs_[i] = v;
    }
    return r;
  }
  friend constexpr UInt operator^(UInt a, const UInt& b) {
    for (std::size_t i = 0; i < Limbs; ++i) a.limbs_[i] ^= b.limbs_[i];
    return a;
  }

  /// Remainder modulo `m` by binary long division. `m` must be non-zero.
  constexpr UInt mod(const UInt& m) const {
    if (m.is_zero()) throw Error(ErrorCode::InvalidArgument, "modulus is zero");
    if (*this < m) return *this;
    if (m.bit_length() <= 64) {
      u128 r = 0;
      for (std::size_t i = Limbs; i-- > 0;) r = ((r << 64) | limbs_[i]) % m.limbs_[0];
      return UInt(static_cast<std::uint64_t>(r));
    }
    UInt rem;
    for (std::size_t i = bit_length(); i-- > 0;) {
      bool top = rem.bit(kBits - 1);
      rem = rem << 1;
      if (bit(i)) rem.limbs_[0] |= 1;
      if (top || rem >= m) rem.sub_borrow(m);
    }
    return rem;
  }

 private:
  static constexpr int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  }

  std::array<std::uint64_t, Limbs> limbs_{};
};

/// Full product without truncation.
template <std::size_t N, std::size_t M>
constexpr UInt<N + M> mul_wide(const UInt<N>& a, const UInt<M>& b) {
  UInt<N + M> r;
  for (std::size_t i = 0; i < N; ++i) {
    u128 carry = 0;
    for (std::size_t j = 0; j < M; ++j) {
      carry += static_cast<u128>(a.limb(i)) * b.limb(j) + r.limb(i + j);
      r.limb(i + j) = static_cast<std::uint64_t>(carry);
      carry >>= 64;
    }
    r.limb(i + M) = static_cast<std::uint64_t>(carry);
  }
  return r;
}

using UInt256 = UInt<4>;
using UInt320 = UInt<5>;
using UInt512 = UInt<8>;

/// 256-bit value carrying hashes, sums and distances.
using Hash256 = UInt256;

}  // namespace por
