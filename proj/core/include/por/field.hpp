#pragma once

#include <cstddef>
#include <cstdint>

#include "por/uint.hpp"

namespace por {

/// Element of a prime field, held in Montgomery form. Only meaningful
/// together with the PrimeField that produced it.
struct FieldElem {
  UInt256 mont;

  friend bool operator==(const FieldElem&, const FieldElem&) = default;
};

/// Arithmetic modulo an odd prime p < 2^256 using Montgomery multiplication
/// over the minimal number of 64-bit limbs.
class PrimeField {
 public:
  explicit PrimeField(const UInt256& p);

  const UInt256& modulus() const noexcept { return p_; }
  std::size_t byte_width() const noexcept { return (p_.bit_length() + 7) / 8; }

  /// Reduces `x` modulo p first.
  FieldElem from_int(const UInt256& x) const;
  UInt256 to_int(const FieldElem& e) const;

  FieldElem zero() const { return FieldElem{}; }
  FieldElem one() const { return one_; }
  bool is_zero(const FieldElem& e) const { return e.mont.is_zero(); }

  FieldElem add(const FieldElem& a, const FieldElem& b) const {
    if (n_ == 1) {
      u128 s = static_cast<u128>(a.mont.limb(0)) + b.mont.limb(0);
      if (s >= p_.limb(0)) s -= p_.limb(0);
      return FieldElem{UInt256(static_cast<std::uint64_t>(s))};
    }
    return FieldElem{add_raw(a.mont, b.mont)};
  }
  FieldElem sub(const FieldElem& a, const FieldElem& b) const {
    if (n_ == 1) {
      const std::uint64_t x = a.mont.limb(0), y = b.mont.limb(0);
      return FieldElem{UInt256(x >= y ? x - y : x - y + p_.limb(0))};
    }
    return FieldElem{sub_raw(a.mont, b.mont)};
  }
  FieldElem neg(const FieldElem& a) const { return sub(zero(), a); }
  FieldElem mul(const FieldElem& a, const FieldElem& b) const {
    if (n_ == 1) {
      // Single-limb Montgomery reduction; the sum before the shift can exceed 2^128.
      const std::uint64_t p = p_.limb(0);
      const u128 t = static_cast<u128>(a.mont.limb(0)) * b.mont.limb(0);
      const auto lo = static_cast<std::uint64_t>(t);
      const u128 mp = static_cast<u128>(lo * neg_inv_) * p;
      u128 r = (t >> 64) + (mp >> 64) + (lo != 0 ? 1 : 0);
      if (r >= p) r -= p;
      return FieldElem{UInt256(static_cast<std::uint64_t>(r))};
    }
    return FieldElem{mont_mul(a.mont, b.mont)};
  }
  FieldElem sqr(const FieldElem& a) const { return mul(a, a); }
  FieldElem pow(const FieldElem& base, const UInt256& exponent) const;
  /// Fermat inverse; a must be non-zero.
  FieldElem inv(const FieldElem& a) const;

  /// Euler criterion; zero counts as a square.
  bool is_square(const FieldElem& a) const;
  /// Tonelli-Shanks. Returns false when `a` is a non-residue.
  bool sqrt(const FieldElem& a, FieldElem& root) const;

 private:
  UInt256 add_raw(const UInt256& a, const UInt256& b) const;
  UInt256 sub_raw(const UInt256& a, const UInt256& b) const;
  UInt256 mont_mul(const UInt256& a, const UInt256& b) const;

  UInt256 p_;
  std::size_t n_ = 1;         // active limbs
  std::uint64_t neg_inv_ = 0; // -p^-1 mod 2^64
  UInt256 r2_;                // R^2 mod p
  FieldElem one_;             // R mod p
};

}  // namespace por
