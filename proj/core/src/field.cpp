#include "por/field.hpp"

#include <array>

#include "por/error.hpp"

namespace por {

PrimeField::PrimeField(const UInt256& p) : p_(p), n_(p.limb_count()) {
  if (!p.bit(0) || p < UInt256(3)) throw Error(ErrorCode::InvalidArgument, "field modulus must be an odd prime");

  // Newton iteration for p^-1 mod 2^64.
  std::uint64_t inv = 1;
  for (int i = 0; i < 6; ++i) inv *= 2 - p.limb(0) * inv;
  neg_inv_ = ~inv + 1;

  // R mod p and R^2 mod p by repeated doubling, R = 2^(64 n).
  UInt256 r(1);
  for (std::size_t i = 0; i < 64 * n_; ++i) r = add_raw(r, r);
  one_ = FieldElem{r};
  for (std::size_t i = 0; i < 64 * n_; ++i) r = add_raw(r, r);
  r2_ = r;
}

UInt256 PrimeField::add_raw(const UInt256& a, const UInt256& b) const {
  UInt256 s = a;
  bool carry = s.add_carry(b);
  if (carry || s >= p_) s.sub_borrow(p_);
  return s;
}

// CIOS Montgomery product a*b*R^-1 mod p over n_ limbs.
UInt256 PrimeField::mont_mul(const UInt256& a, const UInt256& b) const {
  const std::size_t n = n_;
  std::array<std::uint64_t, 6> t{};
  for (std::size_t i = 0; i < n; ++i) {
    u128 c = 0;
    const std::uint64_t bi = b.limb(i);
    for (std::size_t j = 0; j < n; ++j) {
      c += static_cast<u128>(a.limb(j)) * bi + t[j];
      t[j] = static_cast<std::uint64_t>(c);
      c >>= 64;
    }
    c += t[n];
    t[n] = static_cast<std::uint64_t>(c);
    t[n + 1] = static_cast<std::uint64_t>(c >> 64);

    const std::uint64_t m = t[0] * neg_inv_;
    c = static_cast<u128>(m) * p_.limb(0) + t[0];
    c >>= 64;
    for (std::size_t j = 1; j < n; ++j) {
      c += static_cast<u128>(m) * p_.limb(j) + t[j];
      t[j - 1] = static_cast<std::uint64_t>(c);
      c >>= 64;
    }
    c += t[n];
    t[n - 1] = static_cast<std::uint64_t>(c);
    t[n] = t[n + 1] + static_cast<std::uint64_t>(c >> 64);
  }
  UInt256 r;
  for (std::size_t j = 0; j < n; ++j) r.limb(j) = t[j];
  if (t[n] != 0 || r >= p_) {
    r.sub_borrow(p_);
    for (std::size_t j = n; j < UInt256::kLimbs; ++j) r.limb(j) = 0;
  }
  return r;
}

FieldElem PrimeField::from_int(const UInt256& x) const { return FieldElem{mont_mul(x.mod(p_), r2_)}; }

UInt256 PrimeField::to_int(const FieldElem& e) const { return mont_mul(e.mont, UInt256(1)); }

UInt256 PrimeField::sub_raw(const UInt256& a, const UInt256& b) const {
  UInt256 d = a;
  if (d.sub_borrow(b)) d.add_carry(p_);
  return d;
}

FieldElem PrimeField::pow(const FieldElem& base, const UInt256& exponent) const {
  FieldElem r = one_;
  for (std::size_t i = exponent.bit_length(); i-- > 0;) {
    r = sqr(r);
    if (exponent.bit(i)) r = mul(r, base);
  }
  return r;
}

FieldElem PrimeField::inv(const FieldElem& a) const {
  if (is_zero(a)) throw Error(ErrorCode::InvalidArgument, "inverse of zero");
  return pow(a, p_ - UInt256(2));
}

bool PrimeField::is_square(const FieldElem& a) const {
  if (is_zero(a)) return true;
  return pow(a, (p_ - UInt256(1)) >> 1) == one_;
}

bool PrimeField::sqrt(const FieldElem& a, FieldElem& root) const {
  if (is_zero(a)) {
    root = zero();
    return true;
  }
  if (!is_square(a)) return false;

  // p - 1 = q * 2^s with q odd.
  UInt256 q = p_ - UInt256(1);
  std::size_t s = 0;
  while (!q.bit(0)) {
    q = q >> 1;
    ++s;
  }
  if (s == 1) {
    root = pow(a, (p_ + UInt256(1)) >> 2);
    return true;
  }

  FieldElem z = from_int(UInt256(2));
  while (is_square(z)) z = add(z, one_);

  std::size_t m = s;
  FieldElem c = pow(z, q);
  FieldElem t = pow(a, q);
  FieldElem r = pow(a, (q + UInt256(1)) >> 1);
  while (!(t == one_)) {
    std::size_t i = 0;
    for (FieldElem tt = t; !(tt == one_); tt = sqr(tt)) ++i;
    FieldElem b = c;
    for (std::size_t j = 0; j + i + 1 < m; ++j) b = sqr(b);
    m = i;
    c = sqr(b);
    t = mul(t, c);
    r = mul(r, b);
  }
  root = r;
  return true;
}

}  // namespace por
