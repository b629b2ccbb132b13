#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "por/encoding.hpp"
#include "por/field.hpp"
#include "por/uint.hpp"

namespace por {

/// Affine point in integer coordinates, or the point at infinity.
struct Point {
  bool infinity = true;
  UInt256 x;
  UInt256 y;

  static Point at_infinity() { return Point{}; }
  static Point affine(const UInt256& x, const UInt256& y) { return Point{false, x, y}; }

  friend bool operator==(const Point& a, const Point& b) {
    if (a.infinity || b.infinity) return a.infinity == b.infinity;
    return a.x == b.x && a.y == b.y;
  }
};

/// Short Weierstrass curve y^2 = x^3 + a x + b over F_p, base point G of
/// order `order`.
struct CurveParams {
  std::string name;
  UInt256 p;
  UInt256 a;
  UInt256 b;
  Point g;
  UInt256 order;
};

/// Group operations on one curve. Not constant time.
class Curve {
 public:
  /// Validates the discriminant and that G lies on the curve with order·G = ∞.
  explicit Curve(CurveParams params);

  /// p = 17, a = 0, b = 7; 18 points, G = (15, 13) generates all of them.
  static const Curve& toy();
  /// p = 2^64 - 59, a = -3, b = 363; prime group order.
  static const Curve& test64();
  static const Curve& secp256k1();
  /// "toy", "test64" or "secp256k1"; throws InvalidArgument otherwise.
  static const Curve& by_name(std::string_view name);

  const CurveParams& params() const noexcept { return params_; }
  const std::string& name() const noexcept { return params_.name; }
  const PrimeField& field() const noexcept { return field_; }
  const Point& generator() const noexcept { return params_.g; }
  const UInt256& order() const noexcept { return params_.order; }

  std::size_t coordinate_bytes() const noexcept { return field_.byte_width(); }
  std::size_t scalar_bytes() const noexcept { return (params_.order.bit_length() + 7) / 8; }

  bool on_curve(const Point& pt) const;
  Point negate(const Point& pt) const;
  /// Chord-tangent addition; throws PointNotOnCurve for off-curve inputs.
  Point add(const Point& lhs, const Point& rhs) const;
  Point twice(const Point& pt) const { return add(pt, pt); }
  /// k·P by double-and-add. Any k ≥ 0 is accepted; k is not reduced.
  Point mul(const UInt256& k, const Point& pt) const;
  /// j·P + k·Q with a shared doubling chain.
  Point mul_add(const UInt256& j, const Point& p, const UInt256& k, const Point& q) const;

  /// Tag byte (0x00 infinity, 0x04 affine) then fixed-width big-endian x, y.
  Bytes encode_point(const Point& pt) const;
  Point decode_point(std::span<const std::uint8_t> bytes) const;

  Bytes encode_scalar(const UInt256& k) const;
  UInt256 decode_scalar(std::span<const std::uint8_t> bytes) const;

  /// Every point of the group, infinity first. Only sensible for tiny p.
  std::vector<Point> enumerate_points() const;

 private:
  struct Jacobian {
    FieldElem x, y, z;
    bool infinity = true;
  };
  struct Affine {
    FieldElem x, y;
    bool infinity = true;
  };

  void require_on_curve(const Point& pt) const;
  Affine to_affine_elems(const Point& pt) const;
  Point to_point(const Jacobian& j) const;
  Jacobian jacobian_double(const Jacobian& j) const;
  Jacobian jacobian_add_mixed(const Jacobian& j, const Affine& q) const;

  CurveParams params_;
  PrimeField field_;
  FieldElem a_;
  FieldElem b_;
  bool a_is_zero_ = false;
  bool a_is_minus_three_ = false;
  // 2^i·G for i below the order's bit length; empty while the constructor validates G.
  std::vector<Affine> g_table_;
};

}  // namespace por
