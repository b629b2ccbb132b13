#include "por/curve.hpp"

#include "por/error.hpp"

namespace por {
namespace {

UInt256 hex256(std::string_view hex) {
  std::string padded(64 - hex.size(), '0');
  padded.append(hex);
  return UInt256::from_hex(padded);
}

}  // namespace

Curve::Curve(CurveParams params)
    : params_(std::move(params)),
      field_(params_.p),
      a_(field_.from_int(params_.a)),
      b_(field_.from_int(params_.b)),
      a_is_zero_(params_.a.is_zero()),
      a_is_minus_three_(params_.a == params_.p - UInt256(3)) {
  // 4a^3 + 27b^2 != 0
  FieldElem four = field_.from_int(UInt256(4)), twenty_seven = field_.from_int(UInt256(27));
  FieldElem disc = field_.add(field_.mul(four, field_.mul(a_, field_.sqr(a_))), field_.mul(twenty_seven, field_.sqr(b_)));
  if (field_.is_zero(disc)) throw Error(ErrorCode::InvalidArgument, "singular curve " + params_.name);
  if (params_.g.infinity || !on_curve(params_.g)) {
    throw Error(ErrorCode::PointNotOnCurve, "base point of " + params_.name + " is not on the curve");
  }
  if (params_.order.is_zero() || !mul(params_.order, params_.g).infinity) {
    throw Error(ErrorCode::InvalidArgument, "order·G is not infinity on " + params_.name);
  }
  Jacobian acc{field_.from_int(params_.g.x), field_.from_int(params_.g.y), field_.one(), false};
  for (std::size_t i = 0; i < params_.order.bit_length(); ++i) {
    g_table_.push_back(to_affine_elems(to_point(acc)));
    acc = jacobian_double(acc);
  }
}

const Curve& Curve::toy() {
  static const Curve curve(CurveParams{"toy", UInt256(17), UInt256(0), UInt256(7),
                                       Point::affine(UInt256(15), UInt256(13)), UInt256(18)});
  return curve;
}

const Curve& Curve::test64() {
  static const Curve curve(CurveParams{
      "test64", hex256("ffffffffffffffc5"), hex256("ffffffffffffffc2"), UInt256(363),
      Point::affine(hex256("322f24c15cc25c0d"), hex256("0021775919dc4d9c")), hex256("ffffffff3fc141c5")});
  return curve;
}

const Curve& Curve::secp256k1() {
  static const Curve curve(CurveParams{
      "secp256k1", hex256("fffffffffffffffffffffffffffffffffffffffffffffffffffffffefffffc2f"), UInt256(0), UInt256(7),
      Point::affine(hex256("79be667ef9dcbbac55a06295ce870b07029bfcdb2dce28d959f2815b16f81798"),
                    hex256("483ada7726a3c4655da4fbfc0e1108a8fd17b448a68554199c47d08ffb10d4b8")),
      hex256("fffffffffffffffffffffffffffffffebaaedce6af48a03bbfd25e8cd0364141")});
  return curve;
}

const Curve& Curve::by_name(std::string_view name) {
  if (name == "toy") return toy();
  if (name == "test64") return test64();
  if (name == "secp256k1") return secp256k1();
  throw Error(ErrorCode::InvalidArgument, "unknown curve '" + std::string(name) + "'");
}

bool Curve::on_curve(const Point& pt) const {
  if (pt.infinity) return true;
  if (pt.x >= params_.p || pt.y >= params_.p) return false;
  FieldElem x = field_.from_int(pt.x), y = field_.from_int(pt.y);
  FieldElem rhs = field_.add(field_.add(field_.mul(field_.sqr(x), x), field_.mul(a_, x)), b_);
  return field_.sqr(y) == rhs;
}

void Curve::require_on_curve(const Point& pt) const {
  if (!on_curve(pt)) throw Error(ErrorCode::PointNotOnCurve, "point is not on " + params_.name);
}

Point Curve::negate(const Point& pt) const {
  if (pt.infinity) return pt;
  return Point::affine(pt.x, pt.y.is_zero() ? pt.y : params_.p - pt.y);
}

Point Curve::add(const Point& lhs, const Point& rhs) const {
  require_on_curve(lhs);
  require_on_curve(rhs);
  if (lhs.infinity) return rhs;
  if (rhs.infinity) return lhs;

  FieldElem x1 = field_.from_int(lhs.x), y1 = field_.from_int(lhs.y);
  FieldElem x2 = field_.from_int(rhs.x), y2 = field_.from_int(rhs.y);
  FieldElem slope;
  if (x1 == x2) {
    if (field_.is_zero(field_.add(y1, y2))) return Point::at_infinity();
    FieldElem three = field_.from_int(UInt256(3));
    FieldElem num = field_.add(field_.mul(three, field_.sqr(x1)), a_);
    slope = field_.mul(num, field_.inv(field_.add(y1, y1)));
  } else {
    slope = field_.mul(field_.sub(y2, y1), field_.inv(field_.sub(x2, x1)));
  }
  FieldElem x3 = field_.sub(field_.sub(field_.sqr(slope), x1), x2);
  FieldElem y3 = field_.sub(field_.mul(slope, field_.sub(x1, x3)), y1);
  return Point::affine(field_.to_int(x3), field_.to_int(y3));
}

Curve::Affine Curve::to_affine_elems(const Point& pt) const {
  if (pt.infinity) return Affine{};
  return Affine{field_.from_int(pt.x), field_.from_int(pt.y), false};
}

Point Curve::to_point(const Jacobian& j) const {
  if (j.infinity) return Point::at_infinity();
  FieldElem zinv = field_.inv(j.z);
  FieldElem zinv2 = field_.sqr(zinv);
  return Point::affine(field_.to_int(field_.mul(j.x, zinv2)), field_.to_int(field_.mul(j.y, field_.mul(zinv2, zinv))));
}

Curve::Jacobian Curve::jacobian_double(const Jacobian& j) const {
  if (j.infinity || field_.is_zero(j.y)) return Jacobian{};
  const PrimeField& f = field_;
  FieldElem xx = a_is_minus_three_ ? FieldElem{} : f.sqr(j.x);
  FieldElem yy = f.sqr(j.y);
  FieldElem yyyy = f.sqr(yy);
  FieldElem s = f.mul(j.x, yy);
  s = f.add(s, s);
  s = f.add(s, s);
  FieldElem m;
  if (a_is_minus_three_) {
    // 3x^2 + a z^4 = 3 (x - z^2)(x + z^2)
    FieldElem zz = f.sqr(j.z);
    FieldElem t = f.mul(f.sub(j.x, zz), f.add(j.x, zz));
    m = f.add(f.add(t, t), t);
  } else {
    m = f.add(f.add(xx, xx), xx);
  }
  if (!a_is_zero_ && !a_is_minus_three_) {
    FieldElem zz = f.sqr(j.z);
    m = f.add(m, f.mul(a_, f.sqr(zz)));
  }
  FieldElem x3 = f.sub(f.sqr(m), f.add(s, s));
  FieldElem eight_yyyy = f.add(yyyy, yyyy);
  eight_yyyy = f.add(eight_yyyy, eight_yyyy);
  eight_yyyy = f.add(eight_yyyy, eight_yyyy);
  FieldElem y3 = f.sub(f.mul(m, f.sub(s, x3)), eight_yyyy);
  FieldElem z3 = f.mul(j.y, j.z);
  z3 = f.add(z3, z3);
  return Jacobian{x3, y3, z3, false};
}

Curve::Jacobian Curve::jacobian_add_mixed(const Jacobian& j, const Affine& q) const {
  if (q.infinity) return j;
  if (j.infinity) return Jacobian{q.x, q.y, field_.one(), false};
  const PrimeField& f = field_;
  FieldElem z1z1 = f.sqr(j.z);
  FieldElem u2 = f.mul(q.x, z1z1);
  FieldElem s2 = f.mul(q.y, f.mul(j.z, z1z1));
  FieldElem h = f.sub(u2, j.x);
  FieldElem r = f.sub(s2, j.y);
  if (f.is_zero(h)) {
    if (f.is_zero(r)) return jacobian_double(j);
    return Jacobian{};
  }
  FieldElem hh = f.sqr(h);
  FieldElem hhh = f.mul(h, hh);
  FieldElem v = f.mul(j.x, hh);
  FieldElem x3 = f.sub(f.sub(f.sqr(r), hhh), f.add(v, v));
  FieldElem y3 = f.sub(f.mul(r, f.sub(v, x3)), f.mul(j.y, hhh));
  FieldElem z3 = f.mul(j.z, h);
  return Jacobian{x3, y3, z3, false};
}

Point Curve::mul(const UInt256& k, const Point& pt) const {
  if (!g_table_.empty() && pt == params_.g && k.bit_length() <= g_table_.size()) {
    Jacobian acc;
    for (std::size_t i = 0; i < k.bit_length(); ++i) {
      if (k.bit(i)) acc = jacobian_add_mixed(acc, g_table_[i]);
    }
    return to_point(acc);
  }
  require_on_curve(pt);
  const Affine base = to_affine_elems(pt);
  Jacobian acc;
  for (std::size_t i = k.bit_length(); i-- > 0;) {
    acc = jacobian_double(acc);
    if (k.bit(i)) acc = jacobian_add_mixed(acc, base);
  }
  return to_point(acc);
}

Point Curve::mul_add(const UInt256& j, const Point& p, const UInt256& k, const Point& q) const {
  require_on_curve(p);
  require_on_curve(q);
  const Affine pa = to_affine_elems(p);
  const Affine qa = to_affine_elems(q);
  const Affine pq = to_affine_elems(add(p, q));
  Jacobian acc;
  for (std::size_t i = std::max(j.bit_length(), k.bit_length()); i-- > 0;) {
    acc = jacobian_double(acc);
    bool bj = j.bit(i), bk = k.bit(i);
    if (bj && bk) {
      acc = jacobian_add_mixed(acc, pq);
    } else if (bj) {
      acc = jacobian_add_mixed(acc, pa);
    } else if (bk) {
      acc = jacobian_add_mixed(acc, qa);
    }
  }
  return to_point(acc);
}

Bytes Curve::encode_point(const Point& pt) const {
  const std::size_t w = coordinate_bytes();
  Bytes out;
  out.reserve(1 + 2 * w);
  out.push_back(pt.infinity ? 0x00 : 0x04);
  auto put = [&](const UInt256& v) {
    auto full = v.to_bytes();
    out.insert(out.end(), full.end() - static_cast<std::ptrdiff_t>(w), full.end());
  };
  put(pt.infinity ? UInt256() : pt.x);
  put(pt.infinity ? UInt256() : pt.y);
  return out;
}

Point Curve::decode_point(std::span<const std::uint8_t> bytes) const {
  const std::size_t w = coordinate_bytes();
  if (bytes.size() != 1 + 2 * w) throw Error(ErrorCode::InvalidArgument, "point encoding has wrong length");
  UInt256 x = UInt256::from_bytes(bytes.subspan(1, w));
  UInt256 y = UInt256::from_bytes(bytes.subspan(1 + w, w));
  if (bytes[0] == 0x00) {
    if (!x.is_zero() || !y.is_zero()) throw Error(ErrorCode::InvalidArgument, "non-canonical infinity encoding");
    return Point::at_infinity();
  }
  if (bytes[0] != 0x04) throw Error(ErrorCode::InvalidArgument, "unknown point tag");
  Point pt = Point::affine(x, y);
  require_on_curve(pt);
  return pt;
}

Bytes Curve::encode_scalar(const UInt256& k) const {
  const std::size_t w = scalar_bytes();
  if (k.bit_length() > 8 * w) throw Error(ErrorCode::InvalidArgument, "scalar wider than the group order");
  auto full = k.to_bytes();
  return Bytes(full.end() - static_cast<std::ptrdiff_t>(w), full.end());
}

UInt256 Curve::decode_scalar(std::span<const std::uint8_t> bytes) const {
  if (bytes.size() != scalar_bytes()) throw Error(ErrorCode::InvalidArgument, "scalar encoding has wrong length");
  return UInt256::from_bytes(bytes);
}

std::vector<Point> Curve::enumerate_points() const {
  if (params_.p.bit_length() > 16) throw Error(ErrorCode::InvalidArgument, "enumeration only for tiny fields");
  std::vector<Point> pts{Point::at_infinity()};
  const std::uint64_t p = params_.p.limb(0);
  for (std::uint64_t x = 0; x < p; ++x) {
    for (std::uint64_t y = 0; y < p; ++y) {
      Point pt = Point::affine(UInt256(x), UInt256(y));
      if (on_curve(pt)) pts.push_back(pt);
    }
  }
  return pts;
}

}  // namespace por
