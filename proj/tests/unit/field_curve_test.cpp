#include <gtest/gtest.h>

#include <optional>
#include <set>

#include "oracle.hpp"
#include "por/curve.hpp"
#include "por/error.hpp"
#include "por/field.hpp"

using oracle::big;
using por::Curve;
using por::Point;
using por::UInt256;

namespace {

// Textbook affine arithmetic over big integers, used as the reference group law.
struct AffineOracle {
  big p, a;

  static big mod(big v, const big& m) {
    v %= m;
    return v < 0 ? v + m : v;
  }
  big inv(const big& v) const { return boost::multiprecision::powm(mod(v, p), p - 2, p); }

  std::optional<std::pair<big, big>> add(std::optional<std::pair<big, big>> P,
                                         std::optional<std::pair<big, big>> Q) const {
    if (!P) return Q;
    if (!Q) return P;
    auto [x1, y1] = *P;
    auto [x2, y2] = *Q;
    big lambda;
    if (x1 == x2) {
      if (mod(y1 + y2, p) == 0) return std::nullopt;
      lambda = mod((3 * x1 * x1 + a) * inv(2 * y1), p);
    } else {
      lambda = mod((y2 - y1) * inv(x2 - x1), p);
    }
    big x3 = mod(lambda * lambda - x1 - x2, p);
    big y3 = mod(lambda * (x1 - x3) - y1, p);
    return std::make_pair(x3, y3);
  }
};

std::optional<std::pair<big, big>> to_oracle(const Point& pt) {
  if (pt.infinity) return std::nullopt;
  return std::make_pair(oracle::to_big(pt.x), oracle::to_big(pt.y));
}

AffineOracle oracle_for(const Curve& c) { return {oracle::to_big(c.params().p), oracle::to_big(c.params().a)}; }

TEST(Field, Test64OpsMatchBigInteger) {
  const auto& f = Curve::test64().field();
  const big p = oracle::to_big(f.modulus());
  std::mt19937_64 rng(41);
  for (int i = 0; i < 3000; ++i) {
    UInt256 a(rng()), b(rng());
    big A = oracle::to_big(a) % p, B = oracle::to_big(b) % p;
    auto fa = f.from_int(a), fb = f.from_int(b);
    EXPECT_EQ(oracle::to_big(f.to_int(f.add(fa, fb))), (A + B) % p);
    EXPECT_EQ(oracle::to_big(f.to_int(f.sub(fa, fb))), ((A - B) % p + p) % p);
    EXPECT_EQ(oracle::to_big(f.to_int(f.mul(fa, fb))), (A * B) % p);
    if (A != 0) EXPECT_EQ(oracle::to_big(f.to_int(f.inv(fa))), boost::multiprecision::powm(A, p - 2, p));
  }
}

TEST(Field, MultiLimbOpsMatchBigInteger) {
  const auto& f = Curve::secp256k1().field();
  const big p = oracle::to_big(f.modulus());
  std::mt19937_64 rng(42);
  for (int i = 0; i < 2000; ++i) {
    UInt256 a = oracle::random_uint<4>(rng), b = oracle::random_uint<4>(rng);
    big A = oracle::to_big(a) % p, B = oracle::to_big(b) % p;
    auto fa = f.from_int(a), fb = f.from_int(b);
    EXPECT_EQ(oracle::to_big(f.to_int(f.add(fa, fb))), (A + B) % p);
    EXPECT_EQ(oracle::to_big(f.to_int(f.sub(fa, fb))), ((A - B) % p + p) % p);
    EXPECT_EQ(oracle::to_big(f.to_int(f.mul(fa, fb))), (A * B) % p);
  }
}

TEST(Field, SquareRoots) {
  for (const Curve* c : {&Curve::toy(), &Curve::test64(), &Curve::secp256k1()}) {
    const auto& f = c->field();
    std::mt19937_64 rng(43);
    for (int i = 0; i < 200; ++i) {
      auto x = f.from_int(oracle::random_uint<4>(rng));
      auto sq = f.sqr(x);
      EXPECT_TRUE(f.is_square(sq));
      por::FieldElem root;
      ASSERT_TRUE(f.sqrt(sq, root));
      EXPECT_EQ(f.sqr(root), sq);
    }
  }
  // Exhaustive residue check on F_17 against brute force.
  const auto& f = Curve::toy().field();
  std::set<std::uint64_t> squares;
  for (std::uint64_t v = 0; v < 17; ++v) squares.insert(v * v % 17);
  for (std::uint64_t v = 0; v < 17; ++v) {
    por::FieldElem root;
    EXPECT_EQ(f.sqrt(f.from_int(UInt256(v)), root), squares.count(v) == 1) << v;
  }
}

TEST(Curve, ToyEnumeration) {
  const auto& c = Curve::toy();
  auto pts = c.enumerate_points();
  ASSERT_EQ(pts.size(), 18u);
  EXPECT_TRUE(pts.front().infinity);
  std::size_t brute = 1;
  for (std::uint64_t x = 0; x < 17; ++x)
    for (std::uint64_t y = 0; y < 17; ++y) brute += (y * y) % 17 == (x * x * x + 7) % 17;
  EXPECT_EQ(brute, 18u);
  for (const auto& p : pts) EXPECT_TRUE(c.on_curve(p));
  EXPECT_TRUE(c.on_curve(Point::affine(UInt256(15), UInt256(13))));
  EXPECT_TRUE(c.on_curve(Point::affine(UInt256(1), UInt256(5))));
  EXPECT_FALSE(c.on_curve(Point::affine(UInt256(0), UInt256(0))));
  EXPECT_FALSE(c.on_curve(Point::affine(UInt256(17), UInt256(0))));
}

TEST(Curve, ToyAdditionTableMatchesOracle) {
  const auto& c = Curve::toy();
  auto ref = oracle_for(c);
  auto pts = c.enumerate_points();
  for (const auto& P : pts) {
    for (const auto& Q : pts) {
      Point R = c.add(P, Q);
      ASSERT_EQ(to_oracle(R), ref.add(to_oracle(P), to_oracle(Q)));
      ASSERT_TRUE(c.on_curve(R));
    }
  }
}

TEST(Curve, ToyGroupAxiomsExhaustive) {
  const auto& c = Curve::toy();
  auto pts = c.enumerate_points();
  const Point O = Point::at_infinity();
  for (const auto& P : pts) {
    EXPECT_EQ(c.add(P, O), P);
    EXPECT_EQ(c.add(P, c.negate(P)), O);
    for (const auto& Q : pts) {
      EXPECT_EQ(c.add(P, Q), c.add(Q, P));
      for (const auto& R : pts) ASSERT_EQ(c.add(c.add(P, Q), R), c.add(P, c.add(Q, R)));
    }
  }
}

TEST(Curve, ToyGeneratorSpansGroup) {
  const auto& c = Curve::toy();
  std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
  Point acc = Point::at_infinity();
  for (int i = 0; i < 18; ++i) {
    EXPECT_EQ(c.mul(UInt256(static_cast<std::uint64_t>(i)), c.generator()), acc);
    seen.insert(acc.infinity ? std::pair<std::uint64_t, std::uint64_t>(99, 99)
                             : std::pair<std::uint64_t, std::uint64_t>(acc.x.limb(0), acc.y.limb(0)));
    acc = c.add(acc, c.generator());
  }
  EXPECT_TRUE(acc.infinity);
  EXPECT_EQ(seen.size(), 18u);
}

TEST(Curve, ToyDistributivityExhaustive) {
  const auto& c = Curve::toy();
  for (const auto& P : c.enumerate_points()) {
    for (std::uint64_t j = 0; j < 18; ++j) {
      for (std::uint64_t k = 0; k < 18; ++k) {
        ASSERT_EQ(c.add(c.mul(UInt256(j), P), c.mul(UInt256(k), P)), c.mul(UInt256(j + k), P));
      }
    }
  }
}

TEST(Curve, ScalarMulMatchesRepeatedAdditionAndDistributes) {
  for (const Curve* c : {&Curve::toy(), &Curve::test64(), &Curve::secp256k1()}) {
    std::mt19937_64 rng(44);
    Point acc = Point::at_infinity();
    const Point P = c->mul(UInt256(5), c->generator());
    for (std::uint64_t k = 0; k < 40; ++k) {
      EXPECT_EQ(c->mul(UInt256(k), P), acc) << c->name() << " k=" << k;
      acc = c->add(acc, P);
    }
    for (int i = 0; i < 20; ++i) {
      UInt256 j(rng() >> 2), k(rng() >> 2);
      EXPECT_EQ(c->add(c->mul(j, P), c->mul(k, P)), c->mul(j + k, P));
      EXPECT_EQ(c->mul_add(j, c->generator(), k, P), c->add(c->mul(j, c->generator()), c->mul(k, P)));
    }
  }
}

TEST(Curve, Test64AgainstOracleChain) {
  const auto& c = Curve::test64();
  auto ref = oracle_for(c);
  auto G = to_oracle(c.generator());
  auto acc = G;
  Point P = c.generator();
  for (int i = 0; i < 300; ++i) {
    acc = ref.add(acc, G);
    P = c.add(P, c.generator());
    ASSERT_EQ(to_oracle(P), acc);
  }
  // Doubling chain.
  auto d = G;
  Point Q = c.generator();
  for (int i = 0; i < 64; ++i) {
    d = ref.add(d, d);
    Q = c.twice(Q);
    ASSERT_EQ(to_oracle(Q), d);
  }
}

TEST(Curve, GeneratorOrders) {
  for (const Curve* c : {&Curve::toy(), &Curve::test64(), &Curve::secp256k1()}) {
    EXPECT_TRUE(c->mul(c->order(), c->generator()).infinity) << c->name();
    EXPECT_FALSE(c->mul(c->order() - UInt256(1), c->generator()).infinity) << c->name();
  }
  // test64 order is prime, so no proper divisor annihilates G.
  const big n = oracle::to_big(Curve::test64().order());
  EXPECT_TRUE(boost::multiprecision::miller_rabin_test(n, 40));
}

TEST(Curve, Secp256k1KnownMultiple) {
  const auto& c = Curve::secp256k1();
  Point g2 = c.twice(c.generator());
  EXPECT_EQ(g2.x.to_hex(), "c6047f9441ed7d6d3045406e95c07cd85c778e4b8cef3ca7abac09b95c709ee5");
  EXPECT_EQ(g2.y.to_hex(), "1ae168fea63dc339a3c58419466ceaeef7f632653266d0e1236431a950cfe52a");
}

TEST(Curve, PointAndScalarEncoding) {
  const auto& c = Curve::test64();
  std::mt19937_64 rng(45);
  for (int i = 0; i < 50; ++i) {
    Point P = c.mul(UInt256(rng()), c.generator());
    auto enc = c.encode_point(P);
    EXPECT_EQ(enc.size(), 1 + 2 * c.coordinate_bytes());
    EXPECT_EQ(c.decode_point(enc), P);
  }
  auto inf = c.encode_point(Point::at_infinity());
  EXPECT_TRUE(c.decode_point(inf).infinity);
  auto bad = c.encode_point(c.generator());
  bad.back() ^= 1;
  EXPECT_THROW(c.decode_point(bad), por::Error);
  UInt256 k(0x1234);
  EXPECT_EQ(c.decode_scalar(c.encode_scalar(k)), k);
  EXPECT_EQ(c.encode_scalar(k).size(), c.scalar_bytes());
}

TEST(Curve, RejectsOffCurveAndBadParameters) {
  const auto& c = Curve::toy();
  Point off = Point::affine(UInt256(0), UInt256(0));
  try {
    c.add(off, c.generator());
    FAIL();
  } catch (const por::Error& e) {
    EXPECT_EQ(e.code(), por::ErrorCode::PointNotOnCurve);
  }
  EXPECT_THROW(Curve::by_name("p256"), por::Error);
  // Singular: a = b = 0.
  EXPECT_THROW(Curve(por::CurveParams{"bad", UInt256(17), UInt256(0), UInt256(0),
                                      Point::affine(UInt256(1), UInt256(1)), UInt256(17)}),
               por::Error);
  // Wrong order.
  EXPECT_THROW(Curve(por::CurveParams{"bad", UInt256(17), UInt256(0), UInt256(7),
                                      Point::affine(UInt256(15), UInt256(13)), UInt256(17)}),
               por::Error);
}

}  // namespace
