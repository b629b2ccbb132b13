#include "por/ecc.hpp"

#include <fstream>

#include <json.hpp>

#include "por/error.hpp"
#include "por/sha256.hpp"

namespace por {
namespace {

UInt256 mod_add(const UInt256& a, const UInt256& b, const UInt256& n) {
  UInt256 s = a;
  if (s.add_carry(b) || s >= n) s.sub_borrow(n);
  return s;
}

UInt256 mod_mul(const UInt256& a, const UInt256& b, const UInt256& n) {
  return mul_wide(a, b).mod(n.resize<8>()).resize<4>();
}

UInt256 challenge_for(const Curve& curve, const Point& commitment, const Point& public_key,
                      std::span<const std::uint8_t> msg) {
  Sha256 h;
  h.update(curve.encode_point(commitment));
  h.update(curve.encode_point(public_key));
  h.update(msg);
  return UInt256::from_bytes(h.finalize()).mod(curve.order());
}

}  // namespace

UInt256 random_scalar(const Curve& curve, EntropySource& source) {
  const UInt256& n = curve.order();
  const std::size_t bits = n.bit_length();
  const std::size_t width = curve.scalar_bytes();
  const auto top_mask = static_cast<std::uint8_t>(bits % 8 == 0 ? 0xFF : (1U << (bits % 8)) - 1);
  Bytes buf(width);
  for (;;) {
    source.fill(buf);
    buf[0] &= top_mask;
    UInt256 k = UInt256::from_bytes(buf);
    if (!k.is_zero() && k < n) return k;
  }
}

KeyPair keygen(const Curve& curve, EntropySource& source) {
  UInt256 k = random_scalar(curve, source);
  return KeyPair{k, curve.mul(k, curve.generator())};
}

long message_capacity(const Curve& curve) { return static_cast<long>(curve.coordinate_bytes()) - 2; }

Point encode_message(const Curve& curve, std::span<const std::uint8_t> msg) {
  const long capacity = message_capacity(curve);
  if (capacity < 0 || static_cast<long>(msg.size()) > capacity) {
    throw Error(ErrorCode::MessageTooLong, "message of " + std::to_string(msg.size()) + " bytes exceeds capacity " +
                                               std::to_string(std::max(capacity, 0L)) + " on " + curve.name());
  }
  const PrimeField& f = curve.field();
  const auto& params = curve.params();
  Bytes x_bytes;
  x_bytes.push_back(static_cast<std::uint8_t>(msg.size()));
  x_bytes.insert(x_bytes.end(), msg.begin(), msg.end());
  x_bytes.push_back(0);
  for (unsigned counter = 0; counter < 256; ++counter) {
    x_bytes.back() = static_cast<std::uint8_t>(counter);
    UInt256 x = UInt256::from_bytes(x_bytes);
    if (x >= params.p) continue;
    FieldElem xe = f.from_int(x);
    FieldElem rhs = f.add(f.add(f.mul(f.sqr(xe), xe), f.mul(f.from_int(params.a), xe)), f.from_int(params.b));
    FieldElem y;
    if (!f.sqrt(rhs, y)) continue;
    UInt256 yi = f.to_int(y);
    UInt256 other = yi.is_zero() ? yi : params.p - yi;
    return Point::affine(x, std::min(yi, other));
  }
  throw Error(ErrorCode::EncodingFailed, "no counter value embeds the message on " + curve.name());
}

Bytes decode_message(const Curve& curve, const Point& pt) {
  if (pt.infinity) throw Error(ErrorCode::InvalidArgument, "infinity does not encode a message");
  const std::size_t w = curve.coordinate_bytes();
  if (w < 2) throw Error(ErrorCode::InvalidArgument, "curve too small to carry messages");
  auto full = pt.x.to_bytes();
  Bytes x(full.end() - static_cast<std::ptrdiff_t>(w), full.end());
  // x = 0…0 ‖ len ‖ msg ‖ counter
  std::size_t first = 0;
  while (first < w - 1 && x[first] == 0) ++first;
  if (first == w - 1) return {};
  const std::size_t len = w - 2 - first;
  if (x[first] != len) throw Error(ErrorCode::InvalidArgument, "point does not carry an encoded message");
  return Bytes(x.begin() + static_cast<std::ptrdiff_t>(first + 1), x.end() - 1);
}

Ciphertext ec_encrypt_with(const Curve& curve, const Point& public_key, const UInt256& r, const Point& message) {
  if (!curve.on_curve(public_key) || !curve.on_curve(message)) {
    throw Error(ErrorCode::PointNotOnCurve, "encryption inputs must lie on " + curve.name());
  }
  return Ciphertext{curve.add(curve.mul(r, public_key), message), curve.mul(r, curve.generator())};
}

Ciphertext ec_encrypt(const Curve& curve, const Point& public_key, EntropySource& source, const Point& message) {
  if (!curve.on_curve(public_key) || !curve.on_curve(message)) {
    throw Error(ErrorCode::PointNotOnCurve, "encryption inputs must lie on " + curve.name());
  }
  return ec_encrypt_with(curve, public_key, random_scalar(curve, source), message);
}

Point ec_decrypt(const Curve& curve, const Ciphertext& ct, const UInt256& k) {
  if (!curve.on_curve(ct.e1) || !curve.on_curve(ct.e2)) {
    throw Error(ErrorCode::PointNotOnCurve, "ciphertext points must lie on " + curve.name());
  }
  return curve.add(ct.e1, curve.negate(curve.mul(k, ct.e2)));
}

Signature sign(const Curve& curve, const KeyPair& keys, std::span<const std::uint8_t> msg, EntropySource& nonce_source) {
  const UInt256 r = random_scalar(curve, nonce_source);
  const Point commitment = curve.mul(r, curve.generator());
  const UInt256 e = challenge_for(curve, commitment, keys.K, msg);
  return Signature{e, mod_add(r, mod_mul(e, keys.k, curve.order()), curve.order())};
}

Signature sign(const Curve& curve, const UInt256& k, std::span<const std::uint8_t> msg, EntropySource& nonce_source) {
  return sign(curve, KeyPair{k, curve.mul(k, curve.generator())}, msg, nonce_source);
}

bool verify(const Curve& curve, const Point& public_key, std::span<const std::uint8_t> msg, const Signature& sig) {
  if (public_key.infinity || !curve.on_curve(public_key)) return false;
  if (sig.challenge >= curve.order() || sig.response >= curve.order()) return false;
  // R = s·G - e·K
  const Point commitment = curve.mul_add(sig.response, curve.generator(), sig.challenge, curve.negate(public_key));
  return challenge_for(curve, commitment, public_key, msg) == sig.challenge;
}

Bytes encode_signature(const Curve& curve, const Signature& sig) {
  Bytes out = curve.encode_scalar(sig.challenge);
  Bytes s = curve.encode_scalar(sig.response);
  out.insert(out.end(), s.begin(), s.end());
  return out;
}

Signature decode_signature(const Curve& curve, std::span<const std::uint8_t> bytes) {
  const std::size_t w = curve.scalar_bytes();
  if (bytes.size() != 2 * w) throw Error(ErrorCode::InvalidArgument, "signature encoding has wrong length");
  return Signature{curve.decode_scalar(bytes.first(w)), curve.decode_scalar(bytes.subspan(w))};
}

Bytes backup_key(const Curve& curve, const UInt256& k, std::span<const std::uint8_t> pad) {
  Bytes encoded = curve.encode_scalar(k);
  if (pad.size() != encoded.size()) {
    throw Error(ErrorCode::KeyLengthMismatch, "pad is " + std::to_string(pad.size()) + " bytes, key encoding is " +
                                                  std::to_string(encoded.size()));
  }
  for (std::size_t i = 0; i < encoded.size(); ++i) encoded[i] ^= pad[i];
  return encoded;
}

UInt256 restore_key(const Curve& curve, std::span<const std::uint8_t> encrypted, std::span<const std::uint8_t> pad) {
  if (pad.size() != encrypted.size() || encrypted.size() != curve.scalar_bytes()) {
    throw Error(ErrorCode::KeyLengthMismatch, "pad and backup must both be " + std::to_string(curve.scalar_bytes()) +
                                                  " bytes");
  }
  Bytes plain(encrypted.begin(), encrypted.end());
  for (std::size_t i = 0; i < plain.size(); ++i) plain[i] ^= pad[i];
  return curve.decode_scalar(plain);
}

void save_keypair(const std::filesystem::path& path, const Curve& curve, const KeyPair& keys) {
  nlohmann::ordered_json j;
  j["curve"] = curve.name();
  j["k"] = to_hex(curve.encode_scalar(keys.k));
  j["K"] = to_hex(curve.encode_point(keys.K));
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write key file " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

KeyFile load_keypair(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read key file " + path.string());
  KeyFile file;
  try {
    nlohmann::json j = nlohmann::json::parse(in);
    file.curve = &Curve::by_name(j.at("curve").get<std::string>());
    file.keys.K = file.curve->decode_point(from_hex(j.at("K").get<std::string>()));
    if (j.contains("k")) {
      file.keys.k = file.curve->decode_scalar(from_hex(j.at("k").get<std::string>()));
      if (!(file.curve->mul(file.keys.k, file.curve->generator()) == file.keys.K)) {
        throw Error(ErrorCode::ParseFailure, "key file " + path.string() + ": K does not match k");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseFailure, "key file " + path.string() + ": " + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseFailure) throw;
    throw Error(ErrorCode::ParseFailure, "key file " + path.string() + ": " + e.what());
  }
  return file;
}

}  // namespace por
