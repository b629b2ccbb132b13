#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>

#include "por/curve.hpp"
#include "por/encoding.hpp"
#include "por/entropy.hpp"

namespace por {

struct KeyPair {
  UInt256 k;  // private scalar in [1, order-1]
  Point K;    // k·G

  friend bool operator==(const KeyPair&, const KeyPair&) = default;
};

/// EC ElGamal ciphertext: e1 = R·K + D, e2 = R·G.
struct Ciphertext {
  Point e1;
  Point e2;

  friend bool operator==(const Ciphertext&, const Ciphertext&) = default;
};

/// Schnorr signature (challenge, response).
struct Signature {
  UInt256 challenge;
  UInt256 response;

  friend bool operator==(const Signature&, const Signature&) = default;
};

/// Uniform scalar in [1, order-1], rejection-sampled from whole bytes.
UInt256 random_scalar(const Curve& curve, EntropySource& source);

KeyPair keygen(const Curve& curve, EntropySource& source);

/// Largest message `encode_message` accepts on this curve (may be negative
/// for tiny curves, meaning nothing fits).
long message_capacity(const Curve& curve);

/// Embeds a short message as a curve point by trial increment of a trailing
/// counter byte. x = msg ‖ len ‖ counter would risk x ≥ p, so the layout is
/// x = len ‖ msg ‖ counter, right-aligned in the coordinate width.
Point encode_message(const Curve& curve, std::span<const std::uint8_t> msg);
Bytes decode_message(const Curve& curve, const Point& pt);

/// Draws R from `source`.
Ciphertext ec_encrypt(const Curve& curve, const Point& public_key, EntropySource& source, const Point& message);
/// Explicit R, for reproducible checks. R must be in [1, order-1].
Ciphertext ec_encrypt_with(const Curve& curve, const Point& public_key, const UInt256& r, const Point& message);
/// e1 - k·e2.
Point ec_decrypt(const Curve& curve, const Ciphertext& ct, const UInt256& k);

/// Fresh nonce from `nonce_source` per call; reusing a nonce leaks k.
Signature sign(const Curve& curve, const KeyPair& keys, std::span<const std::uint8_t> msg, EntropySource& nonce_source);
/// Derives K = k·G first.
Signature sign(const Curve& curve, const UInt256& k, std::span<const std::uint8_t> msg, EntropySource& nonce_source);
bool verify(const Curve& curve, const Point& public_key, std::span<const std::uint8_t> msg, const Signature& sig);

/// challenge ‖ response, each fixed-width big-endian.
Bytes encode_signature(const Curve& curve, const Signature& sig);
Signature decode_signature(const Curve& curve, std::span<const std::uint8_t> bytes);

/// One-time pad over the fixed-width scalar encoding: E = enc(k) XOR q.
Bytes backup_key(const Curve& curve, const UInt256& k, std::span<const std::uint8_t> pad);
UInt256 restore_key(const Curve& curve, std::span<const std::uint8_t> encrypted, std::span<const std::uint8_t> pad);

/// Key file: {"curve": name, "k": hex, "K": hex point}. `k` may be omitted
/// for public-only files.
struct KeyFile {
  const Curve* curve = nullptr;
  KeyPair keys;
};

void save_keypair(const std::filesystem::path& path, const Curve& curve, const KeyPair& keys);
KeyFile load_keypair(const std::filesystem::path& path);

}  // namespace por
