#pragma once

#include <optional>

#include "codewe/crypto/bytes.hpp"

namespace codewe::crypto {

struct PublicKeyTag {};
struct SignatureTag {};

using PublicKey = FixedBytes<32, PublicKeyTag>;
using Signature = FixedBytes<64, SignatureTag>;

/// 32-byte Ed25519 seed. Wiped on destruction; never rendered implicitly.
class PrivateKey {
 public:
  PrivateKey() = default;
  explicit PrivateKey(const std::array<std::uint8_t, 32>& seed) noexcept : seed_(seed) {}
  PrivateKey(const PrivateKey&) = default;
  PrivateKey& operator=(const PrivateKey&) = default;
  ~PrivateKey();

  static PrivateKey from_span(ByteView seed);

  const std::array<std::uint8_t, 32>& seed() const noexcept { return seed_; }

  /// Only for key files written with restrictive permissions.
  std::string reveal_hex() const { return to_hex(seed_); }

 private:
  std::array<std::uint8_t, 32> seed_{};
};

struct KeyPair {
  PrivateKey private_key;
  PublicKey public_key;
};

/// Ed25519 key generation. A given seed derives deterministically; without
/// one the seed comes from the system CSPRNG. Throws InvalidSeed unless the
/// seed is exactly 32 bytes.
KeyPair keygen(std::optional<ByteView> seed = std::nullopt);

PublicKey derive_public_key(const PrivateKey& key);

Signature sign(const PrivateKey& key, ByteView message);
inline Signature sign(const PrivateKey& key, std::string_view message) { return sign(key, as_bytes(message)); }

bool verify(const PublicKey& key, ByteView message, const Signature& signature) noexcept;
inline bool verify(const PublicKey& key, std::string_view message, const Signature& signature) noexcept {
  return verify(key, as_bytes(message), signature);
}

/// Variable-length entry point used by file and wire parsers. Throws
/// InvalidKeyMaterial if the key or signature has the wrong length.
bool verify_raw(ByteView public_key, ByteView message, ByteView signature);

inline PublicKey public_key_from_hex(std::string_view hex) { return PublicKey::from_hex(hex); }
inline Signature signature_from_hex(std::string_view hex) { return Signature::from_hex(hex); }

/// Fills `out` from the system CSPRNG.
void random_bytes(std::span<std::uint8_t> out);

}  // namespace codewe::crypto
