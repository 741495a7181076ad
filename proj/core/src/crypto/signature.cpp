#include "codewe/crypto/signature.hpp"

#include <sodium.h>

#include "sodium_init.hpp"

namespace codewe::crypto {

namespace {

// libsodium's secret key is seed || public key.
struct ExpandedSecret {
  std::array<std::uint8_t, crypto_sign_SECRETKEYBYTES> bytes{};
  ~ExpandedSecret() { sodium_memzero(bytes.data(), bytes.size()); }
};

}  // namespace

PrivateKey::~PrivateKey() { sodium_memzero(seed_.data(), seed_.size()); }

PrivateKey PrivateKey::from_span(ByteView seed) {
  if (seed.size() != 32) throw Error(ErrorCode::InvalidKeyMaterial, "private key must be 32 bytes");
  std::array<std::uint8_t, 32> s{};
  std::copy(seed.begin(), seed.end(), s.begin());
  return PrivateKey(s);
}

KeyPair keygen(std::optional<ByteView> seed) {
  detail::ensure_sodium();
  std::array<std::uint8_t, 32> s{};
  if (seed) {
    if (seed->size() != s.size()) throw Error(ErrorCode::InvalidSeed, "seed must be 32 bytes");
    std::copy(seed->begin(), seed->end(), s.begin());
  } else {
    randombytes_buf(s.data(), s.size());
  }
  KeyPair kp{PrivateKey(s), {}};
  sodium_memzero(s.data(), s.size());
  kp.public_key = derive_public_key(kp.private_key);
  return kp;
}

PublicKey derive_public_key(const PrivateKey& key) {
  detail::ensure_sodium();
  PublicKey pk;
  ExpandedSecret sk;
  crypto_sign_seed_keypair(pk.data(), sk.bytes.data(), key.seed().data());
  return pk;
}

Signature sign(const PrivateKey& key, ByteView message) {
  detail::ensure_sodium();
  PublicKey pk;
  ExpandedSecret sk;
  crypto_sign_seed_keypair(pk.data(), sk.bytes.data(), key.seed().data());
  Signature sig;
  crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(), sk.bytes.data());
  return sig;
}

bool verify(const PublicKey& key, ByteView message, const Signature& signature) noexcept {
  try {
    detail::ensure_sodium();
  } catch (...) {
    return false;
  }
  return crypto_sign_verify_detached(signature.data(), message.data(), message.size(), key.data()) == 0;
}

bool verify_raw(ByteView public_key, ByteView message, ByteView signature) {
  auto pk = PublicKey::from_span(public_key, ErrorCode::InvalidKeyMaterial);
  auto sig = Signature::from_span(signature, ErrorCode::InvalidKeyMaterial);
  return verify(pk, message, sig);
}

void random_bytes(std::span<std::uint8_t> out) {
  detail::ensure_sodium();
  randombytes_buf(out.data(), out.size());
}

}  // namespace codewe::crypto
