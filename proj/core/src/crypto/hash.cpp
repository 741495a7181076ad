#include "codewe/crypto/hash.hpp"

#include <sodium.h>

#include "sodium_init.hpp"

namespace codewe::crypto {

Digest hash(ByteView data) {
  detail::ensure_sodium();
  Digest out;
  crypto_hash_sha256(out.data(), data.data(), data.size());
  return out;
}

Digest hash_concat(std::initializer_list<ByteView> parts) {
  detail::ensure_sodium();
  crypto_hash_sha256_state state;
  crypto_hash_sha256_init(&state);
  for (auto part : parts) crypto_hash_sha256_update(&state, part.data(), part.size());
  Digest out;
  crypto_hash_sha256_final(&state, out.data());
  return out;
}

}  // namespace codewe::crypto
