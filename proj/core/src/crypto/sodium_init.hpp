#pragma once

#include <sodium.h>

#include <stdexcept>

namespace codewe::crypto::detail {

// sodium_init() is idempotent and thread-safe; this only caches the result.
inline void ensure_sodium() {
  static const int rc = sodium_init();
  if (rc < 0) throw std::runtime_error("libsodium initialisation failed");
}

}  // namespace codewe::crypto::detail
