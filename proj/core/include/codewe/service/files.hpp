#pragma once

#include <filesystem>
#include <vector>

#include "codewe/contract/state.hpp"
#include "codewe/crypto/signature.hpp"

namespace codewe::service {

// Key file: canonical {"public_key":<hex>,"seed":<hex>}, mode 0600.

void write_key_file(const std::filesystem::path& path, const crypto::KeyPair& keys);

/// Throws InvalidConfig if unreadable, malformed, group/other accessible, or
/// if the stored public key does not match the seed.
crypto::KeyPair read_key_file(const std::filesystem::path& path);

// Token file: a header line "# codewe tokens <contract hex>" followed by one
// 32-character hex token per line. Mode 0600.

void write_token_file(const std::filesystem::path& path, const crypto::Digest& contract_id,
                      const std::vector<contract::EligibilityToken>& tokens);

struct TokenFile {
  crypto::Digest contract_id;
  std::vector<contract::EligibilityToken> tokens;
};

/// Throws InvalidConfig.
TokenFile read_token_file(const std::filesystem::path& path);

}  // namespace codewe::service
