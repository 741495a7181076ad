#pragma once

#include <initializer_list>

#include "codewe/crypto/bytes.hpp"

namespace codewe::crypto {

struct DigestTag {};

/// SHA-256 output. Rendered externally as 64 lowercase hex characters.
using Digest = FixedBytes<32, DigestTag>;

Digest hash(ByteView data);
inline Digest hash(std::string_view data) { return hash(as_bytes(data)); }

/// SHA-256 over the concatenation of `parts`, without materialising it.
Digest hash_concat(std::initializer_list<ByteView> parts);

/// Parses a digest from hex; throws InvalidHex.
inline Digest digest_from_hex(std::string_view hex) { return Digest::from_hex(hex, ErrorCode::InvalidHex); }

}  // namespace codewe::crypto
