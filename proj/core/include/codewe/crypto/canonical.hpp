#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "codewe/crypto/hash.hpp"

namespace codewe::canonical {

/// Structured document accepted by the canonical encoder. Only objects with
/// string keys, arrays, strings, booleans and integers are encodable.
using Document = nlohmann::json;

/// Deterministic, whitespace-free text form (see docs/canonical-encoding.md).
/// Object keys are NFC-normalised and sorted by code point, strings are
/// NFC-normalised UTF-8. Throws EncodingUnsupported for floats, null, binary
/// values, invalid UTF-8, or keys that collide after normalisation.
std::string encode(const Document& value);

/// Parses canonical text and rejects anything that does not re-encode to the
/// identical bytes. Throws EncodingUnsupported.
Document decode(std::string_view text);

inline crypto::Digest digest(const Document& value) { return crypto::hash(encode(value)); }

/// Unicode NFC normalisation of UTF-8 text. Throws EncodingUnsupported on
/// malformed UTF-8.
std::string nfc(std::string_view utf8);

}  // namespace codewe::canonical
