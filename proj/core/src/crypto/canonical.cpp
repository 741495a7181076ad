#include "codewe/crypto/canonical.hpp"

#include <unicode/normalizer2.h>
#include <unicode/unistr.h>
#include <unicode/ustring.h>

#include <algorithm>
#include <map>
#include <vector>

namespace codewe::canonical {

namespace {

bool is_ascii(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return static_cast<unsigned char>(c) < 0x80; });
}

void append_string(std::string& out, std::string_view raw) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string s = nfc(raw);
  out.push_back('"');
  for (char ch : s) {
    auto c = static_cast<unsigned char>(ch);
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          out += "\\u00";
          out.push_back(kHex[c >> 4]);
          out.push_back(kHex[c & 0x0f]);
        } else {
          out.push_back(ch);
        }
    }
  }
  out.push_back('"');
}

void append(std::string& out, const Document& v) {
  using T = Document::value_t;
  switch (v.type()) {
    case T::object: {
      // Keys are normalised before ordering, so sort the normalised forms.
      std::map<std::string, const Document*> sorted;
      for (auto it = v.begin(); it != v.end(); ++it) {
        auto [_, inserted] = sorted.emplace(nfc(it.key()), &it.value());
        if (!inserted) throw Error(ErrorCode::EncodingUnsupported, "keys collide after NFC: " + it.key());
      }
      out.push_back('{');
      bool first = true;
      for (const auto& [key, value] : sorted) {
        if (!first) out.push_back(',');
        first = false;
        append_string(out, key);
        out.push_back(':');
        append(out, *value);
      }
      out.push_back('}');
      return;
    }
    case T::array: {
      out.push_back('[');
      bool first = true;
      for (const auto& e : v) {
        if (!first) out.push_back(',');
        first = false;
        append(out, e);
      }
      out.push_back(']');
      return;
    }
    case T::string:
      append_string(out, v.get_ref<const std::string&>());
      return;
    case T::boolean:
      out += v.get<bool>() ? "true" : "false";
      return;
    case T::number_integer:
      out += std::to_string(v.get<std::int64_t>());
      return;
    case T::number_unsigned:
      out += std::to_string(v.get<std::uint64_t>());
      return;
    case T::number_float:
      throw Error(ErrorCode::EncodingUnsupported, "floating-point value");
    case T::null:
      throw Error(ErrorCode::EncodingUnsupported, "null value");
    case T::binary:
      throw Error(ErrorCode::EncodingUnsupported, "binary value");
    case T::discarded:
      throw Error(ErrorCode::EncodingUnsupported, "discarded value");
  }
  throw Error(ErrorCode::EncodingUnsupported, "unknown value kind");
}

}  // namespace

std::string nfc(std::string_view utf8) {
  if (is_ascii(utf8)) return std::string(utf8);

  UErrorCode status = U_ZERO_ERROR;
  int32_t utf16_len = 0;
  u_strFromUTF8(nullptr, 0, &utf16_len, utf8.data(), static_cast<int32_t>(utf8.size()), &status);
  if (status != U_BUFFER_OVERFLOW_ERROR && U_FAILURE(status)) {
    throw Error(ErrorCode::EncodingUnsupported, "malformed UTF-8");
  }
  status = U_ZERO_ERROR;
  std::vector<UChar> utf16(static_cast<std::size_t>(utf16_len) + 1);
  u_strFromUTF8(utf16.data(), static_cast<int32_t>(utf16.size()), nullptr, utf8.data(),
                static_cast<int32_t>(utf8.size()), &status);
  if (U_FAILURE(status)) throw Error(ErrorCode::EncodingUnsupported, "malformed UTF-8");

  const icu::Normalizer2* normalizer = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error(ErrorCode::EncodingUnsupported, "NFC normaliser unavailable");
  icu::UnicodeString src(utf16.data(), utf16_len);
  icu::UnicodeString normalized = normalizer->normalize(src, status);
  if (U_FAILURE(status)) throw Error(ErrorCode::EncodingUnsupported, "NFC normalisation failed");

  std::string out;
  normalized.toUTF8String(out);
  return out;
}

std::string encode(const Document& value) {
  std::string out;
  append(out, value);
  return out;
}

Document decode(std::string_view text) {
  Document doc = Document::parse(text.begin(), text.end(), nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) throw Error(ErrorCode::EncodingUnsupported, "not parseable");
  if (encode(doc) != text) throw Error(ErrorCode::EncodingUnsupported, "input is not in canonical form");
  return doc;
}

}  // namespace codewe::canonical
