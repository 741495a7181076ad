#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "codewe/error.hpp"

namespace codewe {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

std::string to_hex(ByteView bytes);

// Lowercase only, so every value has exactly one text form. Throws InvalidHex
// on odd length or any other digit.
Bytes from_hex(std::string_view hex);

inline ByteView as_bytes(std::string_view s) noexcept {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

inline Bytes to_bytes(std::string_view s) { return Bytes(s.begin(), s.end()); }

inline std::string to_string(ByteView bytes) { return std::string(bytes.begin(), bytes.end()); }

/// Fixed-width byte value. `Tag` keeps digests, keys and signatures from
/// being mixed up at compile time.
template <std::size_t N, class Tag>
class FixedBytes {
 public:
  static constexpr std::size_t size_bytes = N;

  constexpr FixedBytes() noexcept = default;
  explicit constexpr FixedBytes(const std::array<std::uint8_t, N>& bytes) noexcept : bytes_(bytes) {}

  /// Throws `on_error` if the span is not exactly N bytes long.
  static FixedBytes from_span(ByteView bytes, ErrorCode on_error = ErrorCode::InvalidKeyMaterial) {
    if (bytes.size() != N) {
      throw Error(on_error, "expected " + std::to_string(N) + " bytes, got " + std::to_string(bytes.size()));
    }
    FixedBytes out;
    std::copy(bytes.begin(), bytes.end(), out.bytes_.begin());
    return out;
  }

  static FixedBytes from_hex(std::string_view hex, ErrorCode on_error = ErrorCode::InvalidKeyMaterial) {
    if (hex.size() != 2 * N) {
      throw Error(on_error, "expected " + std::to_string(2 * N) + " hex characters");
    }
    return from_span(codewe::from_hex(hex), on_error);
  }

  std::string hex() const { return to_hex(bytes_); }

  const std::array<std::uint8_t, N>& array() const noexcept { return bytes_; }
  std::array<std::uint8_t, N>& array() noexcept { return bytes_; }
  const std::uint8_t* data() const noexcept { return bytes_.data(); }
  std::uint8_t* data() noexcept { return bytes_.data(); }
  static constexpr std::size_t size() noexcept { return N; }
  ByteView view() const noexcept { return bytes_; }

  bool is_zero() const noexcept {
    for (auto b : bytes_) {
      if (b != 0) return false;
    }
    return true;
  }

  friend auto operator<=>(const FixedBytes&, const FixedBytes&) = default;

 private:
  std::array<std::uint8_t, N> bytes_{};
};

}  // namespace codewe
