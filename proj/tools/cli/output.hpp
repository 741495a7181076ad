#pragma once

#include <iosfwd>
#include <string>

#include "codewe/crypto/canonical.hpp"
#include "codewe/error.hpp"

namespace codewe::cli {

enum class Format { Json, Text };

/// json: one canonical line. text: "key: value" per top-level field, with
/// nested values in canonical form and strings unquoted.
void emit(std::ostream& out, const canonical::Document& doc, Format format);

// Exit statuses shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;  // ledger verify / inclusion check negative
inline constexpr int kExitDiscrepant = 2;    // audit found a discrepancy
inline constexpr int kExitUnavailable = 3;   // audit inputs unavailable
inline constexpr int kExitRejected = 4;      // protocol rejected the operation
inline constexpr int kExitUsage = 64;
inline constexpr int kExitIo = 74;
inline constexpr int kExitConfig = 78;

int exit_code_for(ErrorCode code) noexcept;

}  // namespace codewe::cli
