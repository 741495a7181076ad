#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>

namespace codewe::service {

/// Runtime configuration shared by the CLI and the HTTP service.
///
/// File grammar, one setting per line:
///   line    = blank | comment | setting
///   comment = *WSP "#" *any
///   setting = *WSP key *WSP "=" *WSP value *WSP
///   key     = 1*(ALPHA / DIGIT / "_")
/// Values run to the end of the line, surrounding whitespace trimmed.
/// Unknown keys are rejected. Every key can be overridden by the
/// environment variable CODEWE_<KEY> (upper case), which wins over the file.
struct ServiceConfig {
  std::string listen_host = "127.0.0.1";
  std::uint16_t listen_port = 8080;
  std::filesystem::path ledger = "codewe-data/ledger.snap";
  std::filesystem::path cas = "codewe-data/cas";
  std::filesystem::path reports = "codewe-data/reports";
  std::filesystem::path admin_key;  // optional
  std::filesystem::path tokens = "codewe-data/tokens";
  std::uint32_t rate_limit_per_minute = 10;  // 0 disables
  std::uint64_t max_blob_size = 1024 * 1024;

  using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

  /// Throws InvalidConfig on syntax errors, unknown keys or bad values.
  static ServiceConfig parse(std::string_view text, ServiceConfig base);
  static ServiceConfig parse(std::string_view text);
  static std::optional<std::string> process_env(const std::string& name);

  /// Defaults, then the file (if any), then the environment.
  static ServiceConfig load(const std::optional<std::filesystem::path>& file, const EnvLookup& env = process_env);

  void set(std::string_view key, std::string_view value);
  std::map<std::string, std::string> settings() const;

  /// Creates the data directories. Checks the admin key file, when one is
  /// configured and present, is not readable by group or others.
  void prepare() const;
};

inline constexpr const char* kConfigKeys[] = {"listen",  "ledger",        "cas",
                                              "reports", "admin_key",     "tokens",
                                              "rate_limit_per_minute", "max_blob_size"};

}  // namespace codewe::service
