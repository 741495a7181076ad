#include "codewe/service/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <limits>

#include "codewe/error.hpp"
#include "codewe/util/file_io.hpp"

namespace codewe::service {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())) != 0) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())) != 0) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size() || v > std::numeric_limits<T>::max()) {
    throw Error(ErrorCode::InvalidConfig, std::string(key) + ": not a valid number: " + std::string(value));
  }
  return static_cast<T>(v);
}

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

}  // namespace

void ServiceConfig::set(std::string_view key, std::string_view value) {
  if (key == "listen") {
    auto colon = value.rfind(':');
    if (colon == std::string_view::npos || colon == 0) {
      throw Error(ErrorCode::InvalidConfig, "listen: expected host:port");
    }
    listen_host = std::string(value.substr(0, colon));
    listen_port = parse_number<std::uint16_t>(key, value.substr(colon + 1));
  } else if (key == "ledger") {
    ledger = std::string(value);
  } else if (key == "cas") {
    cas = std::string(value);
  } else if (key == "reports") {
    reports = std::string(value);
  } else if (key == "admin_key") {
    admin_key = std::string(value);
  } else if (key == "tokens") {
    tokens = std::string(value);
  } else if (key == "rate_limit_per_minute") {
    rate_limit_per_minute = parse_number<std::uint32_t>(key, value);
  } else if (key == "max_blob_size") {
    max_blob_size = parse_number<std::uint64_t>(key, value);
    if (max_blob_size == 0) throw Error(ErrorCode::InvalidConfig, "max_blob_size must be positive");
  } else {
    throw Error(ErrorCode::InvalidConfig, "unknown key " + std::string(key));
  }
}

ServiceConfig ServiceConfig::parse(std::string_view text, ServiceConfig base) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::InvalidConfig, "line " + std::to_string(line_no) + ": expected key = value");
    }
    auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    bool key_ok = !key.empty() && std::all_of(key.begin(), key.end(), [](unsigned char c) {
      return std::isalnum(c) != 0 || c == '_';
    });
    if (!key_ok) throw Error(ErrorCode::InvalidConfig, "line " + std::to_string(line_no) + ": bad key");
    base.set(key, value);
  }
  return base;
}

ServiceConfig ServiceConfig::parse(std::string_view text) { return parse(text, ServiceConfig{}); }

std::optional<std::string> ServiceConfig::process_env(const std::string& name) {
  const char* v = std::getenv(name.c_str());
  if (v == nullptr) return std::nullopt;
  return std::string(v);
}

ServiceConfig ServiceConfig::load(const std::optional<fs::path>& file, const EnvLookup& env) {
  ServiceConfig cfg;
  if (file) {
    std::string text;
    try {
      text = util::read_file(*file);
    } catch (const std::exception& e) {
      throw Error(ErrorCode::InvalidConfig, e.what());
    }
    cfg = parse(text, cfg);
  }
  for (const char* key : kConfigKeys) {
    if (auto v = env("CODEWE_" + upper(key))) cfg.set(key, *v);
  }
  return cfg;
}

std::map<std::string, std::string> ServiceConfig::settings() const {
  return {{"listen", listen_host + ":" + std::to_string(listen_port)},
          {"ledger", ledger.string()},
          {"cas", cas.string()},
          {"reports", reports.string()},
          {"admin_key", admin_key.string()},
          {"tokens", tokens.string()},
          {"rate_limit_per_minute", std::to_string(rate_limit_per_minute)},
          {"max_blob_size", std::to_string(max_blob_size)}};
}

void ServiceConfig::prepare() const {
  try {
    if (ledger.has_parent_path()) fs::create_directories(ledger.parent_path());
    fs::create_directories(cas);
    fs::create_directories(reports);
    fs::create_directories(tokens);
  } catch (const fs::filesystem_error& e) {
    throw Error(ErrorCode::InvalidConfig, e.what());
  }
  if (!admin_key.empty() && fs::exists(admin_key)) {
    const auto perms = fs::status(admin_key).permissions();
    const auto open_bits = fs::perms::group_all | fs::perms::others_all;
    if ((perms & open_bits) != fs::perms::none) {
      throw Error(ErrorCode::InvalidConfig, "admin key file must not be accessible by group or others");
    }
  }
}

}  // namespace codewe::service
