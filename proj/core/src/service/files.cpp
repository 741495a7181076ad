#include "codewe/service/files.hpp"

#include <sstream>

#include "codewe/util/file_io.hpp"

namespace codewe::service {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kTokenHeader = "# codewe tokens ";

std::string read_config_file(const fs::path& path) {
  try {
    return util::read_file(path);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::InvalidConfig, e.what());
  }
}

}  // namespace

void write_key_file(const fs::path& path, const crypto::KeyPair& keys) {
  canonical::Document doc = {{"public_key", keys.public_key.hex()}, {"seed", keys.private_key.reveal_hex()}};
  util::write_file_atomic(path, canonical::encode(doc) + "\n", true);
}

crypto::KeyPair read_key_file(const fs::path& path) {
  auto text = read_config_file(path);
  const auto open_bits = fs::perms::group_all | fs::perms::others_all;
  if ((fs::status(path).permissions() & open_bits) != fs::perms::none) {
    throw Error(ErrorCode::InvalidConfig, path.string() + ": key file must be mode 0600");
  }
  if (!text.empty() && text.back() == '\n') text.pop_back();
  try {
    auto doc = canonical::decode(text);
    const auto key = crypto::PrivateKey::from_span(from_hex(doc.at("seed").get<std::string>()));
    crypto::KeyPair keys{key, crypto::derive_public_key(key)};
    if (keys.public_key.hex() != doc.at("public_key").get<std::string>()) {
      throw Error(ErrorCode::InvalidConfig, path.string() + ": public key does not match seed");
    }
    return keys;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, path.string() + ": " + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidConfig) throw;
    throw Error(ErrorCode::InvalidConfig, path.string() + ": " + e.what());
  }
}

void write_token_file(const fs::path& path, const crypto::Digest& contract_id,
                      const std::vector<contract::EligibilityToken>& tokens) {
  std::string out(kTokenHeader);
  out += contract_id.hex() + "\n";
  for (const auto& t : tokens) out += t.hex() + "\n";
  util::write_file_atomic(path, out, true);
}

TokenFile read_token_file(const fs::path& path) {
  std::istringstream in(read_config_file(path));
  std::string line;
  TokenFile out;
  if (!std::getline(in, line) || !line.starts_with(kTokenHeader)) {
    throw Error(ErrorCode::InvalidConfig, path.string() + ": missing token file header");
  }
  try {
    out.contract_id = crypto::digest_from_hex(line.substr(kTokenHeader.size()));
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      out.tokens.push_back(contract::EligibilityToken::from_hex(line, ErrorCode::InvalidConfig));
    }
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidConfig, path.string() + ": " + e.what());
  }
  return out;
}

}  // namespace codewe::service
