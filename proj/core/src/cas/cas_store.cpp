#include "codewe/cas/cas_store.hpp"

#include <fstream>
#include <random>

#include "codewe/util/file_io.hpp"

namespace codewe::cas {

namespace fs = std::filesystem;
using Document = canonical::Document;

std::string ErasureRequest::message(const CasAddress& address, std::string_view reason) {
  return canonical::encode({{"action", "erase"}, {"address", address.hex()}, {"reason", std::string(reason)}});
}

ErasureRequest ErasureRequest::make(const CasAddress& address, std::string reason, const crypto::KeyPair& requester) {
  ErasureRequest r;
  r.address = address;
  r.reason = std::move(reason);
  r.requester_public_key = requester.public_key;
  r.requester_signature = crypto::sign(requester.private_key, message(address, r.reason));
  return r;
}

bool ErasureRequest::signature_valid() const {
  return crypto::verify(requester_public_key, message(address, reason), requester_signature);
}

Document ErasureRequest::to_document() const {
  return {{"address", address.hex()},
          {"reason", reason},
          {"requester_public_key", requester_public_key.hex()},
          {"requester_signature", requester_signature.hex()}};
}

ErasureRequest ErasureRequest::from_document(const Document& doc) {
  ErasureRequest r;
  r.address = crypto::digest_from_hex(doc.at("address").get<std::string>());
  r.reason = doc.at("reason").get<std::string>();
  r.requester_public_key = crypto::public_key_from_hex(doc.at("requester_public_key").get<std::string>());
  r.requester_signature = crypto::signature_from_hex(doc.at("requester_signature").get<std::string>());
  return r;
}

std::string Tombstone::signing_payload() const {
  return canonical::encode({{"address", address.hex()}, {"erased_at", erased_at}, {"reason", reason.to_document()}});
}

bool Tombstone::signature_valid() const { return signature_valid(admin_public_key); }

bool Tombstone::signature_valid(const crypto::PublicKey& expected_admin) const {
  return expected_admin == admin_public_key && crypto::verify(admin_public_key, signing_payload(), admin_signature);
}

Document Tombstone::to_document() const {
  return {{"address", address.hex()},
          {"erased_at", erased_at},
          {"reason", reason.to_document()},
          {"admin_public_key", admin_public_key.hex()},
          {"admin_signature", admin_signature.hex()}};
}

Tombstone Tombstone::from_document(const Document& doc) {
  Tombstone t;
  t.address = crypto::digest_from_hex(doc.at("address").get<std::string>());
  t.erased_at = doc.at("erased_at").get<std::uint64_t>();
  t.reason = ErasureRequest::from_document(doc.at("reason"));
  t.admin_public_key = crypto::public_key_from_hex(doc.at("admin_public_key").get<std::string>());
  t.admin_signature = crypto::signature_from_hex(doc.at("admin_signature").get<std::string>());
  return t;
}

CasStore::CasStore(fs::path root, std::size_t max_blob_size) : root_(std::move(root)), max_blob_size_(max_blob_size) {
  std::error_code ec;
  for (const char* sub : {"blobs", "tombstones", "tmp"}) fs::create_directories(root_ / sub, ec);
  if (ec) throw Error(ErrorCode::StoreUnavailable, root_.string() + ": " + ec.message());
}

fs::path CasStore::blob_path(const CasAddress& address) const {
  auto hex = address.hex();
  return root_ / "blobs" / hex.substr(0, 2) / hex.substr(2, 2) / hex;
}

fs::path CasStore::tombstone_path(const CasAddress& address) const {
  auto hex = address.hex();
  return root_ / "tombstones" / hex.substr(0, 2) / hex.substr(2, 2) / hex;
}

void CasStore::require_available() const {
  std::error_code ec;
  if (!fs::is_directory(root_ / "blobs", ec)) throw Error(ErrorCode::StoreUnavailable, root_.string());
}

std::mutex& CasStore::lock_for(const CasAddress& address) const {
  return stripes_[address.array()[0] % stripes_.size()];
}

CasAddress CasStore::put(ByteView blob) {
  if (blob.empty()) throw Error(ErrorCode::EmptyBlob);
  if (blob.size() > max_blob_size_) {
    throw Error(ErrorCode::BlobTooLarge, std::to_string(blob.size()) + " > " + std::to_string(max_blob_size_));
  }
  require_available();
  CasAddress address = crypto::hash(blob);
  std::error_code ec;
  if (fs::exists(tombstone_path(address), ec) || fs::exists(blob_path(address), ec)) return address;

  // Racing writers produce identical bytes, so whichever rename lands last is fine.
  thread_local std::mt19937_64 rng{std::random_device{}()};
  fs::path tmp = root_ / "tmp" / (address.hex() + "." + std::to_string(rng()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::StoreUnavailable, "cannot stage " + tmp.string());
    out.write(reinterpret_cast<const char*>(blob.data()), static_cast<std::streamsize>(blob.size()));
    if (!out) throw Error(ErrorCode::StoreUnavailable, "short write");
  }
  fs::path dest = blob_path(address);
  fs::create_directories(dest.parent_path(), ec);
  fs::rename(tmp, dest, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::StoreUnavailable, "cannot commit blob " + address.hex());
  }
  return address;
}

GetResult CasStore::get(const CasAddress& address) const {
  require_available();
  std::error_code ec;
  fs::path tomb = tombstone_path(address);
  if (fs::exists(tomb, ec)) {
    try {
      return Erased{Tombstone::from_document(canonical::decode(util::read_file(tomb)))};
    } catch (const std::exception& e) {
      throw Error(ErrorCode::IntegrityViolation, "unreadable tombstone for " + address.hex());
    }
  }
  fs::path path = blob_path(address);
  if (!fs::exists(path, ec)) return NotFound{};
  std::string bytes;
  try {
    bytes = util::read_file(path);
  } catch (const std::exception&) {
    throw Error(ErrorCode::StoreUnavailable, "cannot read " + path.string());
  }
  if (crypto::hash(bytes) != address) throw Error(ErrorCode::IntegrityViolation, address.hex());
  return to_bytes(bytes);
}

Tombstone CasStore::erase(const CasAddress& address, const ErasureRequest& request, const crypto::KeyPair& admin,
                          std::uint64_t erased_at) {
  require_available();
  std::lock_guard guard(lock_for(address));
  std::error_code ec;
  if (fs::exists(tombstone_path(address), ec)) throw Error(ErrorCode::AlreadyErased, address.hex());
  fs::path path = blob_path(address);
  if (!fs::exists(path, ec)) throw Error(ErrorCode::NotFound, address.hex());
  if (request.address != address || !request.signature_valid()) {
    throw Error(ErrorCode::InvalidSignature, "erasure request does not cover " + address.hex());
  }

  Tombstone t;
  t.address = address;
  t.erased_at = erased_at;
  t.reason = request;
  t.admin_public_key = admin.public_key;
  t.admin_signature = crypto::sign(admin.private_key, t.signing_payload());
  util::write_file_atomic(tombstone_path(address), canonical::encode(t.to_document()));

  {
    auto size = fs::file_size(path, ec);
    std::fstream out(path, std::ios::binary | std::ios::in | std::ios::out);
    if (out && !ec) {
      std::string zeros(static_cast<std::size_t>(size), '\0');
      out.write(zeros.data(), static_cast<std::streamsize>(zeros.size()));
      out.flush();
    }
  }
  fs::remove(path, ec);
  if (ec) throw Error(ErrorCode::StoreUnavailable, "cannot remove " + path.string());
  return t;
}

bool CasStore::contains(const CasAddress& address) const {
  std::error_code ec;
  return fs::exists(blob_path(address), ec) && !fs::exists(tombstone_path(address), ec);
}

std::vector<CasAddress> CasStore::list() const {
  require_available();
  std::vector<CasAddress> out;
  for (const auto& entry : fs::recursive_directory_iterator(root_ / "blobs")) {
    if (!entry.is_regular_file()) continue;
    try {
      out.push_back(crypto::digest_from_hex(entry.path().filename().string()));
    } catch (const Error&) {
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t CasStore::blob_count() const { return list().size(); }

}  // namespace codewe::cas
