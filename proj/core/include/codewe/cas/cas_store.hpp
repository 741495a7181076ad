#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <mutex>
#include <string>
#include <variant>
#include <vector>

#include "codewe/crypto/canonical.hpp"
#include "codewe/crypto/signature.hpp"

namespace codewe::cas {

/// A blob's address is the SHA-256 of its bytes.
using CasAddress = crypto::Digest;

inline constexpr std::size_t kDefaultMaxBlobSize = 1024 * 1024;

/// A request to erase one blob, signed by whoever proves authorship (for a
/// response: the respondent's survey key).
struct ErasureRequest {
  CasAddress address;
  std::string reason;  // short code, e.g. "gdpr-art17"
  crypto::PublicKey requester_public_key;
  crypto::Signature requester_signature;

  /// Canonical bytes of {action:"erase", address, reason}.
  static std::string message(const CasAddress& address, std::string_view reason);
  static ErasureRequest make(const CasAddress& address, std::string reason, const crypto::KeyPair& requester);

  bool signature_valid() const;

  canonical::Document to_document() const;
  static ErasureRequest from_document(const canonical::Document& doc);
};

struct Tombstone {
  CasAddress address;
  std::uint64_t erased_at = 0;  // logical time
  ErasureRequest reason;
  crypto::PublicKey admin_public_key;
  crypto::Signature admin_signature;

  /// Canonical bytes of {address, erased_at, reason}.
  std::string signing_payload() const;
  bool signature_valid() const;
  bool signature_valid(const crypto::PublicKey& expected_admin) const;

  canonical::Document to_document() const;
  static Tombstone from_document(const canonical::Document& doc);
  crypto::Digest digest() const { return canonical::digest(to_document()); }
};

struct Erased {
  Tombstone tombstone;
};
struct NotFound {};

using GetResult = std::variant<Bytes, Erased, NotFound>;

/// Directory-backed content-addressed store.
///
///   <root>/blobs/ab/cd/<64 hex>        blob bytes
///   <root>/tombstones/ab/cd/<64 hex>   canonical Tombstone
///   <root>/tmp/                        staging for atomic renames
///
/// `ab` and `cd` are the first two bytes of the address in hex.
class CasStore {
 public:
  explicit CasStore(std::filesystem::path root, std::size_t max_blob_size = kDefaultMaxBlobSize);

  /// Idempotent. Throws EmptyBlob or BlobTooLarge. An erased address is not
  /// resurrected: the address is returned but nothing is written.
  CasAddress put(ByteView blob);
  CasAddress put(std::string_view blob) { return put(as_bytes(blob)); }

  /// Re-hashes on every read. Throws IntegrityViolation if the stored bytes
  /// do not match the address, StoreUnavailable if the root is gone.
  GetResult get(const CasAddress& address) const;

  /// Throws NotFound, AlreadyErased, or InvalidSignature (request signature
  /// or address mismatch). The blob file is overwritten before unlinking.
  Tombstone erase(const CasAddress& address, const ErasureRequest& request, const crypto::KeyPair& admin,
                  std::uint64_t erased_at);

  bool contains(const CasAddress& address) const;
  std::size_t blob_count() const;
  std::vector<CasAddress> list() const;

  std::filesystem::path blob_path(const CasAddress& address) const;
  std::filesystem::path tombstone_path(const CasAddress& address) const;
  const std::filesystem::path& root() const noexcept { return root_; }
  std::size_t max_blob_size() const noexcept { return max_blob_size_; }

 private:
  void require_available() const;
  std::mutex& lock_for(const CasAddress& address) const;

  std::filesystem::path root_;
  std::size_t max_blob_size_;
  mutable std::array<std::mutex, 32> stripes_;
};

}  // namespace codewe::cas
