#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "codewe/crypto/canonical.hpp"
#include "codewe/crypto/signature.hpp"

namespace codewe::ledger {

using crypto::Digest;

enum class TxKind { Deploy, Open, SubmitCommitment, Close, CommitAnalysis, RecordErasure };

inline constexpr TxKind kAllTxKinds[] = {TxKind::Deploy, TxKind::Open, TxKind::SubmitCommitment,
                                         TxKind::Close, TxKind::CommitAnalysis, TxKind::RecordErasure};

std::string_view to_string(TxKind kind) noexcept;
std::optional<TxKind> tx_kind_from_string(std::string_view name) noexcept;

/// A signed request against one contract. `body` holds the kind-specific
/// payload; its schema is checked by the contract state machine.
struct Transaction {
  TxKind kind = TxKind::Deploy;
  Digest contract_id;
  canonical::Document body = canonical::Document::object();
  crypto::PublicKey sender_public_key;
  crypto::Signature sender_signature;

  /// Canonical bytes of {kind, contract_id, body}: what the sender signs.
  std::string signing_payload() const;

  bool signature_valid() const;

  /// Canonical document of all five fields; its digest is the ledger entry's
  /// payload_digest.
  canonical::Document to_document() const;
  static Transaction from_document(const canonical::Document& doc);

  Digest digest() const { return canonical::digest(to_document()); }

  static Transaction make(TxKind kind, const Digest& contract_id, canonical::Document body,
                          const crypto::KeyPair& sender);

  friend bool operator==(const Transaction& a, const Transaction& b) {
    return a.kind == b.kind && a.contract_id == b.contract_id && a.body == b.body &&
           a.sender_public_key == b.sender_public_key && a.sender_signature == b.sender_signature;
  }
};

enum class TxStatus { Accepted, Rejected };

struct TxReceipt {
  TxStatus status = TxStatus::Rejected;
  std::optional<ErrorCode> reason;  // set iff Rejected
  std::uint64_t height = 0;         // meaningful iff Accepted
  Digest entry_digest;              // meaningful iff Accepted

  bool accepted() const noexcept { return status == TxStatus::Accepted; }

  static TxReceipt rejected(ErrorCode why) { return {TxStatus::Rejected, why, 0, {}}; }

  canonical::Document to_document() const;
};

}  // namespace codewe::ledger
