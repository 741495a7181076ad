#include "codewe/ledger/transaction.hpp"

namespace codewe::ledger {

std::string_view to_string(TxKind kind) noexcept {
  switch (kind) {
    case TxKind::Deploy: return "Deploy";
    case TxKind::Open: return "Open";
    case TxKind::SubmitCommitment: return "SubmitCommitment";
    case TxKind::Close: return "Close";
    case TxKind::CommitAnalysis: return "CommitAnalysis";
    case TxKind::RecordErasure: return "RecordErasure";
  }
  return "Unknown";
}

std::optional<TxKind> tx_kind_from_string(std::string_view name) noexcept {
  for (auto kind : kAllTxKinds) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

std::string Transaction::signing_payload() const {
  return canonical::encode({{"kind", std::string(to_string(kind))}, {"contract_id", contract_id.hex()}, {"body", body}});
}

bool Transaction::signature_valid() const {
  try {
    return crypto::verify(sender_public_key, signing_payload(), sender_signature);
  } catch (const Error&) {
    return false;  // body not encodable
  }
}

canonical::Document Transaction::to_document() const {
  return {{"kind", std::string(to_string(kind))},
          {"contract_id", contract_id.hex()},
          {"body", body},
          {"sender_public_key", sender_public_key.hex()},
          {"sender_signature", sender_signature.hex()}};
}

Transaction Transaction::from_document(const canonical::Document& doc) {
  try {
    if (!doc.is_object() || doc.size() != 5) throw Error(ErrorCode::MalformedTransaction, "expected 5 fields");
    Transaction tx;
    auto kind = tx_kind_from_string(doc.at("kind").get<std::string>());
    if (!kind) throw Error(ErrorCode::MalformedTransaction, "unknown kind");
    tx.kind = *kind;
    tx.contract_id = Digest::from_hex(doc.at("contract_id").get<std::string>(), ErrorCode::MalformedTransaction);
    tx.body = doc.at("body");
    if (!tx.body.is_object()) throw Error(ErrorCode::MalformedTransaction, "body must be an object");
    tx.sender_public_key = crypto::PublicKey::from_hex(doc.at("sender_public_key").get<std::string>(),
                                                       ErrorCode::MalformedTransaction);
    tx.sender_signature = crypto::Signature::from_hex(doc.at("sender_signature").get<std::string>(),
                                                      ErrorCode::MalformedTransaction);
    return tx;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedTransaction, e.what());
  }
}

Transaction Transaction::make(TxKind kind, const Digest& contract_id, canonical::Document body,
                              const crypto::KeyPair& sender) {
  Transaction tx;
  tx.kind = kind;
  tx.contract_id = contract_id;
  tx.body = std::move(body);
  tx.sender_public_key = sender.public_key;
  tx.sender_signature = crypto::sign(sender.private_key, tx.signing_payload());
  return tx;
}

canonical::Document TxReceipt::to_document() const {
  if (accepted()) {
    return {{"status", "Accepted"}, {"height", height}, {"entry_digest", entry_digest.hex()}};
  }
  return {{"status", "Rejected"}, {"reason", std::string(codewe::to_string(*reason))}};
}

}  // namespace codewe::ledger
