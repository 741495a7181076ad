#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string_view>
#include <vector>

#include "codewe/contract/survey.hpp"
#include "codewe/crypto/signature.hpp"
#include "codewe/ledger/transaction.hpp"

namespace codewe::contract {

using ledger::Transaction;
using ledger::TxKind;

enum class Phase { Deployed, Open, Closed, Analyzed };

inline constexpr Phase kAllPhases[] = {Phase::Deployed, Phase::Open, Phase::Closed, Phase::Analyzed};

std::string_view to_string(Phase phase) noexcept;
std::optional<Phase> phase_from_string(std::string_view name) noexcept;

struct TokenTag {};
/// One-time eligibility credential; carries no identity.
using EligibilityToken = FixedBytes<16, TokenTag>;

/// Only the hash of each minted token goes on-chain until it is spent.
inline Digest token_hash(const EligibilityToken& token) { return crypto::hash(token.view()); }

/// Canonical bytes of {survey_id, response_digest, cas_address}: the message a
/// respondent signs.
std::string commitment_message(const Digest& survey_id, const Digest& response_digest, const Digest& cas_address);

struct ResponseCommitment {
  Digest response_digest;
  Digest cas_address;
  crypto::PublicKey respondent_public_key;
  crypto::Signature respondent_signature;
  EligibilityToken eligibility_token;
  std::uint64_t logical_time = 0;  // assigned by the ledger on acceptance

  friend bool operator==(const ResponseCommitment&, const ResponseCommitment&) = default;

  bool signature_valid(const Digest& survey_id) const;

  /// Transaction body (no logical_time).
  canonical::Document to_body() const;
  /// Throws MalformedTransaction.
  static ResponseCommitment from_body(const canonical::Document& body);

  canonical::Document to_document() const;
};

/// Builds the signed commitment a respondent submits for a canonical response blob.
ResponseCommitment make_commitment(const Digest& survey_id, const Digest& response_digest,
                                   const crypto::KeyPair& respondent, const EligibilityToken& token);

struct DeployBody {
  Digest params_digest;
  Digest params_address;
  Digest coproduction_digest;
  crypto::Signature admin_signature;  // over the raw params_digest bytes
  SurveyRules rules;
  std::vector<Digest> token_hashes;  // sorted

  canonical::Document to_body() const;
  static DeployBody from_body(const canonical::Document& body);
};

struct CommitAnalysisBody {
  Digest analysis_root;
  Digest report_digest;

  canonical::Document to_body() const;
  static CommitAnalysisBody from_body(const canonical::Document& body);
};

struct RecordErasureBody {
  Digest response_digest;
  Digest tombstone_digest;

  canonical::Document to_body() const;
  static RecordErasureBody from_body(const canonical::Document& body);
};

struct ContractState {
  Phase phase = Phase::Deployed;
  Digest params_digest;
  Digest params_address;
  Digest coproduction_digest;
  crypto::PublicKey admin_public_key;
  crypto::Signature admin_signature;
  SurveyRules rules;
  std::set<Digest> minted_token_hashes;
  std::vector<ResponseCommitment> commitments;
  std::set<EligibilityToken> used_tokens;
  std::set<crypto::PublicKey> used_keys;
  std::optional<Digest> analysis_root;
  std::optional<Digest> report_digest;
  std::vector<Digest> erasures;

  friend bool operator==(const ContractState&, const ContractState&) = default;

  const ResponseCommitment* find_commitment(const Digest& response_digest) const;
  bool is_erased(const Digest& response_digest) const;

  canonical::Document to_document() const;
};

/// Every contract hosted on a ledger. `apply` is the deterministic transition
/// function: it either mutates exactly one contract and returns nothing, or
/// returns the rejection reason and leaves all state untouched.
class ContractRegistry {
 public:
  std::optional<ErrorCode> apply(const Transaction& tx, std::uint64_t logical_time);

  const ContractState* find(const Digest& contract_id) const;
  std::size_t size() const noexcept { return contracts_.size(); }

  canonical::Document to_document() const;

  friend bool operator==(const ContractRegistry&, const ContractRegistry&) = default;

 private:
  std::map<Digest, ContractState> contracts_;
};

}  // namespace codewe::contract
