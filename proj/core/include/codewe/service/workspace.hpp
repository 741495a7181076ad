#pragma once

#include <filesystem>
#include <mutex>
#include <string>

#include "codewe/analysis/plots.hpp"
#include "codewe/analysis/report.hpp"
#include "codewe/audit/audit.hpp"
#include "codewe/contract/operations.hpp"
#include "codewe/service/config.hpp"

namespace codewe::service {

using crypto::Digest;

/// What a respondent's client sends to submit a response. The server signs
/// nothing: both signatures are made with the respondent's key client-side.
struct SubmissionRequest {
  std::string response;  // canonical ResponseSet text; stored verbatim in CAS
  crypto::PublicKey respondent_public_key;
  crypto::Signature respondent_signature;  // over the commitment message
  contract::EligibilityToken eligibility_token;
  crypto::Signature tx_signature;  // over the SubmitCommitment signing payload

  contract::ResponseCommitment commitment() const;
  ledger::Transaction transaction(const Digest& contract_id) const;

  canonical::Document to_document() const;
  /// Throws MalformedTransaction.
  static SubmissionRequest from_document(const canonical::Document& doc);
};

SubmissionRequest make_submission_request(const Digest& contract_id, const analysis::PreparedSubmission& prepared,
                                          const crypto::KeyPair& respondent);

struct SubmissionReceipt {
  Digest contract_id;
  Digest response_digest;
  std::uint64_t height = 0;
  Digest entry_digest;

  canonical::Document to_document() const;
};

/// Ledger, CAS and report directory opened from a config, with the protocol
/// operations the CLI and the HTTP service both call. Writes are serialised
/// and each accepted write is followed by a snapshot of the ledger.
class Workspace {
 public:
  explicit Workspace(ServiceConfig config);

  const ServiceConfig& config() const noexcept { return config_; }
  ledger::Ledger& ledger() noexcept { return ledger_; }
  const ledger::Ledger& ledger() const noexcept { return ledger_; }
  cas::CasStore& cas() noexcept { return cas_; }
  const cas::CasStore& cas() const noexcept { return cas_; }

  std::filesystem::path report_dir(const Digest& contract_id) const;
  std::filesystem::path token_file(const Digest& contract_id) const;
  void persist() const;

  // Read side.
  contract::ContractState state(const Digest& contract_id) const;  // UnknownContract
  canonical::Document survey_document(const Digest& contract_id) const;
  canonical::Document proof_document(const Digest& contract_id, const Digest& response_digest) const;
  canonical::Document report_document(const Digest& contract_id) const;
  audit::AuditFinding audit(const Digest& contract_id) const;
  canonical::Document codesign_summary(const Digest& contract_id) const;

  // Respondent side. Throws the ledger's rejection reason as an Error.
  SubmissionReceipt submit(const Digest& contract_id, const SubmissionRequest& request);

  // Administrator side.
  /// Mints tokens unless given; writes them to token_file() on acceptance.
  contract::DeployResult deploy(const contract::SurveyParameters& params, const crypto::KeyPair& admin,
                                std::optional<std::vector<contract::EligibilityToken>> tokens = std::nullopt);
  ledger::TxReceipt open(const Digest& contract_id, const crypto::KeyPair& admin);
  ledger::TxReceipt close(const Digest& contract_id, const crypto::KeyPair& admin);
  analysis::BuildResult analyze(const Digest& contract_id, const crypto::KeyPair& admin);
  cas::Tombstone erase(const Digest& contract_id, const Digest& response_digest, const cas::ErasureRequest& request,
                       const crypto::KeyPair& admin);

 private:
  ledger::TxReceipt accept(const ledger::TxReceipt& receipt);

  ServiceConfig config_;
  ledger::Ledger ledger_;
  cas::CasStore cas_;
  mutable std::mutex write_mutex_;
};

}  // namespace codewe::service
