#include "codewe/service/workspace.hpp"

#include <algorithm>

#include "codewe/coproduction/record.hpp"
#include "codewe/service/files.hpp"

namespace codewe::service {

namespace fs = std::filesystem;
using Document = canonical::Document;
using contract::Phase;

contract::ResponseCommitment SubmissionRequest::commitment() const {
  contract::ResponseCommitment c;
  c.response_digest = crypto::hash(response);
  c.cas_address = c.response_digest;
  c.respondent_public_key = respondent_public_key;
  c.respondent_signature = respondent_signature;
  c.eligibility_token = eligibility_token;
  return c;
}

ledger::Transaction SubmissionRequest::transaction(const Digest& contract_id) const {
  ledger::Transaction tx;
  tx.kind = ledger::TxKind::SubmitCommitment;
  tx.contract_id = contract_id;
  tx.body = commitment().to_body();
  tx.sender_public_key = respondent_public_key;
  tx.sender_signature = tx_signature;
  return tx;
}

Document SubmissionRequest::to_document() const {
  return {{"response", response},
          {"respondent_public_key", respondent_public_key.hex()},
          {"respondent_signature", respondent_signature.hex()},
          {"eligibility_token", eligibility_token.hex()},
          {"tx_signature", tx_signature.hex()}};
}

SubmissionRequest SubmissionRequest::from_document(const Document& doc) {
  try {
    if (!doc.is_object() || doc.size() != 5) throw Error(ErrorCode::MalformedTransaction, "expected 5 fields");
    SubmissionRequest r;
    r.response = doc.at("response").get<std::string>();
    r.respondent_public_key = crypto::public_key_from_hex(doc.at("respondent_public_key").get<std::string>());
    r.respondent_signature = crypto::signature_from_hex(doc.at("respondent_signature").get<std::string>());
    r.eligibility_token = contract::EligibilityToken::from_hex(doc.at("eligibility_token").get<std::string>(),
                                                               ErrorCode::MalformedTransaction);
    r.tx_signature = crypto::signature_from_hex(doc.at("tx_signature").get<std::string>());
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedTransaction, e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::MalformedTransaction) throw;
    throw Error(ErrorCode::MalformedTransaction, e.what());
  }
}

SubmissionRequest make_submission_request(const Digest& contract_id, const analysis::PreparedSubmission& prepared,
                                          const crypto::KeyPair& respondent) {
  SubmissionRequest r;
  r.response = prepared.blob;
  r.respondent_public_key = respondent.public_key;
  r.respondent_signature = prepared.commitment.respondent_signature;
  r.eligibility_token = prepared.commitment.eligibility_token;
  auto tx = ledger::Transaction::make(ledger::TxKind::SubmitCommitment, contract_id, prepared.commitment.to_body(),
                                      respondent);
  r.tx_signature = tx.sender_signature;
  return r;
}

Document SubmissionReceipt::to_document() const {
  return {{"contract_id", contract_id.hex()},
          {"response_digest", response_digest.hex()},
          {"height", height},
          {"entry_digest", entry_digest.hex()}};
}

namespace {

ledger::Ledger open_ledger(const ServiceConfig& cfg) {
  if (fs::exists(cfg.ledger)) return ledger::Ledger::restore_from_file(cfg.ledger);
  return ledger::Ledger();
}

ServiceConfig prepared(ServiceConfig cfg) {
  cfg.prepare();
  return cfg;
}

}  // namespace

Workspace::Workspace(ServiceConfig config)
    : config_(prepared(std::move(config))),
      ledger_(open_ledger(config_)),
      cas_(config_.cas, static_cast<std::size_t>(config_.max_blob_size)) {}

fs::path Workspace::report_dir(const Digest& contract_id) const { return config_.reports / contract_id.hex(); }

fs::path Workspace::token_file(const Digest& contract_id) const {
  return config_.tokens / (contract_id.hex() + ".tokens");
}

void Workspace::persist() const { ledger_.snapshot_to_file(config_.ledger); }

ledger::TxReceipt Workspace::accept(const ledger::TxReceipt& receipt) {
  if (receipt.accepted()) persist();
  return receipt;
}

contract::ContractState Workspace::state(const Digest& contract_id) const {
  auto st = ledger_.contract_state(contract_id);
  if (!st) throw Error(ErrorCode::UnknownContract, contract_id.hex());
  return *st;
}

Document Workspace::survey_document(const Digest& contract_id) const {
  auto st = state(contract_id);
  auto params = contract::load_parameters(st, cas_, contract_id);
  return {{"parameters", params.to_document()},
          {"phase", std::string(contract::to_string(st.phase))},
          {"commitment_count", st.commitments.size()},
          {"admin_public_key", st.admin_public_key.hex()}};
}

Document Workspace::proof_document(const Digest& contract_id, const Digest& response_digest) const {
  auto st = state(contract_id);
  if (st.phase != Phase::Analyzed) throw Error(ErrorCode::NotYetAnalyzed, contract_id.hex());
  auto report = analysis::AnalysisReport::load(report_dir(contract_id));
  auto included = report.included_digests();
  auto it = std::find(included.begin(), included.end(), response_digest);
  if (it == included.end()) throw Error(ErrorCode::NotFound, "no proof for " + response_digest.hex());
  analysis::ProofFile p{contract_id, response_digest,
                        crypto::merkle_prove(included, static_cast<std::uint64_t>(it - included.begin())),
                        *st.analysis_root};
  return p.to_document();
}

Document Workspace::report_document(const Digest& contract_id) const {
  auto st = state(contract_id);
  if (st.phase != Phase::Analyzed) throw Error(ErrorCode::NotYetAnalyzed, contract_id.hex());
  auto report = analysis::AnalysisReport::load(report_dir(contract_id));
  return {{"report", report.body}, {"signature", report.signature_document()}, {"analysis_root", st.analysis_root->hex()}};
}

audit::AuditFinding Workspace::audit(const Digest& contract_id) const {
  auto records = ledger_.records();
  return audit::full_audit(records, cas_, contract_id, report_dir(contract_id));
}

Document Workspace::codesign_summary(const Digest& contract_id) const {
  auto st = state(contract_id);
  auto got = cas_.get(st.coproduction_digest);
  const auto* blob = std::get_if<Bytes>(&got);
  if (blob == nullptr) throw Error(ErrorCode::CoProductionMissing, st.coproduction_digest.hex());
  auto record = coproduction::CoProductionRecord::from_document(canonical::decode(codewe::to_string(*blob)));
  auto summary = record.public_summary();
  summary["record_digest"] = st.coproduction_digest.hex();
  return summary;
}

SubmissionReceipt Workspace::submit(const Digest& contract_id, const SubmissionRequest& request) {
  auto st = state(contract_id);
  auto params = contract::load_parameters(st, cas_, contract_id);
  if (request.response.size() > config_.max_blob_size) throw Error(ErrorCode::BlobTooLarge);
  try {
    auto response = analysis::ResponseSet::from_document(canonical::decode(request.response));
    response.validate(params);
    if (response.respondent_public_key != request.respondent_public_key) {
      throw Error(ErrorCode::InvalidResponse, "response names a different respondent key");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidResponse, e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidResponse) throw;
    throw Error(ErrorCode::InvalidResponse, e.what());
  }

  std::lock_guard lock(write_mutex_);
  const auto digest = cas_.put(request.response);
  auto receipt = ledger_.submit_tx(request.transaction(contract_id));
  if (!receipt.accepted()) throw Error(*receipt.reason);
  persist();
  return {contract_id, digest, receipt.height, receipt.entry_digest};
}

contract::DeployResult Workspace::deploy(const contract::SurveyParameters& params, const crypto::KeyPair& admin,
                                        std::optional<std::vector<contract::EligibilityToken>> tokens) {
  std::lock_guard lock(write_mutex_);
  auto result = tokens ? contract::deploy(ledger_, cas_, params, admin, std::move(*tokens))
                       : contract::deploy(ledger_, cas_, params, admin);
  if (result.receipt.accepted()) {
    write_token_file(token_file(result.contract_id), result.contract_id, result.tokens);
    persist();
  }
  return result;
}

ledger::TxReceipt Workspace::open(const Digest& contract_id, const crypto::KeyPair& admin) {
  std::lock_guard lock(write_mutex_);
  return accept(contract::open_survey(ledger_, contract_id, admin));
}

ledger::TxReceipt Workspace::close(const Digest& contract_id, const crypto::KeyPair& admin) {
  std::lock_guard lock(write_mutex_);
  return accept(contract::close_survey(ledger_, contract_id, admin));
}

analysis::BuildResult Workspace::analyze(const Digest& contract_id, const crypto::KeyPair& admin) {
  std::lock_guard lock(write_mutex_);
  auto result = analysis::build_report(ledger_, cas_, contract_id, admin);
  persist();
  const auto dir = report_dir(contract_id);
  analysis::write_report_files(dir, result.report, result.proofs);
  analysis::write_plots(dir / "charts", analysis::export_plots(result.report.body));
  return result;
}

cas::Tombstone Workspace::erase(const Digest& contract_id, const Digest& response_digest,
                                const cas::ErasureRequest& request, const crypto::KeyPair& admin) {
  std::lock_guard lock(write_mutex_);
  auto st = state(contract_id);
  if (st.admin_public_key != admin.public_key) throw Error(ErrorCode::Unauthorized, "not the deploying key");
  if (st.find_commitment(response_digest) == nullptr) throw Error(ErrorCode::UnknownCommitment, response_digest.hex());
  if (st.is_erased(response_digest)) throw Error(ErrorCode::AlreadyErased, response_digest.hex());
  if (request.address != response_digest) throw Error(ErrorCode::InvalidParameters, "request names another address");

  auto tombstone = cas_.erase(response_digest, request, admin, ledger_.next_logical_time());
  auto receipt = contract::record_erasure(ledger_, contract_id, response_digest, tombstone.digest(), admin);
  if (!receipt.accepted()) throw Error(*receipt.reason, "record_erasure rejected");
  persist();
  return tombstone;
}

}  // namespace codewe::service
