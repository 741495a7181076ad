#include "codewe/contract/operations.hpp"

#include <algorithm>

namespace codewe::contract {

std::vector<EligibilityToken> mint_tokens(std::size_t count) {
  std::vector<EligibilityToken> out(count);
  for (auto& t : out) crypto::random_bytes(t.array());
  return out;
}

DeployResult deploy(ledger::Ledger& ledger, cas::CasStore& store, const SurveyParameters& params,
                    const crypto::KeyPair& admin) {
  return deploy(ledger, store, params, admin, mint_tokens(params.rules.eligibility_token_count));
}

DeployResult deploy(ledger::Ledger& ledger, cas::CasStore& store, const SurveyParameters& params,
                    const crypto::KeyPair& admin, std::vector<EligibilityToken> tokens) {
  params.validate_structure();
  for (const auto& item : params.items) {
    if (!item.stigma_reviewed) throw Error(ErrorCode::StigmaGateFailed, item.item_id);
  }
  if (params.survey_id != params.compute_id()) throw Error(ErrorCode::InvalidParameters, "survey_id does not recompute");
  if (tokens.size() != params.rules.eligibility_token_count) {
    throw Error(ErrorCode::InvalidParameters, "token count does not match rules");
  }
  if (!std::holds_alternative<Bytes>(store.get(params.coproduction_digest))) {
    throw Error(ErrorCode::CoProductionMissing, params.coproduction_digest.hex());
  }

  DeployBody body;
  body.params_digest = params.survey_id;
  body.params_address = store.put(canonical::encode(params.to_document()));
  body.coproduction_digest = params.coproduction_digest;
  body.admin_signature = crypto::sign(admin.private_key, params.survey_id.view());
  body.rules = params.rules;
  for (const auto& t : tokens) body.token_hashes.push_back(token_hash(t));
  std::sort(body.token_hashes.begin(), body.token_hashes.end());

  auto tx = Transaction::make(TxKind::Deploy, params.survey_id, body.to_body(), admin);
  return {params.survey_id, ledger.submit_tx(tx), std::move(tokens)};
}

TxReceipt open_survey(ledger::Ledger& ledger, const Digest& contract_id, const crypto::KeyPair& admin) {
  return ledger.submit_tx(Transaction::make(TxKind::Open, contract_id, canonical::Document::object(), admin));
}

TxReceipt close_survey(ledger::Ledger& ledger, const Digest& contract_id, const crypto::KeyPair& admin) {
  return ledger.submit_tx(Transaction::make(TxKind::Close, contract_id, canonical::Document::object(), admin));
}

TxReceipt submit_commitment(ledger::Ledger& ledger, const Digest& contract_id, const ResponseCommitment& commitment,
                            const crypto::KeyPair& respondent) {
  return ledger.submit_tx(Transaction::make(TxKind::SubmitCommitment, contract_id, commitment.to_body(), respondent));
}

TxReceipt commit_analysis(ledger::Ledger& ledger, const Digest& contract_id, const Digest& analysis_root,
                          const Digest& report_digest, const crypto::KeyPair& admin) {
  CommitAnalysisBody body{analysis_root, report_digest};
  return ledger.submit_tx(Transaction::make(TxKind::CommitAnalysis, contract_id, body.to_body(), admin));
}

TxReceipt record_erasure(ledger::Ledger& ledger, const Digest& contract_id, const Digest& response_digest,
                         const Digest& tombstone_digest, const crypto::KeyPair& admin) {
  RecordErasureBody body{response_digest, tombstone_digest};
  return ledger.submit_tx(Transaction::make(TxKind::RecordErasure, contract_id, body.to_body(), admin));
}

SurveyParameters load_parameters(const ledger::Ledger& ledger, const cas::CasStore& store, const Digest& contract_id) {
  auto state = ledger.contract_state(contract_id);
  if (!state) throw Error(ErrorCode::UnknownContract, contract_id.hex());
  return load_parameters(*state, store, contract_id);
}

SurveyParameters load_parameters(const ContractState& state, const cas::CasStore& store, const Digest& contract_id) {
  auto blob = store.get(state.params_address);
  const auto* bytes = std::get_if<Bytes>(&blob);
  if (bytes == nullptr) throw Error(ErrorCode::NotFound, "survey parameters " + state.params_address.hex());
  auto params = SurveyParameters::from_document(canonical::decode(codewe::to_string(*bytes)));
  if (params.survey_id != contract_id || params.compute_id() != state.params_digest) {
    throw Error(ErrorCode::IntegrityViolation, "parameters do not match the on-chain digest");
  }
  return params;
}

}  // namespace codewe::contract
