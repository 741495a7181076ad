#pragma once

#include <vector>

#include "codewe/cas/cas_store.hpp"
#include "codewe/contract/state.hpp"
#include "codewe/ledger/ledger.hpp"

namespace codewe::contract {

using ledger::TxReceipt;

struct DeployResult {
  Digest contract_id;
  TxReceipt receipt;
  std::vector<EligibilityToken> tokens;  // hand out of band; only hashes go on-chain
};

/// Checks the stigma gate (StigmaGateFailed), survey_id and structure
/// (InvalidParameters) and that the co-production record resolves in CAS
/// (CoProductionMissing); stores the canonical parameters in CAS, mints
/// `rules.eligibility_token_count` random tokens and submits the Deploy
/// transaction. Ledger-level rejections such as DuplicateContract come back
/// in the receipt.
DeployResult deploy(ledger::Ledger& ledger, cas::CasStore& store, const SurveyParameters& params,
                    const crypto::KeyPair& admin);

/// Same, with caller-provided tokens (deterministic tests and pre-minted token files).
DeployResult deploy(ledger::Ledger& ledger, cas::CasStore& store, const SurveyParameters& params,
                    const crypto::KeyPair& admin, std::vector<EligibilityToken> tokens);

std::vector<EligibilityToken> mint_tokens(std::size_t count);

TxReceipt open_survey(ledger::Ledger& ledger, const Digest& contract_id, const crypto::KeyPair& admin);
TxReceipt close_survey(ledger::Ledger& ledger, const Digest& contract_id, const crypto::KeyPair& admin);

/// The respondent signs the transaction with the same key as the commitment.
TxReceipt submit_commitment(ledger::Ledger& ledger, const Digest& contract_id, const ResponseCommitment& commitment,
                            const crypto::KeyPair& respondent);

TxReceipt commit_analysis(ledger::Ledger& ledger, const Digest& contract_id, const Digest& analysis_root,
                          const Digest& report_digest, const crypto::KeyPair& admin);

TxReceipt record_erasure(ledger::Ledger& ledger, const Digest& contract_id, const Digest& response_digest,
                         const Digest& tombstone_digest, const crypto::KeyPair& admin);

/// Loads the deployed parameters from CAS via the on-chain params address
/// and checks them against the on-chain digest. Throws UnknownContract,
/// NotFound or IntegrityViolation.
SurveyParameters load_parameters(const ledger::Ledger& ledger, const cas::CasStore& store, const Digest& contract_id);
SurveyParameters load_parameters(const ContractState& state, const cas::CasStore& store, const Digest& contract_id);

}  // namespace codewe::contract
