#pragma once

#include <optional>

#include "codewe/coproduction/record.hpp"

namespace codewe::coproduction {

// Every mutating operation takes an optional expected revision; a mismatch
// throws ConflictRetry and leaves the record unchanged. Any operation on a
// Finalized record throws RecordFinalized.

/// Throws EmptyPanel, DuplicateStakeholder (repeated id or key) or
/// InvalidParameters for a structurally broken draft.
CoProductionRecord open_codesign(SurveyParameters initial_draft, std::vector<Stakeholder> stakeholders,
                                 QuorumPolicy quorum = {});

/// Appends a new draft and clears all sign-offs. Returns the new version.
/// Throws Unauthorized (not on panel), UnknownItem, InvalidParameters.
std::uint64_t propose_revision(CoProductionRecord& record, std::string_view stakeholder_id, const ItemChange& change,
                               std::string rationale, std::optional<std::uint64_t> expected_revision = std::nullopt);

/// Stamps the round with the latest draft version and logical time.
void record_feedback(CoProductionRecord& record, FeedbackRound round,
                     std::optional<std::uint64_t> expected_revision = std::nullopt);

/// Returns the new flag id. Throws Unauthorized or UnknownItem.
std::uint64_t flag_stigma(CoProductionRecord& record, std::string_view raised_by, std::string_view item_id,
                          std::string rationale, std::optional<std::uint64_t> expected_revision = std::nullopt);

/// `revised_version` must be a later draft than the one the flag was raised
/// on, and either contain the revised item or have removed it. Throws
/// UnknownFlag, StaleResolution, IndexOutOfRange.
void resolve_stigma(CoProductionRecord& record, std::uint64_t flag_id, std::uint64_t revised_version,
                    std::optional<std::uint64_t> expected_revision = std::nullopt);

/// Canonical bytes of {record_id, draft_version, draft_digest}.
std::string signoff_message(const CoProductionRecord& record, std::uint64_t draft_version);

/// Convenience for stakeholders holding their key.
crypto::Signature sign_draft(const CoProductionRecord& record, std::uint64_t draft_version,
                             const crypto::PrivateKey& key);

/// Throws Unauthorized, StaleSignOff (not the latest draft), InvalidSignature.
/// Signing again replaces the stakeholder's earlier sign-off.
void signoff(CoProductionRecord& record, std::string_view stakeholder_id, std::uint64_t draft_version,
             const crypto::Signature& signature, std::optional<std::uint64_t> expected_revision = std::nullopt);

/// Quorum predicate over the current sign-offs.
bool quorum_met(const CoProductionRecord& record);

struct FinalizeResult {
  SurveyParameters params;
  Digest record_digest;  // CAS address of the finalised record
};

/// Checks, in order: unresolved flags (FinalizationBlocked), sign-off
/// freshness and signatures (StaleSignOff, InvalidSignature), quorum
/// (QuorumNotMet). On success the record becomes Finalized, is stored in
/// `store`, and the returned parameters embed its digest with every item
/// marked stigma_reviewed.
FinalizeResult finalize(CoProductionRecord& record, cas::CasStore& store,
                        std::optional<std::uint64_t> expected_revision = std::nullopt);

/// The survey parameters a finalised record yields.
SurveyParameters finalized_parameters(const CoProductionRecord& record, const Digest& record_digest);

}  // namespace codewe::coproduction
