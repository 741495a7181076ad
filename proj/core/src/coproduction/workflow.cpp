#include "codewe/coproduction/workflow.hpp"

#include <algorithm>
#include <set>

namespace codewe::coproduction {

namespace {

void check_mutable(const CoProductionRecord& record, std::optional<std::uint64_t> expected_revision) {
  if (record.status == RecordStatus::Finalized) throw Error(ErrorCode::RecordFinalized);
  if (expected_revision && *expected_revision != record.revision) {
    throw Error(ErrorCode::ConflictRetry, "record is at revision " + std::to_string(record.revision));
  }
}

const Stakeholder& require_panelist(const CoProductionRecord& record, std::string_view id) {
  const auto* s = record.find_stakeholder(id);
  if (s == nullptr) throw Error(ErrorCode::Unauthorized, std::string(id) + " is not on the panel");
  return *s;
}

void touch(CoProductionRecord& record) {
  ++record.clock;
  ++record.revision;
}

auto find_item(std::vector<QuestionItem>& items, std::string_view id) {
  return std::find_if(items.begin(), items.end(), [&](const QuestionItem& i) { return i.item_id == id; });
}

}  // namespace

CoProductionRecord open_codesign(SurveyParameters initial_draft, std::vector<Stakeholder> stakeholders,
                                 QuorumPolicy quorum) {
  if (stakeholders.empty()) throw Error(ErrorCode::EmptyPanel);
  std::set<std::string> ids;
  std::set<crypto::PublicKey> keys;
  for (const auto& s : stakeholders) {
    if (!ids.insert(s.stakeholder_id).second || !keys.insert(s.public_key).second) {
      throw Error(ErrorCode::DuplicateStakeholder, s.stakeholder_id);
    }
  }
  if (quorum.denominator == 0 || quorum.numerator > quorum.denominator) {
    throw Error(ErrorCode::InvalidParameters, "quorum fraction must lie in [0, 1]");
  }
  initial_draft.survey_id = {};
  initial_draft.coproduction_digest = {};
  initial_draft.validate_structure();

  CoProductionRecord record;
  record.panel = std::move(stakeholders);
  record.drafts.push_back({1, std::move(initial_draft)});
  record.quorum = quorum;

  canonical::Document panel = canonical::Document::array();
  for (const auto& s : record.panel) panel.push_back(s.public_key.hex());
  record.record_id = canonical::digest({{"initial_draft", record.drafts[0].draft.to_document(false)}, {"panel", panel}});
  return record;
}

std::uint64_t propose_revision(CoProductionRecord& record, std::string_view stakeholder_id, const ItemChange& change,
                               std::string rationale, std::optional<std::uint64_t> expected_revision) {
  check_mutable(record, expected_revision);
  require_panelist(record, stakeholder_id);

  SurveyParameters next = record.latest().draft;
  auto it = find_item(next.items, change.kind == ItemChange::Kind::Remove ? change.item_id : change.item.item_id);
  switch (change.kind) {
    case ItemChange::Kind::Add:
      if (it != next.items.end()) throw Error(ErrorCode::InvalidParameters, "item exists: " + change.item.item_id);
      next.items.push_back(change.item);
      next.items.back().stigma_reviewed = false;
      break;
    case ItemChange::Kind::Edit:
      if (it == next.items.end()) throw Error(ErrorCode::UnknownItem, change.item.item_id);
      *it = change.item;
      it->stigma_reviewed = false;
      break;
    case ItemChange::Kind::Remove:
      if (it == next.items.end()) throw Error(ErrorCode::UnknownItem, change.item_id);
      next.items.erase(it);
      break;
  }
  next.validate_structure();

  touch(record);
  std::uint64_t version = record.latest_version() + 1;
  record.drafts.push_back({version, std::move(next)});
  record.proposals.push_back({std::string(stakeholder_id), change, std::move(rationale), version, record.clock});
  record.signoffs.clear();
  return version;
}

void record_feedback(CoProductionRecord& record, FeedbackRound round, std::optional<std::uint64_t> expected_revision) {
  check_mutable(record, expected_revision);
  for (const auto& e : round.entries) require_panelist(record, e.stakeholder_id);
  touch(record);
  round.draft_version = record.latest_version();
  round.logical_time = record.clock;
  record.feedback_rounds.push_back(std::move(round));
}

std::uint64_t flag_stigma(CoProductionRecord& record, std::string_view raised_by, std::string_view item_id,
                          std::string rationale, std::optional<std::uint64_t> expected_revision) {
  check_mutable(record, expected_revision);
  require_panelist(record, raised_by);
  if (record.latest().draft.find_item(item_id) == nullptr) throw Error(ErrorCode::UnknownItem, std::string(item_id));
  touch(record);
  StigmaFlag flag;
  flag.flag_id = record.stigma_flags.size();
  flag.item_id = std::string(item_id);
  flag.raised_by = std::string(raised_by);
  flag.rationale = std::move(rationale);
  flag.raised_at_version = record.latest_version();
  record.stigma_flags.push_back(std::move(flag));
  return record.stigma_flags.back().flag_id;
}

void resolve_stigma(CoProductionRecord& record, std::uint64_t flag_id, std::uint64_t revised_version,
                    std::optional<std::uint64_t> expected_revision) {
  check_mutable(record, expected_revision);
  if (flag_id >= record.stigma_flags.size()) throw Error(ErrorCode::UnknownFlag, std::to_string(flag_id));
  StigmaFlag& flag = record.stigma_flags[flag_id];
  if (flag.resolved) throw Error(ErrorCode::StaleResolution, "flag already resolved");
  if (revised_version <= flag.raised_at_version) {
    throw Error(ErrorCode::StaleResolution, "version " + std::to_string(revised_version) +
                                                " does not postdate the flag (raised at " +
                                                std::to_string(flag.raised_at_version) + ")");
  }
  if (revised_version > record.latest_version()) {
    throw Error(ErrorCode::IndexOutOfRange, "no draft version " + std::to_string(revised_version));
  }
  touch(record);
  flag.resolution = revised_version;
  flag.resolved = true;
}

std::string signoff_message(const CoProductionRecord& record, std::uint64_t draft_version) {
  if (draft_version == 0 || draft_version > record.drafts.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "no draft version " + std::to_string(draft_version));
  }
  const auto& draft = record.drafts[draft_version - 1];
  return canonical::encode({{"record_id", record.record_id.hex()},
                            {"draft_version", draft.version},
                            {"draft_digest", draft.digest().hex()}});
}

crypto::Signature sign_draft(const CoProductionRecord& record, std::uint64_t draft_version,
                             const crypto::PrivateKey& key) {
  return crypto::sign(key, signoff_message(record, draft_version));
}

void signoff(CoProductionRecord& record, std::string_view stakeholder_id, std::uint64_t draft_version,
             const crypto::Signature& signature, std::optional<std::uint64_t> expected_revision) {
  check_mutable(record, expected_revision);
  const auto& who = require_panelist(record, stakeholder_id);
  if (draft_version != record.latest_version()) {
    throw Error(ErrorCode::StaleSignOff, "latest draft is " + std::to_string(record.latest_version()));
  }
  if (!crypto::verify(who.public_key, signoff_message(record, draft_version), signature)) {
    throw Error(ErrorCode::InvalidSignature, std::string(stakeholder_id));
  }
  touch(record);
  std::erase_if(record.signoffs, [&](const SignOff& s) { return s.stakeholder_id == stakeholder_id; });
  record.signoffs.push_back({std::string(stakeholder_id), draft_version, record.latest().digest(), signature});
}

bool quorum_met(const CoProductionRecord& record) {
  std::set<std::string> signers;
  std::set<Role> roles;
  for (const auto& s : record.signoffs) {
    const auto* who = record.find_stakeholder(s.stakeholder_id);
    if (who == nullptr || s.draft_version != record.latest_version()) continue;
    signers.insert(s.stakeholder_id);
    roles.insert(who->role);
  }
  if (signers.size() < record.quorum.required_signers(record.panel.size())) return false;
  if (record.quorum.require_every_role && roles.size() != std::size(kAllRoles)) return false;
  return !signers.empty();
}

SurveyParameters finalized_parameters(const CoProductionRecord& record, const Digest& record_digest) {
  SurveyParameters params = record.latest().draft;
  for (auto& item : params.items) item.stigma_reviewed = true;
  params.coproduction_digest = record_digest;
  params.seal();
  return params;
}

FinalizeResult finalize(CoProductionRecord& record, cas::CasStore& store,
                        std::optional<std::uint64_t> expected_revision) {
  check_mutable(record, expected_revision);
  if (auto open = record.unresolved_flags(); open > 0) {
    throw Error(ErrorCode::FinalizationBlocked, std::to_string(open) + " unresolved stigma flag(s)");
  }
  const auto latest_digest = record.latest().digest();
  for (const auto& s : record.signoffs) {
    if (s.draft_version != record.latest_version() || s.draft_digest != latest_digest) {
      throw Error(ErrorCode::StaleSignOff, s.stakeholder_id);
    }
    const auto* who = record.find_stakeholder(s.stakeholder_id);
    if (who == nullptr) throw Error(ErrorCode::Unauthorized, s.stakeholder_id);
    if (!crypto::verify(who->public_key, signoff_message(record, s.draft_version), s.signature)) {
      throw Error(ErrorCode::InvalidSignature, s.stakeholder_id);
    }
  }
  if (!quorum_met(record)) {
    throw Error(ErrorCode::QuorumNotMet, std::to_string(record.signoffs.size()) + " of " +
                                             std::to_string(record.quorum.required_signers(record.panel.size())) +
                                             " required sign-offs, or a role is missing");
  }

  CoProductionRecord finalized = record;
  touch(finalized);
  finalized.status = RecordStatus::Finalized;
  auto record_digest = store.put(canonical::encode(finalized.to_document()));
  auto params = finalized_parameters(finalized, record_digest);
  params.validate_structure();
  record = std::move(finalized);
  return {std::move(params), record_digest};
}

}  // namespace codewe::coproduction
