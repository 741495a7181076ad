#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "codewe/cas/cas_store.hpp"
#include "codewe/contract/survey.hpp"
#include "codewe/crypto/signature.hpp"

namespace codewe::coproduction {

using contract::QuestionItem;
using contract::SurveyParameters;
using crypto::Digest;

enum class Role { Administrator, Researcher, EmployeeParticipant };
inline constexpr Role kAllRoles[] = {Role::Administrator, Role::Researcher, Role::EmployeeParticipant};

std::string_view to_string(Role role) noexcept;
std::optional<Role> role_from_string(std::string_view name) noexcept;

struct Stakeholder {
  std::string stakeholder_id;  // role pseudonym, e.g. "participant-2"
  Role role = Role::EmployeeParticipant;
  crypto::PublicKey public_key;

  friend bool operator==(const Stakeholder&, const Stakeholder&) = default;
};

canonical::Document to_document(const Stakeholder& s);
/// Throws InvalidParameters.
Stakeholder stakeholder_from_document(const canonical::Document& doc);

/// A numbered survey draft. survey_id and coproduction_digest stay unset
/// until finalisation.
struct DraftVersion {
  std::uint64_t version = 1;
  SurveyParameters draft;

  Digest digest() const;
  friend bool operator==(const DraftVersion&, const DraftVersion&) = default;
};

struct ItemChange {
  enum class Kind { Add, Edit, Remove };
  Kind kind = Kind::Edit;
  QuestionItem item;    // Add and Edit: the new item
  std::string item_id;  // Remove: the item to drop

  static ItemChange add(QuestionItem item) { return {Kind::Add, std::move(item), {}}; }
  static ItemChange edit(QuestionItem item) { return {Kind::Edit, std::move(item), {}}; }
  static ItemChange remove(std::string item_id) { return {Kind::Remove, {}, std::move(item_id)}; }

  friend bool operator==(const ItemChange&, const ItemChange&) = default;
};

canonical::Document change_to_document(const ItemChange& change);
/// Throws InvalidParameters or a json exception on malformed input.
ItemChange change_from_document(const canonical::Document& doc);

struct Proposal {
  std::string stakeholder_id;
  ItemChange change;
  std::string rationale;
  std::uint64_t resulting_version = 0;
  std::uint64_t logical_time = 0;

  friend bool operator==(const Proposal&, const Proposal&) = default;
};

struct FeedbackEntry {
  std::string stakeholder_id;
  std::string comment;

  friend bool operator==(const FeedbackEntry&, const FeedbackEntry&) = default;
};

struct FeedbackRound {
  std::string topic;
  std::vector<FeedbackEntry> entries;
  std::uint64_t draft_version = 0;  // set when recorded
  std::uint64_t logical_time = 0;   // set when recorded

  friend bool operator==(const FeedbackRound&, const FeedbackRound&) = default;
};

struct StigmaFlag {
  std::uint64_t flag_id = 0;
  std::string item_id;
  std::string raised_by;
  std::string rationale;
  std::uint64_t raised_at_version = 0;
  std::optional<std::uint64_t> resolution;  // later draft version
  bool resolved = false;

  friend bool operator==(const StigmaFlag&, const StigmaFlag&) = default;
};

struct SignOff {
  std::string stakeholder_id;
  std::uint64_t draft_version = 0;
  Digest draft_digest;
  crypto::Signature signature;

  friend bool operator==(const SignOff&, const SignOff&) = default;
};

/// Sign-off threshold: at least ceil(numerator/denominator * panel) distinct
/// signers, and (optionally) every role among them.
struct QuorumPolicy {
  std::uint64_t numerator = 2;
  std::uint64_t denominator = 3;
  bool require_every_role = true;

  std::uint64_t required_signers(std::uint64_t panel_size) const noexcept {
    return (numerator * panel_size + denominator - 1) / denominator;
  }

  friend bool operator==(const QuorumPolicy&, const QuorumPolicy&) = default;
};

enum class RecordStatus { InProgress, Finalized };

struct CoProductionRecord {
  Digest record_id;
  std::vector<Stakeholder> panel;
  std::vector<DraftVersion> drafts;
  std::vector<Proposal> proposals;
  std::vector<FeedbackRound> feedback_rounds;
  std::vector<StigmaFlag> stigma_flags;
  std::vector<SignOff> signoffs;  // for the latest draft only
  RecordStatus status = RecordStatus::InProgress;
  QuorumPolicy quorum;
  std::uint64_t clock = 0;     // logical time of the last mutation
  std::uint64_t revision = 0;  // bumped by every mutation; used for optimistic concurrency

  friend bool operator==(const CoProductionRecord&, const CoProductionRecord&) = default;

  const DraftVersion& latest() const { return drafts.back(); }
  std::uint64_t latest_version() const { return drafts.back().version; }
  const Stakeholder* find_stakeholder(std::string_view id) const;
  std::size_t unresolved_flags() const;

  canonical::Document to_document() const;
  static CoProductionRecord from_document(const canonical::Document& doc);
  Digest digest() const { return canonical::digest(to_document()); }

  /// Counts only; no free text, stakeholder ids or keys.
  canonical::Document public_summary() const;
};

}  // namespace codewe::coproduction
