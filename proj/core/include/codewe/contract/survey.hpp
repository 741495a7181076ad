#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "codewe/crypto/canonical.hpp"

namespace codewe::contract {

using crypto::Digest;

struct LikertScale {
  std::int64_t min = 1;
  std::int64_t max = 5;
  std::vector<std::string> labels;  // empty, or one label per point

  friend bool operator==(const LikertScale&, const LikertScale&) = default;
};

struct QuestionItem {
  std::string item_id;
  std::string text;
  std::string dimension;
  std::string scale_ref;
  bool reverse_scored = false;
  bool stigma_reviewed = false;

  friend bool operator==(const QuestionItem&, const QuestionItem&) = default;
};

canonical::Document to_document(const QuestionItem& item);
QuestionItem question_item_from_document(const canonical::Document& doc);

struct SurveyRules {
  std::uint64_t max_responses = 1;
  std::uint64_t open_at = 0;
  std::uint64_t close_at = UINT32_MAX;
  bool one_response_per_key = true;
  std::uint64_t eligibility_token_count = 0;

  friend bool operator==(const SurveyRules&, const SurveyRules&) = default;

  canonical::Document to_document() const;
  static SurveyRules from_document(const canonical::Document& doc);
  /// Throws InvalidParameters.
  void validate() const;
};

/// The finalised survey definition. `survey_id` is the digest of the
/// canonical document with the `survey_id` field left out.
struct SurveyParameters {
  Digest survey_id;
  std::string title;
  std::vector<QuestionItem> items;
  std::map<std::string, LikertScale> scales;
  SurveyRules rules;
  Digest coproduction_digest;
  std::uint64_t version = 1;

  friend bool operator==(const SurveyParameters&, const SurveyParameters&) = default;

  canonical::Document to_document(bool include_id = true) const;
  static SurveyParameters from_document(const canonical::Document& doc);

  Digest compute_id() const { return canonical::digest(to_document(false)); }
  void seal() { survey_id = compute_id(); }

  const QuestionItem* find_item(std::string_view item_id) const;
  const LikertScale& scale_of(const QuestionItem& item) const;

  /// Structural checks: items non-empty with unique ids, every scale_ref
  /// defined, min < max, label counts, rules. Does not check survey_id or the
  /// stigma gate. Throws InvalidParameters.
  void validate_structure() const;
};

}  // namespace codewe::contract
