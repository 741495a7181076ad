#include "codewe/contract/survey.hpp"

#include <set>

namespace codewe::contract {

using Document = canonical::Document;

Document to_document(const QuestionItem& item) {
  return {{"item_id", item.item_id},           {"text", item.text},
          {"dimension", item.dimension},       {"scale_ref", item.scale_ref},
          {"reverse_scored", item.reverse_scored}, {"stigma_reviewed", item.stigma_reviewed}};
}

QuestionItem question_item_from_document(const Document& doc) {
  QuestionItem item;
  item.item_id = doc.at("item_id").get<std::string>();
  item.text = doc.at("text").get<std::string>();
  item.dimension = doc.at("dimension").get<std::string>();
  item.scale_ref = doc.at("scale_ref").get<std::string>();
  item.reverse_scored = doc.at("reverse_scored").get<bool>();
  item.stigma_reviewed = doc.at("stigma_reviewed").get<bool>();
  return item;
}

Document SurveyRules::to_document() const {
  return {{"max_responses", max_responses},
          {"open_at", open_at},
          {"close_at", close_at},
          {"one_response_per_key", one_response_per_key},
          {"eligibility_token_count", eligibility_token_count}};
}

SurveyRules SurveyRules::from_document(const Document& doc) {
  SurveyRules rules;
  rules.max_responses = doc.at("max_responses").get<std::uint64_t>();
  rules.open_at = doc.at("open_at").get<std::uint64_t>();
  rules.close_at = doc.at("close_at").get<std::uint64_t>();
  rules.one_response_per_key = doc.at("one_response_per_key").get<bool>();
  rules.eligibility_token_count = doc.at("eligibility_token_count").get<std::uint64_t>();
  return rules;
}

void SurveyRules::validate() const {
  if (max_responses < 1) throw Error(ErrorCode::InvalidParameters, "max_responses must be >= 1");
  if (open_at >= close_at) throw Error(ErrorCode::InvalidParameters, "open_at must precede close_at");
  if (!one_response_per_key) throw Error(ErrorCode::InvalidParameters, "one_response_per_key is fixed to true");
}

Document SurveyParameters::to_document(bool include_id) const {
  Document items_doc = Document::array();
  for (const auto& item : items) items_doc.push_back(contract::to_document(item));
  Document scales_doc = Document::object();
  for (const auto& [name, scale] : scales) {
    scales_doc[name] = {{"min", scale.min}, {"max", scale.max}, {"labels", scale.labels}};
  }
  Document doc = {{"title", title},
                  {"items", items_doc},
                  {"scales", scales_doc},
                  {"rules", rules.to_document()},
                  {"coproduction_digest", coproduction_digest.hex()},
                  {"version", version}};
  if (include_id) doc["survey_id"] = survey_id.hex();
  return doc;
}

SurveyParameters SurveyParameters::from_document(const Document& doc) {
  try {
    SurveyParameters p;
    if (doc.contains("survey_id")) p.survey_id = crypto::digest_from_hex(doc.at("survey_id").get<std::string>());
    p.title = doc.at("title").get<std::string>();
    for (const auto& item : doc.at("items")) p.items.push_back(question_item_from_document(item));
    for (const auto& [name, s] : doc.at("scales").items()) {
      LikertScale scale;
      scale.min = s.at("min").get<std::int64_t>();
      scale.max = s.at("max").get<std::int64_t>();
      scale.labels = s.at("labels").get<std::vector<std::string>>();
      p.scales.emplace(name, std::move(scale));
    }
    p.rules = SurveyRules::from_document(doc.at("rules"));
    p.coproduction_digest = crypto::digest_from_hex(doc.at("coproduction_digest").get<std::string>());
    p.version = doc.at("version").get<std::uint64_t>();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidParameters, e.what());
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidParameters, e.what());
  }
}

const QuestionItem* SurveyParameters::find_item(std::string_view item_id) const {
  for (const auto& item : items) {
    if (item.item_id == item_id) return &item;
  }
  return nullptr;
}

const LikertScale& SurveyParameters::scale_of(const QuestionItem& item) const {
  auto it = scales.find(item.scale_ref);
  if (it == scales.end()) throw Error(ErrorCode::InvalidParameters, "undefined scale " + item.scale_ref);
  return it->second;
}

void SurveyParameters::validate_structure() const {
  if (items.empty()) throw Error(ErrorCode::InvalidParameters, "survey has no items");
  if (version < 1) throw Error(ErrorCode::InvalidParameters, "version must be >= 1");
  for (const auto& [name, scale] : scales) {
    if (scale.min >= scale.max) throw Error(ErrorCode::InvalidParameters, "scale " + name + " has min >= max");
    if (!scale.labels.empty() && scale.labels.size() != static_cast<std::size_t>(scale.max - scale.min + 1)) {
      throw Error(ErrorCode::InvalidParameters, "scale " + name + " label count mismatch");
    }
  }
  std::set<std::string> ids;
  for (const auto& item : items) {
    if (item.item_id.empty()) throw Error(ErrorCode::InvalidParameters, "empty item_id");
    if (!ids.insert(item.item_id).second) throw Error(ErrorCode::InvalidParameters, "duplicate item_id " + item.item_id);
    if (!scales.contains(item.scale_ref)) {
      throw Error(ErrorCode::InvalidParameters, "item " + item.item_id + " references undefined scale");
    }
  }
  rules.validate();
}

}  // namespace codewe::contract
