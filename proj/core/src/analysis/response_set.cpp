#include "codewe/analysis/response_set.hpp"

namespace codewe::analysis {

using Document = canonical::Document;

Document ResponseSet::to_document() const {
  Document answers_doc = Document::object();
  for (const auto& [item, value] : answers) answers_doc[item] = value;
  return {{"survey_id", survey_id.hex()},
          {"answers", answers_doc},
          {"respondent_public_key", respondent_public_key.hex()},
          {"client_nonce", client_nonce.hex()}};
}

ResponseSet ResponseSet::from_document(const Document& doc) {
  try {
    if (!doc.is_object() || doc.size() != 4) throw Error(ErrorCode::InvalidResponse, "expected 4 fields");
    ResponseSet r;
    r.survey_id = crypto::digest_from_hex(doc.at("survey_id").get<std::string>());
    for (const auto& [item, value] : doc.at("answers").items()) {
      if (!value.is_number_integer()) throw Error(ErrorCode::InvalidResponse, "answer must be an integer");
      r.answers.emplace(item, value.get<std::int64_t>());
    }
    r.respondent_public_key = crypto::public_key_from_hex(doc.at("respondent_public_key").get<std::string>());
    r.client_nonce = ClientNonce::from_hex(doc.at("client_nonce").get<std::string>(), ErrorCode::InvalidResponse);
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidResponse, e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidResponse) throw;
    throw Error(ErrorCode::InvalidResponse, e.what());
  }
}

void ResponseSet::validate(const contract::SurveyParameters& params) const {
  if (survey_id != params.survey_id) throw Error(ErrorCode::InvalidResponse, "response belongs to another survey");
  if (answers.size() != params.items.size()) throw Error(ErrorCode::InvalidResponse, "answer count mismatch");
  for (const auto& item : params.items) {
    auto it = answers.find(item.item_id);
    if (it == answers.end()) throw Error(ErrorCode::InvalidResponse, "missing answer for " + item.item_id);
    const auto& scale = params.scale_of(item);
    if (it->second < scale.min || it->second > scale.max) {
      throw Error(ErrorCode::InvalidResponse, item.item_id + " out of range");
    }
  }
}

ResponseSet make_response(const contract::SurveyParameters& params, std::map<std::string, std::int64_t> answers,
                          const crypto::PublicKey& respondent) {
  ResponseSet r;
  r.survey_id = params.survey_id;
  r.answers = std::move(answers);
  r.respondent_public_key = respondent;
  crypto::random_bytes(r.client_nonce.array());
  r.validate(params);
  return r;
}

PreparedSubmission prepare_submission(const contract::SurveyParameters& params,
                                      std::map<std::string, std::int64_t> answers, const crypto::KeyPair& respondent,
                                      const contract::EligibilityToken& token) {
  PreparedSubmission out;
  out.response = make_response(params, std::move(answers), respondent.public_key);
  out.blob = out.response.encode();
  out.commitment = contract::make_commitment(params.survey_id, crypto::hash(out.blob), respondent, token);
  return out;
}

}  // namespace codewe::analysis
