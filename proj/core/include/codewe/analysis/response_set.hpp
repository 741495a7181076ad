#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "codewe/contract/state.hpp"
#include "codewe/contract/survey.hpp"

namespace codewe::analysis {

using crypto::Digest;

struct NonceTag {};
using ClientNonce = FixedBytes<16, NonceTag>;

/// One respondent's answers. Its canonical encoding is the CAS blob, and the
/// digest of that encoding is the on-chain response_digest.
struct ResponseSet {
  Digest survey_id;
  std::map<std::string, std::int64_t> answers;  // item_id -> scale value
  crypto::PublicKey respondent_public_key;
  ClientNonce client_nonce;

  friend bool operator==(const ResponseSet&, const ResponseSet&) = default;

  canonical::Document to_document() const;
  /// Throws InvalidResponse.
  static ResponseSet from_document(const canonical::Document& doc);

  std::string encode() const { return canonical::encode(to_document()); }
  Digest digest() const { return crypto::hash(encode()); }

  /// Every item answered exactly once, no unknown items, every value inside
  /// its scale, survey_id matching. Throws InvalidResponse.
  void validate(const contract::SurveyParameters& params) const;
};

/// Builds and validates a response with a fresh random nonce.
ResponseSet make_response(const contract::SurveyParameters& params, std::map<std::string, std::int64_t> answers,
                          const crypto::PublicKey& respondent);

/// What a respondent's client produces: the blob to store and the signed
/// commitment to submit.
struct PreparedSubmission {
  ResponseSet response;
  std::string blob;
  contract::ResponseCommitment commitment;
};

PreparedSubmission prepare_submission(const contract::SurveyParameters& params,
                                      std::map<std::string, std::int64_t> answers, const crypto::KeyPair& respondent,
                                      const contract::EligibilityToken& token);

}  // namespace codewe::analysis
