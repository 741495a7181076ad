#include "codewe/contract/state.hpp"

#include <algorithm>
#include <initializer_list>

namespace codewe::contract {

namespace {

using Document = canonical::Document;

void require_exact_keys(const Document& body, std::initializer_list<std::string_view> keys) {
  if (!body.is_object() || body.size() != keys.size()) {
    throw Error(ErrorCode::MalformedTransaction, "unexpected body fields");
  }
  for (auto key : keys) {
    if (!body.contains(std::string(key))) throw Error(ErrorCode::MalformedTransaction, "missing " + std::string(key));
  }
}

template <class T>
T fixed_from(const Document& body, const char* key) {
  const auto& v = body.at(key);
  if (!v.is_string()) throw Error(ErrorCode::MalformedTransaction, std::string(key) + " must be hex");
  return T::from_hex(v.get_ref<const std::string&>(), ErrorCode::MalformedTransaction);
}

// Wraps body parsing so every schema problem surfaces as MalformedTransaction.
template <class F>
auto parse_body(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedTransaction, e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::MalformedTransaction) throw;
    throw Error(ErrorCode::MalformedTransaction, e.what());
  }
}

}  // namespace

std::string_view to_string(Phase phase) noexcept {
  switch (phase) {
    case Phase::Deployed: return "Deployed";
    case Phase::Open: return "Open";
    case Phase::Closed: return "Closed";
    case Phase::Analyzed: return "Analyzed";
  }
  return "Unknown";
}

std::optional<Phase> phase_from_string(std::string_view name) noexcept {
  for (auto p : kAllPhases) {
    if (to_string(p) == name) return p;
  }
  return std::nullopt;
}

std::string commitment_message(const Digest& survey_id, const Digest& response_digest, const Digest& cas_address) {
  return canonical::encode(
      {{"survey_id", survey_id.hex()}, {"response_digest", response_digest.hex()}, {"cas_address", cas_address.hex()}});
}

bool ResponseCommitment::signature_valid(const Digest& survey_id) const {
  return crypto::verify(respondent_public_key, commitment_message(survey_id, response_digest, cas_address),
                        respondent_signature);
}

Document ResponseCommitment::to_body() const {
  return {{"response_digest", response_digest.hex()},
          {"cas_address", cas_address.hex()},
          {"respondent_public_key", respondent_public_key.hex()},
          {"respondent_signature", respondent_signature.hex()},
          {"eligibility_token", eligibility_token.hex()}};
}

ResponseCommitment ResponseCommitment::from_body(const Document& body) {
  return parse_body([&] {
    require_exact_keys(body, {"response_digest", "cas_address", "respondent_public_key", "respondent_signature",
                              "eligibility_token"});
    ResponseCommitment c;
    c.response_digest = fixed_from<Digest>(body, "response_digest");
    c.cas_address = fixed_from<Digest>(body, "cas_address");
    c.respondent_public_key = fixed_from<crypto::PublicKey>(body, "respondent_public_key");
    c.respondent_signature = fixed_from<crypto::Signature>(body, "respondent_signature");
    c.eligibility_token = fixed_from<EligibilityToken>(body, "eligibility_token");
    return c;
  });
}

Document ResponseCommitment::to_document() const {
  Document doc = to_body();
  doc["logical_time"] = logical_time;
  return doc;
}

ResponseCommitment make_commitment(const Digest& survey_id, const Digest& response_digest,
                                   const crypto::KeyPair& respondent, const EligibilityToken& token) {
  ResponseCommitment c;
  c.response_digest = response_digest;
  c.cas_address = response_digest;
  c.respondent_public_key = respondent.public_key;
  c.respondent_signature =
      crypto::sign(respondent.private_key, commitment_message(survey_id, response_digest, c.cas_address));
  c.eligibility_token = token;
  return c;
}

Document DeployBody::to_body() const {
  Document hashes = Document::array();
  for (const auto& h : token_hashes) hashes.push_back(h.hex());
  return {{"params_digest", params_digest.hex()},
          {"params_address", params_address.hex()},
          {"coproduction_digest", coproduction_digest.hex()},
          {"admin_signature", admin_signature.hex()},
          {"rules", rules.to_document()},
          {"token_hashes", hashes}};
}

DeployBody DeployBody::from_body(const Document& body) {
  return parse_body([&] {
    require_exact_keys(body, {"params_digest", "params_address", "coproduction_digest", "admin_signature", "rules",
                              "token_hashes"});
    DeployBody d;
    d.params_digest = fixed_from<Digest>(body, "params_digest");
    d.params_address = fixed_from<Digest>(body, "params_address");
    d.coproduction_digest = fixed_from<Digest>(body, "coproduction_digest");
    d.admin_signature = fixed_from<crypto::Signature>(body, "admin_signature");
    const auto& rules = body.at("rules");
    require_exact_keys(rules, {"max_responses", "open_at", "close_at", "one_response_per_key",
                               "eligibility_token_count"});
    d.rules = SurveyRules::from_document(rules);
    for (const auto& h : body.at("token_hashes")) {
      if (!h.is_string()) throw Error(ErrorCode::MalformedTransaction, "token hash must be hex");
      d.token_hashes.push_back(Digest::from_hex(h.get_ref<const std::string&>(), ErrorCode::MalformedTransaction));
    }
    return d;
  });
}

Document CommitAnalysisBody::to_body() const {
  return {{"analysis_root", analysis_root.hex()}, {"report_digest", report_digest.hex()}};
}

CommitAnalysisBody CommitAnalysisBody::from_body(const Document& body) {
  return parse_body([&] {
    require_exact_keys(body, {"analysis_root", "report_digest"});
    return CommitAnalysisBody{fixed_from<Digest>(body, "analysis_root"), fixed_from<Digest>(body, "report_digest")};
  });
}

Document RecordErasureBody::to_body() const {
  return {{"response_digest", response_digest.hex()}, {"tombstone_digest", tombstone_digest.hex()}};
}

RecordErasureBody RecordErasureBody::from_body(const Document& body) {
  return parse_body([&] {
    require_exact_keys(body, {"response_digest", "tombstone_digest"});
    return RecordErasureBody{fixed_from<Digest>(body, "response_digest"), fixed_from<Digest>(body, "tombstone_digest")};
  });
}

const ResponseCommitment* ContractState::find_commitment(const Digest& response_digest) const {
  for (const auto& c : commitments) {
    if (c.response_digest == response_digest) return &c;
  }
  return nullptr;
}

bool ContractState::is_erased(const Digest& response_digest) const {
  return std::find(erasures.begin(), erasures.end(), response_digest) != erasures.end();
}

Document ContractState::to_document() const {
  auto hex_list = [](const auto& range) {
    Document out = Document::array();
    for (const auto& v : range) out.push_back(v.hex());
    return out;
  };
  Document commitments_doc = Document::array();
  for (const auto& c : commitments) commitments_doc.push_back(c.to_document());
  Document doc = {{"phase", std::string(to_string(phase))},
                  {"params_digest", params_digest.hex()},
                  {"params_address", params_address.hex()},
                  {"coproduction_digest", coproduction_digest.hex()},
                  {"admin_public_key", admin_public_key.hex()},
                  {"admin_signature", admin_signature.hex()},
                  {"rules", rules.to_document()},
                  {"minted_token_hashes", hex_list(minted_token_hashes)},
                  {"commitments", commitments_doc},
                  {"used_tokens", hex_list(used_tokens)},
                  {"used_keys", hex_list(used_keys)},
                  {"erasures", hex_list(erasures)}};
  if (analysis_root) doc["analysis_root"] = analysis_root->hex();
  if (report_digest) doc["report_digest"] = report_digest->hex();
  return doc;
}

std::optional<ErrorCode> ContractRegistry::apply(const Transaction& tx, std::uint64_t logical_time) {
  try {
    if (tx.kind == TxKind::Deploy) {
      if (contracts_.contains(tx.contract_id)) return ErrorCode::DuplicateContract;
      auto body = DeployBody::from_body(tx.body);
      if (body.params_digest != tx.contract_id) return ErrorCode::MalformedTransaction;
      if (!crypto::verify(tx.sender_public_key, body.params_digest.view(), body.admin_signature)) {
        return ErrorCode::InvalidSignature;
      }
      try {
        body.rules.validate();
      } catch (const Error&) {
        return ErrorCode::MalformedTransaction;
      }
      std::set<Digest> minted(body.token_hashes.begin(), body.token_hashes.end());
      if (minted.size() != body.token_hashes.size() || minted.size() != body.rules.eligibility_token_count) {
        return ErrorCode::MalformedTransaction;
      }
      ContractState state;
      state.phase = Phase::Deployed;
      state.params_digest = body.params_digest;
      state.params_address = body.params_address;
      state.coproduction_digest = body.coproduction_digest;
      state.admin_public_key = tx.sender_public_key;
      state.admin_signature = body.admin_signature;
      state.rules = body.rules;
      state.minted_token_hashes = std::move(minted);
      contracts_.emplace(tx.contract_id, std::move(state));
      return std::nullopt;
    }

    auto it = contracts_.find(tx.contract_id);
    if (it == contracts_.end()) return ErrorCode::UnknownContract;
    ContractState& state = it->second;
    const bool from_admin = tx.sender_public_key == state.admin_public_key;

    switch (tx.kind) {
      case TxKind::Open:
      case TxKind::Close: {
        if (!from_admin) return ErrorCode::Unauthorized;
        if (!tx.body.is_object() || !tx.body.empty()) return ErrorCode::MalformedTransaction;
        Phase from = tx.kind == TxKind::Open ? Phase::Deployed : Phase::Open;
        if (state.phase != from) return ErrorCode::InvalidTransition;
        state.phase = tx.kind == TxKind::Open ? Phase::Open : Phase::Closed;
        return std::nullopt;
      }
      case TxKind::SubmitCommitment: {
        auto c = ResponseCommitment::from_body(tx.body);
        if (tx.sender_public_key != c.respondent_public_key) return ErrorCode::Unauthorized;
        if (state.phase != Phase::Open) return ErrorCode::SurveyClosed;
        // Half-open window: a submission at exactly close_at is late.
        if (logical_time < state.rules.open_at || logical_time >= state.rules.close_at) return ErrorCode::SurveyClosed;
        if (c.cas_address != c.response_digest) return ErrorCode::MalformedTransaction;
        if (!c.signature_valid(tx.contract_id)) return ErrorCode::InvalidSignature;
        if (state.commitments.size() >= state.rules.max_responses) return ErrorCode::SurveyFull;
        if (state.used_tokens.contains(c.eligibility_token)) return ErrorCode::TokenReplay;
        if (!state.minted_token_hashes.contains(token_hash(c.eligibility_token))) return ErrorCode::UnknownToken;
        if (state.used_keys.contains(c.respondent_public_key)) return ErrorCode::DuplicateKey;
        if (state.find_commitment(c.response_digest) != nullptr) return ErrorCode::DuplicateKey;
        c.logical_time = logical_time;
        state.used_tokens.insert(c.eligibility_token);
        state.used_keys.insert(c.respondent_public_key);
        state.commitments.push_back(std::move(c));
        return std::nullopt;
      }
      case TxKind::CommitAnalysis: {
        if (!from_admin) return ErrorCode::Unauthorized;
        auto body = CommitAnalysisBody::from_body(tx.body);
        if (state.phase == Phase::Analyzed) return ErrorCode::AlreadyAnalyzed;
        if (state.phase != Phase::Closed) return ErrorCode::InvalidTransition;
        state.analysis_root = body.analysis_root;
        state.report_digest = body.report_digest;
        state.phase = Phase::Analyzed;
        return std::nullopt;
      }
      case TxKind::RecordErasure: {
        if (!from_admin) return ErrorCode::Unauthorized;
        auto body = RecordErasureBody::from_body(tx.body);
        if (state.find_commitment(body.response_digest) == nullptr) return ErrorCode::UnknownCommitment;
        if (state.is_erased(body.response_digest)) return ErrorCode::AlreadyErased;
        state.erasures.push_back(body.response_digest);
        return std::nullopt;
      }
      case TxKind::Deploy:
        break;
    }
    return ErrorCode::MalformedTransaction;
  } catch (const Error& e) {
    return e.code() == ErrorCode::MalformedTransaction ? e.code() : ErrorCode::MalformedTransaction;
  }
}

const ContractState* ContractRegistry::find(const Digest& contract_id) const {
  auto it = contracts_.find(contract_id);
  return it == contracts_.end() ? nullptr : &it->second;
}

Document ContractRegistry::to_document() const {
  Document doc = Document::object();
  for (const auto& [id, state] : contracts_) doc[id.hex()] = state.to_document();
  return doc;
}

}  // namespace codewe::contract
