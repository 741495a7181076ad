#include "codewe/analysis/report.hpp"

#include "codewe/contract/operations.hpp"
#include "codewe/util/file_io.hpp"

namespace codewe::analysis {

using Document = canonical::Document;
using contract::Phase;

std::string_view to_string(ExclusionReason reason) noexcept {
  switch (reason) {
    case ExclusionReason::Erased: return "erased";
    case ExclusionReason::IntegrityFailure: return "integrity_failure";
    case ExclusionReason::SignatureFailure: return "signature_failure";
  }
  return "unknown";
}

std::optional<ExclusionReason> exclusion_reason_from_string(std::string_view name) noexcept {
  for (auto r : {ExclusionReason::Erased, ExclusionReason::IntegrityFailure, ExclusionReason::SignatureFailure}) {
    if (to_string(r) == name) return r;
  }
  return std::nullopt;
}

Classification classify_commitment(const contract::ContractState& state, const contract::SurveyParameters& params,
                                   const contract::ResponseCommitment& commitment, const cas::CasStore& store) {
  if (state.is_erased(commitment.response_digest)) return {ExclusionReason::Erased, std::nullopt};
  if (!commitment.signature_valid(params.survey_id)) return {ExclusionReason::SignatureFailure, std::nullopt};

  cas::GetResult got;
  try {
    got = store.get(commitment.cas_address);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::IntegrityViolation) return {ExclusionReason::IntegrityFailure, std::nullopt};
    throw;
  }
  const auto* blob = std::get_if<Bytes>(&got);
  // A tombstone without an on-chain erasure record, or a missing blob.
  if (blob == nullptr || crypto::hash(*blob) != commitment.response_digest) {
    return {ExclusionReason::IntegrityFailure, std::nullopt};
  }
  try {
    auto response = ResponseSet::from_document(canonical::decode(codewe::to_string(*blob)));
    response.validate(params);
    if (response.respondent_public_key != commitment.respondent_public_key) {
      return {ExclusionReason::IntegrityFailure, std::nullopt};
    }
    return {std::nullopt, std::move(response)};
  } catch (const Error&) {
    return {ExclusionReason::IntegrityFailure, std::nullopt};
  } catch (const nlohmann::json::exception&) {
    return {ExclusionReason::IntegrityFailure, std::nullopt};
  }
}

IngestResult ingest(const contract::ContractState& state, const cas::CasStore& store, const Digest& contract_id) {
  if (state.phase != Phase::Closed && state.phase != Phase::Analyzed) {
    throw Error(ErrorCode::WrongPhase, std::string(contract::to_string(state.phase)));
  }
  IngestResult out{contract_id, contract::load_parameters(state, store, contract_id), state.admin_public_key, {}, {},
                   QueryStore()};
  for (const auto& c : state.commitments) {
    auto cls = classify_commitment(state, out.params, c, store);
    if (cls.reason) {
      out.excluded.push_back({c.response_digest, *cls.reason});
      continue;
    }
    out.store.insert_response(c.response_digest, c.logical_time, out.params, *cls.response);
    out.included.push_back(c.response_digest);
  }
  return out;
}

IngestResult ingest(const ledger::Ledger& ledger, const cas::CasStore& store, const Digest& contract_id) {
  auto state = ledger.contract_state(contract_id);
  if (!state) throw Error(ErrorCode::UnknownContract, contract_id.hex());
  return ingest(*state, store, contract_id);
}

Digest analysis_root_of(std::span<const Digest> included) {
  return included.empty() ? crypto::hash(std::string_view{}) : crypto::merkle_root(included);
}

namespace {

Document digest_list(std::span<const Digest> digests) {
  Document out = Document::array();
  for (const auto& d : digests) out.push_back(d.hex());
  return out;
}

template <typename F>
auto report_field(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ReportUnavailable, e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ReportUnavailable) throw;
    throw Error(ErrorCode::ReportUnavailable, e.what());
  }
}

}  // namespace

Document assemble_report_body(const IngestResult& ingested, const Statistics& stats) {
  Document excluded = Document::array();
  for (const auto& e : ingested.excluded) excluded.push_back({{"digest", e.digest.hex()}, {"reason", to_string(e.reason)}});
  Document items = Document::array();
  for (const auto& s : stats.items) items.push_back(s.to_document());
  Document dims = Document::array();
  for (const auto& d : stats.dimensions) dims.push_back(d.to_document());
  return {{"survey_id", ingested.contract_id.hex()},
          {"title", ingested.params.title},
          {"admin_public_key", ingested.admin_public_key.hex()},
          {"included_digests", digest_list(ingested.included)},
          {"excluded", excluded},
          {"items", items},
          {"dimensions", dims},
          {"total", stats.total.to_document()},
          {"analysis_root", analysis_root_of(ingested.included).hex()}};
}

AnalysisReport sign_report(Document body, const crypto::KeyPair& admin) {
  AnalysisReport r;
  r.body = std::move(body);
  r.report_digest = r.compute_digest();
  r.admin_public_key = admin.public_key;
  r.admin_signature = crypto::sign(admin.private_key, r.report_digest.view());
  return r;
}

bool AnalysisReport::signature_valid() const {
  try {
    return compute_digest() == report_digest && crypto::verify(admin_public_key, report_digest.view(), admin_signature);
  } catch (const Error&) {
    return false;
  }
}

Digest AnalysisReport::survey_id() const {
  return report_field([&] { return crypto::digest_from_hex(body.at("survey_id").get<std::string>()); });
}

std::vector<Digest> AnalysisReport::included_digests() const {
  return report_field([&] {
    std::vector<Digest> out;
    for (const auto& d : body.at("included_digests")) out.push_back(crypto::digest_from_hex(d.get<std::string>()));
    return out;
  });
}

std::vector<Exclusion> AnalysisReport::excluded() const {
  return report_field([&] {
    std::vector<Exclusion> out;
    for (const auto& e : body.at("excluded")) {
      auto reason = exclusion_reason_from_string(e.at("reason").get<std::string>());
      if (!reason) throw Error(ErrorCode::ReportUnavailable, "unknown exclusion reason");
      out.push_back({crypto::digest_from_hex(e.at("digest").get<std::string>()), *reason});
    }
    return out;
  });
}

Digest AnalysisReport::analysis_root() const {
  return report_field([&] { return crypto::digest_from_hex(body.at("analysis_root").get<std::string>()); });
}

Document AnalysisReport::signature_document() const {
  return {{"report_digest", report_digest.hex()},
          {"admin_public_key", admin_public_key.hex()},
          {"signature", admin_signature.hex()}};
}

AnalysisReport AnalysisReport::from_files(std::string_view body_text, std::string_view signature_text) {
  return report_field([&] {
    AnalysisReport r;
    r.body = canonical::decode(body_text);
    if (!r.body.is_object()) throw Error(ErrorCode::ReportUnavailable, "report body is not an object");
    auto sig = canonical::decode(signature_text);
    if (!sig.is_object() || sig.size() != 3) throw Error(ErrorCode::ReportUnavailable, "bad signature file");
    r.report_digest = crypto::digest_from_hex(sig.at("report_digest").get<std::string>());
    r.admin_public_key = crypto::public_key_from_hex(sig.at("admin_public_key").get<std::string>());
    r.admin_signature = crypto::signature_from_hex(sig.at("signature").get<std::string>());
    return r;
  });
}

AnalysisReport AnalysisReport::load(const std::filesystem::path& dir) {
  std::string body, sig;
  try {
    body = util::read_file(dir / kReportFile);
    sig = util::read_file(dir / kSignatureFile);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::ReportUnavailable, e.what());
  }
  return from_files(body, sig);
}

Document ProofFile::to_document() const {
  return {{"contract_id", contract_id.hex()},
          {"response_digest", response_digest.hex()},
          {"leaf_index", proof.leaf_index},
          {"tree_size", proof.tree_size},
          {"siblings", digest_list(proof.siblings)},
          {"analysis_root", analysis_root.hex()}};
}

ProofFile ProofFile::from_document(const Document& doc) {
  try {
    ProofFile p;
    p.contract_id = crypto::digest_from_hex(doc.at("contract_id").get<std::string>());
    p.response_digest = crypto::digest_from_hex(doc.at("response_digest").get<std::string>());
    p.analysis_root = crypto::digest_from_hex(doc.at("analysis_root").get<std::string>());
    p.proof = crypto::merkle_proof_from_document(
        {{"leaf_index", doc.at("leaf_index")}, {"tree_size", doc.at("tree_size")}, {"siblings", doc.at("siblings")}});
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidResponse, e.what());
  }
}

std::vector<ProofFile> make_proofs(const Digest& contract_id, std::span<const Digest> included) {
  std::vector<ProofFile> out;
  if (included.empty()) return out;
  const auto root = crypto::merkle_root(included);
  out.reserve(included.size());
  for (std::size_t i = 0; i < included.size(); ++i) {
    out.push_back({contract_id, included[i], crypto::merkle_prove(included, i), root});
  }
  return out;
}

BuildResult build_report(ledger::Ledger& ledger, cas::CasStore& store, const Digest& contract_id,
                         const crypto::KeyPair& admin) {
  auto state = ledger.contract_state(contract_id);
  if (!state) throw Error(ErrorCode::UnknownContract, contract_id.hex());
  if (state->phase == Phase::Analyzed) throw Error(ErrorCode::AlreadyAnalyzed, contract_id.hex());
  if (state->admin_public_key != admin.public_key) throw Error(ErrorCode::Unauthorized, "not the deploying key");

  auto ingested = ingest(*state, store, contract_id);
  auto stats = score(ingested.store, ingested.params);
  auto report = sign_report(assemble_report_body(ingested, stats), admin);
  store.put(report.encode_body());

  auto receipt = contract::commit_analysis(ledger, contract_id, analysis_root_of(ingested.included),
                                           report.report_digest, admin);
  if (!receipt.accepted()) throw Error(*receipt.reason, "commit_analysis rejected");
  return {std::move(report), std::move(stats), make_proofs(contract_id, ingested.included), receipt};
}

void write_report_files(const std::filesystem::path& dir, const AnalysisReport& report,
                        std::span<const ProofFile> proofs) {
  util::write_file_atomic(dir / kReportFile, report.encode_body());
  util::write_file_atomic(dir / kSignatureFile, canonical::encode(report.signature_document()));
  for (const auto& p : proofs) {
    util::write_file_atomic(dir / kProofDir / (p.response_digest.hex() + ".json"), canonical::encode(p.to_document()));
  }
}

}  // namespace codewe::analysis
