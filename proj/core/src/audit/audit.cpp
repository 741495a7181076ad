#include "codewe/audit/audit.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "codewe/contract/operations.hpp"

namespace codewe::audit {

using analysis::ExclusionReason;
using contract::Phase;
using Document = canonical::Document;
using ledger::TxKind;

std::string_view to_string(Verdict v) noexcept { return v == Verdict::Clean ? "Clean" : "Discrepant"; }

OnChainView read_chain(std::span<const ledger::LedgerRecord> records, const Digest& contract_id) {
  OnChainView view;
  view.contract_id = contract_id;
  auto& st = view.state;
  for (const auto& rec : records) {
    const auto& tx = rec.tx;
    if (tx.contract_id != contract_id) continue;
    try {
      switch (tx.kind) {
        case TxKind::Deploy: {
          if (view.deployed) break;
          auto body = contract::DeployBody::from_body(tx.body);
          view.deployed = true;
          st.phase = Phase::Deployed;
          st.params_digest = body.params_digest;
          st.params_address = body.params_address;
          st.coproduction_digest = body.coproduction_digest;
          st.admin_public_key = tx.sender_public_key;
          st.admin_signature = body.admin_signature;
          st.rules = body.rules;
          st.minted_token_hashes.insert(body.token_hashes.begin(), body.token_hashes.end());
          break;
        }
        case TxKind::Open: st.phase = Phase::Open; break;
        case TxKind::Close: st.phase = Phase::Closed; break;
        case TxKind::SubmitCommitment: {
          auto c = contract::ResponseCommitment::from_body(tx.body);
          c.logical_time = rec.entry.logical_time;
          st.used_tokens.insert(c.eligibility_token);
          st.used_keys.insert(c.respondent_public_key);
          st.commitments.push_back(std::move(c));
          break;
        }
        case TxKind::CommitAnalysis: {
          auto body = contract::CommitAnalysisBody::from_body(tx.body);
          st.phase = Phase::Analyzed;
          st.analysis_root = body.analysis_root;
          st.report_digest = body.report_digest;
          break;
        }
        case TxKind::RecordErasure: {
          auto body = contract::RecordErasureBody::from_body(tx.body);
          st.erasures.push_back(body.response_digest);
          view.tombstone_digests[body.response_digest] = body.tombstone_digest;
          break;
        }
      }
    } catch (const Error&) {
      // An unreadable body is reported through the chain check.
    }
  }
  return view;
}

namespace {

enum class Actual { Valid, Erased, IntegrityFailure, SignatureFailure };

Actual to_actual(const std::optional<ExclusionReason>& r) {
  if (!r) return Actual::Valid;
  switch (*r) {
    case ExclusionReason::Erased: return Actual::Erased;
    case ExclusionReason::IntegrityFailure: return Actual::IntegrityFailure;
    case ExclusionReason::SignatureFailure: return Actual::SignatureFailure;
  }
  return Actual::IntegrityFailure;
}

/// An erasure counts only if the blob is gone and a tombstone signed by the
/// administrator matches the one recorded on-chain.
bool erasure_checks_out(const OnChainView& view, const cas::CasStore& store, const Digest& digest) {
  auto it = view.tombstone_digests.find(digest);
  if (it == view.tombstone_digests.end()) return false;
  if (std::filesystem::exists(store.blob_path(digest))) return false;
  auto got = store.get(digest);
  const auto* erased = std::get_if<cas::Erased>(&got);
  return erased != nullptr && erased->tombstone.digest() == it->second &&
         erased->tombstone.signature_valid(view.state.admin_public_key);
}

bool report_matches(const OnChainView& view, const analysis::AnalysisReport& report) {
  if (!view.state.report_digest) return false;
  try {
    return report.signature_valid() && report.admin_public_key == view.state.admin_public_key &&
           report.report_digest == *view.state.report_digest && report.survey_id() == view.contract_id;
  } catch (const Error&) {
    return false;
  }
}

Document digest_list(const std::vector<Digest>& v) {
  Document out = Document::array();
  for (const auto& d : v) out.push_back(d.hex());
  return out;
}

}  // namespace

AuditFinding audit_completeness(std::span<const ledger::LedgerRecord> records, const cas::CasStore& store,
                                const Digest& contract_id, const analysis::AnalysisReport& report) {
  AuditFinding f;
  f.contract_id = contract_id;
  f.ledger_height = records.size();
  auto chain = ledger::verify_chain(records);
  f.chain_ok = chain.ok;
  f.first_bad_height = chain.first_bad_height;

  const auto view = read_chain(records, contract_id);
  if (!view.deployed) throw Error(ErrorCode::UnknownContract, contract_id.hex());
  if (!view.analyzed()) throw Error(ErrorCode::NotYetAnalyzed, contract_id.hex());
  const auto& st = view.state;
  f.commitment_count = st.commitments.size();

  std::vector<Digest> included;
  std::vector<analysis::Exclusion> excluded;
  bool report_readable = true;
  try {
    included = report.included_digests();
    excluded = report.excluded();
  } catch (const Error&) {
    report_readable = false;
  }
  f.analyzed_count = included.size();

  std::set<Digest> included_set;
  for (const auto& d : included) {
    if (!included_set.insert(d).second) f.unaccounted.push_back(d);  // listed twice
  }
  std::map<Digest, ExclusionReason> excluded_map;
  for (const auto& e : excluded) {
    if (included_set.contains(e.digest) || !excluded_map.emplace(e.digest, e.reason).second) {
      f.unaccounted.push_back(e.digest);
    }
  }

  // Parameters are needed to judge blob content; if they cannot be loaded
  // every commitment is unverifiable.
  std::optional<contract::SurveyParameters> params;
  try {
    params = contract::load_parameters(st, store, contract_id);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::StoreUnavailable) throw;
  }

  std::set<Digest> on_chain;
  for (const auto& c : st.commitments) {
    on_chain.insert(c.response_digest);
    Actual actual = Actual::IntegrityFailure;
    if (params) actual = to_actual(analysis::classify_commitment(st, *params, c, store).reason);
    if (actual == Actual::Erased && !erasure_checks_out(view, store, c.response_digest)) {
      actual = Actual::IntegrityFailure;
    }

    switch (actual) {
      case Actual::Erased: f.erased.push_back(c.response_digest); break;
      case Actual::IntegrityFailure: f.integrity_failures.push_back(c.response_digest); break;
      case Actual::SignatureFailure: f.signature_failures.push_back(c.response_digest); break;
      case Actual::Valid: break;
    }

    const bool in_included = included_set.contains(c.response_digest);
    auto ex = excluded_map.find(c.response_digest);
    if (in_included) {
      // An erasure recorded after the analysis leaves the digest included.
      continue;
    }
    if (ex == excluded_map.end() || actual == Actual::Valid || to_actual(ex->second) != actual) {
      f.omitted.push_back(c.response_digest);
    }
  }
  for (const auto& d : included) {
    if (!on_chain.contains(d)) f.unaccounted.push_back(d);
  }
  for (const auto& [d, reason] : excluded_map) {
    if (!on_chain.contains(d)) f.unaccounted.push_back(d);
  }

  f.root_match = report_readable && *st.analysis_root == analysis::analysis_root_of(included);
  if (f.root_match) {
    try {
      f.root_match = report.analysis_root() == *st.analysis_root;
    } catch (const Error&) {
      f.root_match = false;
    }
  }
  f.report_ok = report_readable && report_matches(view, report);

  f.conclude();
  return f;
}

void AuditFinding::conclude() {
  reasons.clear();
  if (!chain_ok) reasons.emplace_back("chain");
  if (!omitted.empty()) reasons.emplace_back("omitted");
  if (!integrity_failures.empty()) reasons.emplace_back("integrity_failure");
  if (!signature_failures.empty()) reasons.emplace_back("signature_failure");
  if (!unaccounted.empty()) reasons.emplace_back("unaccounted");
  if (!root_match) reasons.emplace_back("root_mismatch");
  if (!report_ok) reasons.emplace_back("report_invalid");
  verdict = reasons.empty() ? Verdict::Clean : Verdict::Discrepant;
}

AuditFinding full_audit(std::span<const ledger::LedgerRecord> records, const cas::CasStore& store,
                        const Digest& contract_id, const std::filesystem::path& report_dir) {
  auto report = analysis::AnalysisReport::load(report_dir);
  return audit_completeness(records, store, contract_id, report);
}

AuditFinding full_audit(const ledger::SnapshotContents& snapshot, const cas::CasStore& store,
                        const Digest& contract_id, const std::filesystem::path& report_dir) {
  auto f = full_audit(snapshot.records, store, contract_id, report_dir);
  if (snapshot.unparseable_record) {
    f.chain_ok = false;
    if (!f.first_bad_height || *snapshot.unparseable_record < *f.first_bad_height) {
      f.first_bad_height = snapshot.unparseable_record;
    }
  }
  if (!snapshot.footer_ok) f.chain_ok = false;
  f.conclude();
  return f;
}

bool verify_inclusion(std::span<const ledger::LedgerRecord> records, const Digest& contract_id,
                      const Digest& response_digest, const crypto::MerkleProof& proof) {
  const auto view = read_chain(records, contract_id);
  if (!view.analyzed()) throw Error(ErrorCode::NotYetAnalyzed, contract_id.hex());
  return crypto::merkle_verify(*view.state.analysis_root, response_digest, proof);
}

bool verify_report_signature(std::span<const ledger::LedgerRecord> records, const Digest& contract_id,
                             const analysis::AnalysisReport& report) {
  return report_matches(read_chain(records, contract_id), report);
}

Document AuditFinding::to_document() const {
  Document reasons_doc = Document::array();
  for (const auto& r : reasons) reasons_doc.push_back(r);
  Document doc = {{"contract_id", contract_id.hex()},
                  {"ledger_height", ledger_height},
                  {"chain_ok", chain_ok},
                  {"commitment_count", commitment_count},
                  {"analyzed_count", analyzed_count},
                  {"omitted", digest_list(omitted)},
                  {"erased", digest_list(erased)},
                  {"integrity_failures", digest_list(integrity_failures)},
                  {"signature_failures", digest_list(signature_failures)},
                  {"unaccounted", digest_list(unaccounted)},
                  {"root_match", root_match},
                  {"report_ok", report_ok},
                  {"verdict", to_string(verdict)},
                  {"reasons", reasons_doc}};
  if (first_bad_height) doc["first_bad_height"] = *first_bad_height;
  return doc;
}

std::string AuditFinding::summary() const {
  std::ostringstream out;
  out << "Audit of survey " << contract_id.hex() << " at ledger height " << ledger_height << ": "
      << (verdict == Verdict::Clean ? "CLEAN" : "DISCREPANT") << "\n";
  out << "  " << commitment_count << " responses were committed on the ledger; " << analyzed_count
      << " were included in the published analysis.\n";
  if (!erased.empty()) out << "  " << erased.size() << " responses were erased on request (this is not a fault).\n";
  if (!chain_ok) {
    out << "  The ledger's hash chain is broken";
    if (first_bad_height) out << " starting at entry " << *first_bad_height;
    out << ".\n";
  }
  if (!omitted.empty()) out << "  " << omitted.size() << " committed responses were left out without a valid reason.\n";
  if (!integrity_failures.empty()) {
    out << "  " << integrity_failures.size() << " stored responses no longer match what was committed.\n";
  }
  if (!signature_failures.empty()) {
    out << "  " << signature_failures.size() << " commitments carry a signature that does not verify.\n";
  }
  if (!unaccounted.empty()) {
    out << "  The report lists " << unaccounted.size() << " entries that were never committed or appear twice.\n";
  }
  if (!root_match) out << "  The analysis root does not match the responses the report says it used.\n";
  if (!report_ok) out << "  The report is not signed by the survey administrator or differs from the committed one.\n";
  return out.str();
}

}  // namespace codewe::audit
