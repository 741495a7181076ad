#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "codewe/analysis/query_store.hpp"
#include "codewe/analysis/response_set.hpp"
#include "codewe/analysis/score.hpp"
#include "codewe/cas/cas_store.hpp"
#include "codewe/crypto/merkle.hpp"
#include "codewe/ledger/ledger.hpp"

namespace codewe::analysis {

enum class ExclusionReason { Erased, IntegrityFailure, SignatureFailure };

std::string_view to_string(ExclusionReason reason) noexcept;
std::optional<ExclusionReason> exclusion_reason_from_string(std::string_view name) noexcept;

struct Exclusion {
  Digest digest;
  ExclusionReason reason = ExclusionReason::IntegrityFailure;

  friend bool operator==(const Exclusion&, const Exclusion&) = default;
};

/// Outcome of checking one on-chain commitment against the store.
struct Classification {
  std::optional<ExclusionReason> reason;  // empty: include
  std::optional<ResponseSet> response;    // set when included
};

/// Checks, in order: on-chain erasure, respondent signature, blob presence
/// and hash, blob parse and scale ranges, respondent key match. A blob that
/// is present but unusable counts as an integrity failure. StoreUnavailable
/// propagates.
Classification classify_commitment(const contract::ContractState& state, const contract::SurveyParameters& params,
                                   const contract::ResponseCommitment& commitment, const cas::CasStore& store);

struct IngestResult {
  Digest contract_id;
  contract::SurveyParameters params;
  crypto::PublicKey admin_public_key;
  std::vector<Digest> included;  // ledger order
  std::vector<Exclusion> excluded;  // ledger order
  QueryStore store;
};

/// Requires phase Closed (or Analyzed, for recomputation); WrongPhase
/// otherwise. Deterministic for a given ledger prefix and store.
IngestResult ingest(const contract::ContractState& state, const cas::CasStore& store, const Digest& contract_id);
IngestResult ingest(const ledger::Ledger& ledger, const cas::CasStore& store, const Digest& contract_id);

/// Root committed for an analysis: the Merkle root of the included digests,
/// or SHA-256 of the empty string when nothing was included.
Digest analysis_root_of(std::span<const Digest> included);

/// A published report. `body` is canonical and is exactly what the report
/// file holds; report_digest = SHA-256(encode(body)).
struct AnalysisReport {
  canonical::Document body;
  Digest report_digest;
  crypto::PublicKey admin_public_key;
  crypto::Signature admin_signature;

  std::string encode_body() const { return canonical::encode(body); }
  Digest compute_digest() const { return crypto::hash(encode_body()); }
  /// Digest recomputes and the signature over it verifies under admin_public_key.
  bool signature_valid() const;

  // Accessors over `body`; throw ReportUnavailable on a malformed body.
  Digest survey_id() const;
  std::vector<Digest> included_digests() const;
  std::vector<Exclusion> excluded() const;
  Digest analysis_root() const;

  /// Detached signature file: {report_digest, admin_public_key, signature}.
  canonical::Document signature_document() const;

  /// Parses the two report files. Throws ReportUnavailable.
  static AnalysisReport from_files(std::string_view body_text, std::string_view signature_text);
  static AnalysisReport load(const std::filesystem::path& dir);
};

/// Report body before signing. Byte-identical across runs on the same inputs.
canonical::Document assemble_report_body(const IngestResult& ingested, const Statistics& stats);

AnalysisReport sign_report(canonical::Document body, const crypto::KeyPair& admin);

/// One exported inclusion proof.
struct ProofFile {
  Digest contract_id;
  Digest response_digest;
  crypto::MerkleProof proof;
  Digest analysis_root;

  canonical::Document to_document() const;
  static ProofFile from_document(const canonical::Document& doc);
};

std::vector<ProofFile> make_proofs(const Digest& contract_id, std::span<const Digest> included);

struct BuildResult {
  AnalysisReport report;
  Statistics stats;
  std::vector<ProofFile> proofs;
  ledger::TxReceipt receipt;
};

/// Ingests, scores, signs, stores the report body in CAS and submits the
/// CommitAnalysis transaction. AlreadyAnalyzed if a commit exists;
/// Unauthorized if `admin` is not the deploying key.
BuildResult build_report(ledger::Ledger& ledger, cas::CasStore& store, const Digest& contract_id,
                         const crypto::KeyPair& admin);

// Report directory layout:
//   report.json          canonical body
//   report.sig           canonical signature document
//   proofs/<digest>.json one per included response
inline constexpr const char* kReportFile = "report.json";
inline constexpr const char* kSignatureFile = "report.sig";
inline constexpr const char* kProofDir = "proofs";

void write_report_files(const std::filesystem::path& dir, const AnalysisReport& report,
                        std::span<const ProofFile> proofs);

}  // namespace codewe::analysis
