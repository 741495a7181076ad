#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "codewe/analysis/report.hpp"
#include "codewe/cas/cas_store.hpp"
#include "codewe/ledger/ledger.hpp"

namespace codewe::audit {

using crypto::Digest;

/// What the ledger says about one contract, read directly from records
/// without re-running the contract rules, so a damaged chain can still be
/// described.
struct OnChainView {
  Digest contract_id;
  bool deployed = false;
  contract::ContractState state;  // commitments, erasures, admin key, params, analysis commit
  std::map<Digest, Digest> tombstone_digests;  // response digest -> tombstone digest

  bool analyzed() const noexcept { return state.analysis_root.has_value(); }
};

OnChainView read_chain(std::span<const ledger::LedgerRecord> records, const Digest& contract_id);

enum class Verdict { Clean, Discrepant };
std::string_view to_string(Verdict v) noexcept;

struct AuditFinding {
  Digest contract_id;
  std::uint64_t ledger_height = 0;  // number of records read
  bool chain_ok = false;
  std::optional<std::uint64_t> first_bad_height;
  std::uint64_t commitment_count = 0;
  std::uint64_t analyzed_count = 0;
  std::vector<Digest> omitted;
  std::vector<Digest> erased;
  std::vector<Digest> integrity_failures;
  std::vector<Digest> signature_failures;
  std::vector<Digest> unaccounted;  // in the report but not committed on-chain
  bool root_match = false;
  bool report_ok = false;
  Verdict verdict = Verdict::Discrepant;
  std::vector<std::string> reasons;  // empty iff Clean

  /// Recomputes reasons and verdict from the individual checks.
  void conclude();

  canonical::Document to_document() const;
  std::string summary() const;
};

/// Compares the on-chain commitments with the report's included and excluded
/// lists, re-checks every commitment against CAS, recomputes the root and
/// checks the report signature. Throws NotYetAnalyzed if no analysis was
/// committed, UnknownContract if it was never deployed.
AuditFinding audit_completeness(std::span<const ledger::LedgerRecord> records, const cas::CasStore& store,
                                const Digest& contract_id, const analysis::AnalysisReport& report);

/// Same, loading the report from `report_dir`; ReportUnavailable if missing.
AuditFinding full_audit(std::span<const ledger::LedgerRecord> records, const cas::CasStore& store,
                        const Digest& contract_id, const std::filesystem::path& report_dir);

/// Audits a leniently read snapshot: a bad footer or an unreadable record
/// marks the chain broken rather than aborting the audit.
AuditFinding full_audit(const ledger::SnapshotContents& snapshot, const cas::CasStore& store,
                        const Digest& contract_id, const std::filesystem::path& report_dir);

/// True iff the proof leads from `response_digest` to the committed
/// analysis root. NotYetAnalyzed before the commit.
bool verify_inclusion(std::span<const ledger::LedgerRecord> records, const Digest& contract_id,
                      const Digest& response_digest, const crypto::MerkleProof& proof);

/// True iff the report's signature verifies under the deploying key and its
/// digest matches the committed one.
bool verify_report_signature(std::span<const ledger::LedgerRecord> records, const Digest& contract_id,
                             const analysis::AnalysisReport& report);

// CLI exit statuses for an audit run.
inline constexpr int kExitClean = 0;
inline constexpr int kExitDiscrepant = 2;
inline constexpr int kExitInputsUnavailable = 3;

}  // namespace codewe::audit
