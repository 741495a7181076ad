#pragma once

// Shared fixtures for tests, the acceptance runner and benchmarks.

#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "codewe/analysis/report.hpp"
#include "codewe/contract/operations.hpp"
#include "codewe/coproduction/workflow.hpp"

namespace codewe::testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// Deterministic key: the seed is SHA-256 of the label.
crypto::KeyPair seeded_key(std::string_view label);

/// Deterministic eligibility tokens.
std::vector<contract::EligibilityToken> seeded_tokens(std::string_view label, std::size_t count);

struct DraftShape {
  std::size_t item_count = 3;
  std::size_t dimension_count = 2;
  std::int64_t scale_min = 1;
  std::int64_t scale_max = 5;
  std::vector<bool> reverse;  // per item; empty = every third item reversed
  std::uint64_t max_responses = 100;
  std::uint64_t token_count = 100;
  std::uint64_t open_at = 0;
  std::uint64_t close_at = UINT32_MAX;
  std::string title = "Pulse survey";
};

/// An unfinalised draft: no survey_id, zero coproduction digest, nothing reviewed.
contract::SurveyParameters make_draft(const DraftShape& shape);

/// A shape with random item count (1..max_items), scale bounds and reverse flags.
DraftShape random_shape(std::mt19937_64& rng, std::size_t max_items, std::uint64_t responses);

struct Panel {
  crypto::KeyPair admin;
  crypto::KeyPair researcher;
  crypto::KeyPair participant;

  std::vector<coproduction::Stakeholder> stakeholders() const;
};

Panel seeded_panel(std::string_view label);

/// Co-design with three stakeholders: the participant flags the first item,
/// proposes a softer wording, the flag is resolved, everyone signs the latest
/// draft and the record is finalised into `store`.
coproduction::FinalizeResult run_codesign(cas::CasStore& store, const contract::SurveyParameters& draft,
                                          const Panel& panel);

/// Uniform random answers within each item's scale.
std::map<std::string, std::int64_t> random_answers(const contract::SurveyParameters& params, std::mt19937_64& rng);

/// A deployed survey on a private ledger and CAS, driven through the
/// protocol operations. Everything is deterministic for a given label except
/// response nonces.
class Scenario {
 public:
  explicit Scenario(const DraftShape& shape = {}, std::string label = "scenario");

  void open();
  void close();

  /// Submits through prepare_submission + CAS put + submit_commitment using
  /// the next token and a fresh seeded respondent key. Throws on rejection.
  crypto::Digest submit(const std::map<std::string, std::int64_t>& answers);
  crypto::Digest submit_random(std::mt19937_64& rng) { return submit(random_answers(params, rng)); }

  /// GDPR path: CAS tombstone then RecordErasure, as the workspace does it.
  cas::Tombstone erase(std::size_t respondent);

  analysis::BuildResult analyze();

  std::vector<ledger::LedgerRecord> records() const { return ledger.records(); }
  contract::ContractState state() const { return *ledger.contract_state(id); }

  std::string label;
  TempDir tmp;
  ledger::Ledger ledger;
  cas::CasStore store;
  Panel panel;
  contract::SurveyParameters params;
  crypto::Digest record_digest;
  crypto::Digest id;
  std::vector<contract::EligibilityToken> tokens;
  std::vector<crypto::KeyPair> respondent_keys;
  std::vector<crypto::Digest> digests;
  std::vector<std::string> blobs;
};

/// A report signed by the scenario's admin over `ledger` (a closed copy of
/// the scenario's chain) that silently leaves out `dropped`: those digests
/// appear neither as included nor as excluded. The body goes into the
/// scenario's CAS; nothing is committed.
analysis::AnalysisReport omitting_report(Scenario& s, const ledger::Ledger& ledger,
                                         const std::set<crypto::Digest>& dropped);

/// Commits `report` as the analysis of the scenario's contract on `ledger`.
ledger::TxReceipt commit_report(const Scenario& s, ledger::Ledger& ledger, const analysis::AnalysisReport& report);

/// One (phase, transaction kind) probe: a scenario is driven to `phase`
/// (with one commitment when the phase allows it), then a well-formed
/// transaction of `kind` signed by the right party is submitted.
struct TransitionProbe {
  contract::Phase phase;
  ledger::TxKind kind;
  ledger::TxReceipt receipt;
  contract::Phase phase_after;
  bool sequence_unchanged = false;  // digest sequence identical after the call
  bool length_grew_by_one = false;
};

std::vector<TransitionProbe> probe_state_machine();

/// Flips bit `bit` of `text` (bit 0 = LSB of byte 0).
void flip_bit(std::string& text, std::size_t bit);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace codewe::testing
