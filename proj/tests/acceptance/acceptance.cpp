// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "codewe/audit/audit.hpp"
#include "codewe/service/workspace.hpp"
#include "oracle.hpp"
#include "scenario.hpp"
#include "vectors.hpp"

using namespace codewe;
using namespace codewe::testing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  // Records a failed check; the first few are kept for the report line.
  void check(bool ok, const std::string& what) {
    if (ok) return;
    if (pass) detail << "first problem: " << what << "; ";
    pass = false;
  }
};

DraftShape sized(std::uint64_t n, std::size_t items = 3) {
  DraftShape s;
  s.item_count = items;
  s.max_responses = n;
  s.token_count = n;
  return s;
}

std::unique_ptr<Scenario> closed(std::uint64_t n, const std::string& label, std::uint64_t seed) {
  auto s = std::make_unique<Scenario>(sized(n), label);
  s->open();
  std::mt19937_64 rng(seed);
  for (std::uint64_t i = 0; i < n; ++i) s->submit_random(rng);
  s->close();
  return s;
}

std::string all_bytes_under(const fs::path& root) {
  std::string out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out += read_text(e.path());
  }
  return out;
}

// 1. Co-design, deploy, 100 submissions, close, analyze, audit.
void end_to_end(Outcome& o) {
  const auto start = std::chrono::steady_clock::now();
  TempDir dir;
  service::ServiceConfig cfg;
  cfg.ledger = dir / "ledger.snap";
  cfg.cas = dir / "cas";
  cfg.reports = dir / "reports";
  cfg.tokens = dir / "tokens";
  service::Workspace ws(cfg);
  const auto panel = seeded_panel("acceptance-e2e");
  auto fin = run_codesign(ws.cas(), make_draft(sized(100, 10)), panel);
  auto record = coproduction::CoProductionRecord::from_document(
      canonical::decode(to_string(std::get<Bytes>(ws.cas().get(fin.record_digest)))));
  o.check(record.panel.size() == 3, "panel size");
  o.check(record.stigma_flags.size() == 1 && record.stigma_flags[0].resolved, "flag raised and resolved");
  o.check(coproduction::quorum_met(record), "quorum");
  o.check(fin.params.items.size() == 10, "item count");

  auto deployed = ws.deploy(fin.params, panel.admin);
  o.check(deployed.receipt.accepted(), "deploy");
  const auto id = deployed.contract_id;
  o.check(ws.open(id, panel.admin).accepted(), "open");
  std::mt19937_64 rng(1);
  for (std::size_t i = 0; i < 100; ++i) {
    auto keys = crypto::keygen();
    auto prep = analysis::prepare_submission(fin.params, random_answers(fin.params, rng), keys, deployed.tokens[i]);
    // The request travels as canonical text, as it would over HTTP.
    auto wire = canonical::encode(service::make_submission_request(id, prep, keys).to_document());
    auto receipt = ws.submit(id, service::SubmissionRequest::from_document(canonical::decode(wire)));
    o.check(receipt.response_digest == prep.commitment.response_digest, "receipt digest");
  }
  o.check(ws.close(id, panel.admin).accepted(), "close");
  auto built = ws.analyze(id, panel.admin);
  auto finding = ws.audit(id);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.check(finding.verdict == audit::Verdict::Clean, "audit verdict " + finding.summary());
  o.check(finding.analyzed_count == 100 && finding.commitment_count == 100, "counts");
  o.check(secs < 30.0, "runtime");
  o.detail << "100 responses, verdict " << audit::to_string(finding.verdict) << ", " << std::fixed;
  o.detail.precision(2);
  o.detail << secs << " s";
}

// 2. Every subset of n = 10 dropped from the analysis.
void omission(Outcome& o) {
  auto owned = closed(10, "acceptance-omission", 2);
  auto& s = *owned;
  const auto base = s.records();
  std::size_t detected = 0;
  std::size_t false_positives = 0;
  for (std::uint32_t mask = 0; mask < 1024; ++mask) {
    std::set<crypto::Digest> dropped;
    std::vector<crypto::Digest> expected;
    for (std::size_t i = 0; i < 10; ++i) {
      if (mask >> i & 1u) {
        dropped.insert(s.digests[i]);
        expected.push_back(s.digests[i]);
      }
    }
    auto l = ledger::Ledger::replay(base);
    auto report = omitting_report(s, l, dropped);
    o.check(commit_report(s, l, report).accepted(), "commit");
    const auto recs = l.records();
    auto f = audit::audit_completeness(recs, s.store, s.id, report);
    if (mask == 0) {
      o.check(f.verdict == audit::Verdict::Clean, "honest control");
      if (f.verdict != audit::Verdict::Clean) ++false_positives;
      continue;
    }
    const bool exact = f.verdict == audit::Verdict::Discrepant && f.omitted == expected;
    if (exact) ++detected;
    // Anything beyond the dropped set would be a false positive.
    for (const auto& d : f.omitted) {
      if (!dropped.contains(d)) ++false_positives;
    }
    o.check(exact, "mask " + std::to_string(mask));
  }
  o.check(false_positives == 0, "false positives");
  o.detail << detected << "/1023 subsets detected exactly, " << false_positives << " false positives";
}

// 3. Single-bit mutations of blobs, ledger snapshots, report bodies and proofs.
void tamper(Outcome& o) {
  auto owned = closed(10, "acceptance-tamper", 3);
  auto& s = *owned;
  auto built = s.analyze();
  const auto recs = s.records();
  std::mt19937_64 rng(3);
  constexpr std::size_t kPerTarget = 1000;

  // Honest controls.
  o.check(audit::audit_completeness(recs, s.store, s.id, built.report).verdict == audit::Verdict::Clean,
          "honest audit");
  o.check(ledger::verify_chain(recs).ok, "honest chain");

  // (a) CAS blobs: the store's hash check and the audit both notice.
  std::size_t cas_hits = 0;
  for (std::size_t m = 0; m < kPerTarget; ++m) {
    const std::size_t i = m % s.blobs.size();
    auto bad = s.blobs[i];
    flip_bit(bad, rng() % (bad.size() * 8));
    write_text(s.store.blob_path(s.digests[i]), bad);
    bool hit = false;
    try {
      s.store.get(s.digests[i]);
    } catch (const Error& e) {
      hit = e.code() == ErrorCode::IntegrityViolation;
    }
    auto f = audit::audit_completeness(recs, s.store, s.id, built.report);
    hit = hit && f.verdict == audit::Verdict::Discrepant && f.integrity_failures == std::vector{s.digests[i]};
    if (hit) ++cas_hits;
    write_text(s.store.blob_path(s.digests[i]), s.blobs[i]);
  }
  o.check(cas_hits == kPerTarget, "cas");
  o.check(audit::audit_completeness(recs, s.store, s.id, built.report).verdict == audit::Verdict::Clean,
          "restored store");

  // (b) Ledger snapshot. Half the mutations keep the stale footer; the other
  // half recompute it, as an attacker could, so the chain check alone must
  // catch them.
  const auto snapshot = ledger::encode_snapshot(recs);
  const std::size_t body_start = 8 + 4 + 8;
  const std::size_t body_end = snapshot.size() - 32;
  auto decodes_clean = [&](const std::string& bytes) {
    try {
      auto c = ledger::decode_snapshot(bytes);
      return c.footer_ok && !c.unparseable_record && c.records.size() == recs.size() &&
             ledger::verify_chain(c.records).ok;
    } catch (const Error&) {
      return false;
    }
  };
  o.check(decodes_clean(snapshot), "honest snapshot");
  std::size_t ledger_hits = 0;
  std::size_t chain_only_hits = 0;
  for (std::size_t m = 0; m < kPerTarget; ++m) {
    auto bad = snapshot;
    flip_bit(bad, body_start * 8 + rng() % ((body_end - body_start) * 8));
    if (m % 2 == 1) {
      const auto footer = crypto::hash(std::string_view(bad).substr(0, body_end));
      bad.replace(body_end, 32, reinterpret_cast<const char*>(footer.view().data()), 32);
    }
    if (!decodes_clean(bad)) {
      ++ledger_hits;
      if (m % 2 == 1) ++chain_only_hits;
    }
  }
  o.check(ledger_hits == kPerTarget, "ledger");

  // (c) Report bodies: the signature check against the committed digest.
  const auto body_text = built.report.encode_body();
  const auto sig_text = canonical::encode(built.report.signature_document());
  o.check(audit::verify_report_signature(recs, s.id, analysis::AnalysisReport::from_files(body_text, sig_text)),
          "honest report");
  std::size_t report_hits = 0;
  for (std::size_t m = 0; m < kPerTarget; ++m) {
    auto bad = body_text;
    flip_bit(bad, rng() % (bad.size() * 8));
    bool accepted = false;
    try {
      accepted = audit::verify_report_signature(recs, s.id, analysis::AnalysisReport::from_files(bad, sig_text));
    } catch (const Error&) {
      accepted = false;
    }
    if (!accepted) ++report_hits;
  }
  o.check(report_hits == kPerTarget, "report");

  // (d) Proof siblings, every bit of every sibling of every proof.
  std::size_t proof_total = 0;
  std::size_t proof_hits = 0;
  for (const auto& p : built.proofs) {
    o.check(audit::verify_inclusion(recs, s.id, p.response_digest, p.proof), "honest proof");
    for (std::size_t sib = 0; sib < p.proof.siblings.size(); ++sib) {
      for (std::size_t bit = 0; bit < 256; ++bit) {
        auto bad = p.proof;
        bad.siblings[sib].array()[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
        ++proof_total;
        if (!audit::verify_inclusion(recs, s.id, p.response_digest, bad)) ++proof_hits;
      }
    }
  }
  o.check(proof_total >= kPerTarget && proof_hits == proof_total, "proof");
  o.detail << "cas " << cas_hits << "/" << kPerTarget << ", ledger " << ledger_hits << "/" << kPerTarget << " ("
           << chain_only_hits << " with recomputed footer), report " << report_hits << "/" << kPerTarget
           << ", proof " << proof_hits << "/" << proof_total;
}

// 4. Published vectors and the exhaustive small-tree sweep.
void crypto_conformance(Outcome& o) {
  for (const auto& v : kNist) o.check(crypto::hash(v.message).hex() == v.digest, "sha256 vector");
  for (const auto& v : kRfc8032) {
    auto keys = crypto::keygen(ByteView(from_hex(v.secret)));
    o.check(keys.public_key.hex() == v.public_key, "ed25519 public key");
    const auto msg = from_hex(v.message);
    o.check(crypto::sign(keys.private_key, ByteView(msg)).hex() == v.signature, "ed25519 signature");
    o.check(crypto::verify(keys.public_key, ByteView(msg), crypto::sign(keys.private_key, ByteView(msg))),
            "ed25519 verify");
  }
  std::size_t proofs = 0;
  std::size_t perturbations = 0;
  for (std::size_t n = 1; n <= 64; ++n) {
    std::vector<crypto::Digest> leaves;
    for (std::size_t i = 0; i < n; ++i) leaves.push_back(crypto::hash("acceptance-leaf-" + std::to_string(i)));
    const auto root = crypto::merkle_root(leaves);
    o.check(root == oracle_root(leaves, 0, n), "root n=" + std::to_string(n));
    for (std::size_t i = 0; i < n; ++i) {
      auto p = crypto::merkle_prove(leaves, i);
      ++proofs;
      o.check(crypto::merkle_verify(root, leaves[i], p), "round trip");
      for (std::size_t sib = 0; sib < p.siblings.size(); ++sib) {
        auto bad = p;
        bad.siblings[sib].array()[sib % 32] ^= 0x01;
        ++perturbations;
        o.check(!crypto::merkle_verify(root, leaves[i], bad), "perturbed sibling");
      }
    }
  }
  o.detail << std::size(kNist) << " SHA-256 and " << std::size(kRfc8032) << " Ed25519 vectors, " << proofs
           << " proofs, " << perturbations << " sibling perturbations";
}

// 5. Replay from genesis twice; state and pre-signature report bytes agree.
void replay_determinism(Outcome& o) {
  std::size_t ledgers = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const std::uint64_t n = 3 + seed * 4;
    Scenario s(sized(n, 4 + seed), "acceptance-replay-" + std::to_string(seed));
    s.open();
    std::mt19937_64 rng(seed);
    for (std::uint64_t i = 0; i < n; ++i) s.submit_random(rng);
    if (n > 3) s.erase(1);
    s.close();
    auto built = s.analyze();
    TempDir dir;
    s.ledger.snapshot_to_file(dir / "ledger.snap");

    std::string state_bytes[2];
    std::string report_bytes[2];
    for (int run = 0; run < 2; ++run) {
      auto contents = ledger::read_snapshot(dir / "ledger.snap");
      auto replayed = ledger::Ledger::replay(contents.records);
      state_bytes[run] = canonical::encode(replayed.state_document());
      auto in = analysis::ingest(replayed, s.store, s.id);
      report_bytes[run] = canonical::encode(analysis::assemble_report_body(in, analysis::score(in.store, in.params)));
    }
    o.check(state_bytes[0] == state_bytes[1], "state across runs");
    o.check(state_bytes[0] == canonical::encode(s.ledger.state_document()), "state vs original");
    o.check(report_bytes[0] == report_bytes[1], "report across runs");
    o.check(report_bytes[0] == built.report.encode_body(), "report vs committed");
    ++ledgers;
  }
  o.detail << ledgers << " ledgers replayed twice, state and report bytes identical";
}

// 6. Scoring against the naive recomputation.
void scoring(Outcome& o) {
  std::mt19937_64 rng(6);
  std::size_t matched = 0;
  std::size_t reversed = 0;
  for (int round = 0; round < 200; ++round) {
    const auto responses = static_cast<std::uint64_t>(rng() % 101);
    auto shape = random_shape(rng, 20, responses);
    for (bool r : shape.reverse) reversed += r ? 1 : 0;
    auto params = make_draft(shape);
    std::vector<std::map<std::string, std::int64_t>> answers;
    for (std::uint64_t r = 0; r < responses; ++r) answers.push_back(random_answers(params, rng));
    const bool same = analysis::score(answers, params) == oracle_statistics(answers, params);
    o.check(same, "survey " + std::to_string(round));
    if (same) ++matched;
  }
  o.detail << matched << "/200 surveys identical (" << reversed << " reverse-scored items)";
}

// 7. Erase m of n, then analyze and audit.
void erasure(Outcome& o) {
  const std::uint64_t n = 20;
  for (std::uint64_t m : {1u, 5u, 20u}) {
    Scenario s(sized(n), "acceptance-erasure-" + std::to_string(m));
    s.open();
    std::mt19937_64 rng(m);
    for (std::uint64_t i = 0; i < n; ++i) s.submit_random(rng);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::set<crypto::Digest> erased;
    for (std::size_t k = 0; k < m; ++k) {
      s.erase(order[k]);
      erased.insert(s.digests[order[k]]);
    }
    s.close();
    auto built = s.analyze();

    const auto everything = all_bytes_under(s.tmp.path() / "cas");
    for (std::size_t k = 0; k < m; ++k) {
      const auto i = order[k];
      o.check(std::holds_alternative<cas::Erased>(s.store.get(s.digests[i])), "get reports erased");
      o.check(!fs::exists(s.store.blob_path(s.digests[i])), "blob file gone");
      o.check(everything.find(s.blobs[i]) == std::string::npos, "bytes unrecoverable");
    }
    const auto recs = s.records();
    auto f = audit::audit_completeness(recs, s.store, s.id, built.report);
    o.check(f.verdict == audit::Verdict::Clean, "verdict m=" + std::to_string(m));
    o.check(f.erased.size() == m, "erased list m=" + std::to_string(m));
    std::set<crypto::Digest> excluded;
    for (const auto& e : built.report.excluded()) {
      o.check(e.reason == analysis::ExclusionReason::Erased, "exclusion reason");
      excluded.insert(e.digest);
    }
    o.check(excluded == erased, "excluded set m=" + std::to_string(m));
    o.check(built.report.included_digests().size() == n - m, "included count");
    o.detail << "m=" << m << " ";
  }
  o.detail << "of n=" << n << " erased, audits clean";
}

// 8. Every (phase, kind) pair.
void state_machine(Outcome& o) {
  using contract::Phase;
  using ledger::TxKind;
  struct Expect {
    std::optional<ErrorCode> reason;
    Phase after;
  };
  const std::optional<ErrorCode> ok;
  const std::map<std::pair<Phase, TxKind>, Expect> table = {
      {{Phase::Deployed, TxKind::Deploy}, {ErrorCode::DuplicateContract, Phase::Deployed}},
      {{Phase::Deployed, TxKind::Open}, {ok, Phase::Open}},
      {{Phase::Deployed, TxKind::SubmitCommitment}, {ErrorCode::SurveyClosed, Phase::Deployed}},
      {{Phase::Deployed, TxKind::Close}, {ErrorCode::InvalidTransition, Phase::Deployed}},
      {{Phase::Deployed, TxKind::CommitAnalysis}, {ErrorCode::InvalidTransition, Phase::Deployed}},
      {{Phase::Deployed, TxKind::RecordErasure}, {ErrorCode::UnknownCommitment, Phase::Deployed}},
      {{Phase::Open, TxKind::Deploy}, {ErrorCode::DuplicateContract, Phase::Open}},
      {{Phase::Open, TxKind::Open}, {ErrorCode::InvalidTransition, Phase::Open}},
      {{Phase::Open, TxKind::SubmitCommitment}, {ok, Phase::Open}},
      {{Phase::Open, TxKind::Close}, {ok, Phase::Closed}},
      {{Phase::Open, TxKind::CommitAnalysis}, {ErrorCode::InvalidTransition, Phase::Open}},
      {{Phase::Open, TxKind::RecordErasure}, {ok, Phase::Open}},
      {{Phase::Closed, TxKind::Deploy}, {ErrorCode::DuplicateContract, Phase::Closed}},
      {{Phase::Closed, TxKind::Open}, {ErrorCode::InvalidTransition, Phase::Closed}},
      {{Phase::Closed, TxKind::SubmitCommitment}, {ErrorCode::SurveyClosed, Phase::Closed}},
      {{Phase::Closed, TxKind::Close}, {ErrorCode::InvalidTransition, Phase::Closed}},
      {{Phase::Closed, TxKind::CommitAnalysis}, {ok, Phase::Analyzed}},
      {{Phase::Closed, TxKind::RecordErasure}, {ok, Phase::Closed}},
      {{Phase::Analyzed, TxKind::Deploy}, {ErrorCode::DuplicateContract, Phase::Analyzed}},
      {{Phase::Analyzed, TxKind::Open}, {ErrorCode::InvalidTransition, Phase::Analyzed}},
      {{Phase::Analyzed, TxKind::SubmitCommitment}, {ErrorCode::SurveyClosed, Phase::Analyzed}},
      {{Phase::Analyzed, TxKind::Close}, {ErrorCode::InvalidTransition, Phase::Analyzed}},
      {{Phase::Analyzed, TxKind::CommitAnalysis}, {ErrorCode::AlreadyAnalyzed, Phase::Analyzed}},
      {{Phase::Analyzed, TxKind::RecordErasure}, {ok, Phase::Analyzed}},
  };
  auto probes = probe_state_machine();
  o.check(probes.size() == 24, "probe count");
  std::size_t rejected = 0;
  std::size_t phase_changes = 0;
  for (const auto& p : probes) {
    const auto& e = table.at({p.phase, p.kind});
    const auto label = std::string(contract::to_string(p.phase)) + "/" + std::string(ledger::to_string(p.kind));
    o.check(p.receipt.reason == e.reason, label + " reason");
    o.check(p.phase_after == e.after, label + " phase");
    if (e.reason) {
      ++rejected;
      o.check(p.sequence_unchanged, label + " ledger changed");
    } else {
      o.check(p.length_grew_by_one, label + " not appended");
    }
    if (p.phase_after != p.phase) ++phase_changes;
  }
  // A Deploy for a fresh contract is the fourth legal transition.
  Scenario fresh(sized(2), "acceptance-fresh");
  const bool deploy_creates = fresh.state().phase == Phase::Deployed && fresh.ledger.size() == 1;
  o.check(deploy_creates, "deploy creates");
  o.check(phase_changes == 3, "phase changes");
  o.detail << probes.size() << " pairs, " << rejected << " rejected with ledger unchanged, "
           << phase_changes + (deploy_creates ? 1 : 0) << " phase-changing transitions";
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<void(Outcome&)>> criteria[] = {
      {"end-to-end honest scenario", end_to_end},
      {"omission detection", omission},
      {"tamper detection", tamper},
      {"crypto conformance", crypto_conformance},
      {"replay determinism", replay_determinism},
      {"scoring oracle", scoring},
      {"erasure path", erasure},
      {"state-machine exhaustion", state_machine},
  };
  int failures = 0;
  int number = 0;
  for (const auto& [name, run] : criteria) {
    ++number;
    Outcome o;
    try {
      run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << number << " " << name << ": " << o.detail.str()
              << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
