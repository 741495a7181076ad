#include "codewe/coproduction/record.hpp"

#include <algorithm>
#include <set>

namespace codewe::coproduction {

using Document = canonical::Document;

namespace {

std::string_view change_kind_name(ItemChange::Kind kind) {
  switch (kind) {
    case ItemChange::Kind::Add: return "add";
    case ItemChange::Kind::Edit: return "edit";
    case ItemChange::Kind::Remove: return "remove";
  }
  return "edit";
}

ItemChange::Kind change_kind_from(std::string_view name) {
  if (name == "add") return ItemChange::Kind::Add;
  if (name == "edit") return ItemChange::Kind::Edit;
  if (name == "remove") return ItemChange::Kind::Remove;
  throw Error(ErrorCode::InvalidParameters, "unknown change kind " + std::string(name));
}

}  // namespace

Document change_to_document(const ItemChange& c) {
  Document doc = {{"kind", std::string(change_kind_name(c.kind))}};
  if (c.kind == ItemChange::Kind::Remove) {
    doc["item_id"] = c.item_id;
  } else {
    doc["item"] = contract::to_document(c.item);
  }
  return doc;
}

ItemChange change_from_document(const Document& doc) {
  ItemChange c;
  c.kind = change_kind_from(doc.at("kind").get<std::string>());
  if (c.kind == ItemChange::Kind::Remove) {
    c.item_id = doc.at("item_id").get<std::string>();
  } else {
    c.item = contract::question_item_from_document(doc.at("item"));
  }
  return c;
}

std::string_view to_string(Role role) noexcept {
  switch (role) {
    case Role::Administrator: return "Administrator";
    case Role::Researcher: return "Researcher";
    case Role::EmployeeParticipant: return "EmployeeParticipant";
  }
  return "Unknown";
}

std::optional<Role> role_from_string(std::string_view name) noexcept {
  for (auto r : kAllRoles) {
    if (to_string(r) == name) return r;
  }
  return std::nullopt;
}

Document to_document(const Stakeholder& s) {
  return {{"stakeholder_id", s.stakeholder_id}, {"role", std::string(to_string(s.role))}, {"public_key", s.public_key.hex()}};
}

Stakeholder stakeholder_from_document(const Document& doc) {
  try {
    auto role = role_from_string(doc.at("role").get<std::string>());
    if (!role) throw Error(ErrorCode::InvalidParameters, "unknown role");
    return {doc.at("stakeholder_id").get<std::string>(), *role,
            crypto::public_key_from_hex(doc.at("public_key").get<std::string>())};
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidParameters, e.what());
  }
}

Digest DraftVersion::digest() const { return canonical::digest(draft.to_document(false)); }

const Stakeholder* CoProductionRecord::find_stakeholder(std::string_view id) const {
  for (const auto& s : panel) {
    if (s.stakeholder_id == id) return &s;
  }
  return nullptr;
}

std::size_t CoProductionRecord::unresolved_flags() const {
  return static_cast<std::size_t>(
      std::count_if(stigma_flags.begin(), stigma_flags.end(), [](const StigmaFlag& f) { return !f.resolved; }));
}

Document CoProductionRecord::to_document() const {
  Document panel_doc = Document::array();
  for (const auto& s : panel) panel_doc.push_back(coproduction::to_document(s));
  Document drafts_doc = Document::array();
  for (const auto& d : drafts) drafts_doc.push_back({{"version", d.version}, {"draft", d.draft.to_document(false)}});
  Document proposals_doc = Document::array();
  for (const auto& p : proposals) {
    proposals_doc.push_back({{"stakeholder_id", p.stakeholder_id},
                             {"change", change_to_document(p.change)},
                             {"rationale", p.rationale},
                             {"resulting_version", p.resulting_version},
                             {"logical_time", p.logical_time}});
  }
  Document rounds_doc = Document::array();
  for (const auto& r : feedback_rounds) {
    Document entries = Document::array();
    for (const auto& e : r.entries) entries.push_back({{"stakeholder_id", e.stakeholder_id}, {"comment", e.comment}});
    rounds_doc.push_back(
        {{"topic", r.topic}, {"entries", entries}, {"draft_version", r.draft_version}, {"logical_time", r.logical_time}});
  }
  Document flags_doc = Document::array();
  for (const auto& f : stigma_flags) {
    Document fd = {{"flag_id", f.flag_id},   {"item_id", f.item_id},
                   {"raised_by", f.raised_by}, {"rationale", f.rationale},
                   {"raised_at_version", f.raised_at_version}, {"resolved", f.resolved}};
    if (f.resolution) fd["resolution"] = *f.resolution;
    flags_doc.push_back(std::move(fd));
  }
  Document signoffs_doc = Document::array();
  for (const auto& s : signoffs) {
    signoffs_doc.push_back({{"stakeholder_id", s.stakeholder_id},
                            {"draft_version", s.draft_version},
                            {"draft_digest", s.draft_digest.hex()},
                            {"signature", s.signature.hex()}});
  }
  return {{"record_id", record_id.hex()},
          {"panel", panel_doc},
          {"drafts", drafts_doc},
          {"proposals", proposals_doc},
          {"feedback_rounds", rounds_doc},
          {"stigma_flags", flags_doc},
          {"signoffs", signoffs_doc},
          {"status", status == RecordStatus::Finalized ? "Finalized" : "InProgress"},
          {"quorum",
           {{"numerator", quorum.numerator},
            {"denominator", quorum.denominator},
            {"require_every_role", quorum.require_every_role}}},
          {"clock", clock},
          {"revision", revision}};
}

CoProductionRecord CoProductionRecord::from_document(const Document& doc) {
  try {
    CoProductionRecord r;
    r.record_id = crypto::digest_from_hex(doc.at("record_id").get<std::string>());
    for (const auto& s : doc.at("panel")) r.panel.push_back(stakeholder_from_document(s));
    for (const auto& d : doc.at("drafts")) {
      r.drafts.push_back({d.at("version").get<std::uint64_t>(), SurveyParameters::from_document(d.at("draft"))});
    }
    for (const auto& p : doc.at("proposals")) {
      r.proposals.push_back({p.at("stakeholder_id").get<std::string>(), change_from_document(p.at("change")),
                             p.at("rationale").get<std::string>(), p.at("resulting_version").get<std::uint64_t>(),
                             p.at("logical_time").get<std::uint64_t>()});
    }
    for (const auto& fr : doc.at("feedback_rounds")) {
      FeedbackRound round;
      round.topic = fr.at("topic").get<std::string>();
      for (const auto& e : fr.at("entries")) {
        round.entries.push_back({e.at("stakeholder_id").get<std::string>(), e.at("comment").get<std::string>()});
      }
      round.draft_version = fr.at("draft_version").get<std::uint64_t>();
      round.logical_time = fr.at("logical_time").get<std::uint64_t>();
      r.feedback_rounds.push_back(std::move(round));
    }
    for (const auto& f : doc.at("stigma_flags")) {
      StigmaFlag flag;
      flag.flag_id = f.at("flag_id").get<std::uint64_t>();
      flag.item_id = f.at("item_id").get<std::string>();
      flag.raised_by = f.at("raised_by").get<std::string>();
      flag.rationale = f.at("rationale").get<std::string>();
      flag.raised_at_version = f.at("raised_at_version").get<std::uint64_t>();
      flag.resolved = f.at("resolved").get<bool>();
      if (f.contains("resolution")) flag.resolution = f.at("resolution").get<std::uint64_t>();
      r.stigma_flags.push_back(std::move(flag));
    }
    for (const auto& s : doc.at("signoffs")) {
      r.signoffs.push_back({s.at("stakeholder_id").get<std::string>(), s.at("draft_version").get<std::uint64_t>(),
                            crypto::digest_from_hex(s.at("draft_digest").get<std::string>()),
                            crypto::signature_from_hex(s.at("signature").get<std::string>())});
    }
    const auto status = doc.at("status").get<std::string>();
    if (status != "Finalized" && status != "InProgress") throw Error(ErrorCode::InvalidParameters, "bad status");
    r.status = status == "Finalized" ? RecordStatus::Finalized : RecordStatus::InProgress;
    const auto& q = doc.at("quorum");
    r.quorum = {q.at("numerator").get<std::uint64_t>(), q.at("denominator").get<std::uint64_t>(),
                q.at("require_every_role").get<bool>()};
    r.clock = doc.at("clock").get<std::uint64_t>();
    r.revision = doc.at("revision").get<std::uint64_t>();
    if (r.drafts.empty()) throw Error(ErrorCode::InvalidParameters, "record has no drafts");
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidParameters, e.what());
  }
}

Document CoProductionRecord::public_summary() const {
  std::set<Role> roles_signed;
  for (const auto& s : signoffs) {
    if (const auto* st = find_stakeholder(s.stakeholder_id)) roles_signed.insert(st->role);
  }
  Document roles = Document::array();
  for (auto role : roles_signed) roles.push_back(std::string(to_string(role)));
  Document panel_roles = Document::object();
  for (auto role : kAllRoles) {
    panel_roles[std::string(to_string(role))] = static_cast<std::uint64_t>(
        std::count_if(panel.begin(), panel.end(), [role](const Stakeholder& s) { return s.role == role; }));
  }
  return {{"record_id", record_id.hex()},
          {"status", status == RecordStatus::Finalized ? "Finalized" : "InProgress"},
          {"draft_versions", static_cast<std::uint64_t>(drafts.size())},
          {"latest_version", latest_version()},
          {"proposal_count", static_cast<std::uint64_t>(proposals.size())},
          {"feedback_round_count", static_cast<std::uint64_t>(feedback_rounds.size())},
          {"stigma_flags_total", static_cast<std::uint64_t>(stigma_flags.size())},
          {"stigma_flags_unresolved", static_cast<std::uint64_t>(unresolved_flags())},
          {"panel_size", static_cast<std::uint64_t>(panel.size())},
          {"panel_roles", panel_roles},
          {"signoffs", static_cast<std::uint64_t>(signoffs.size())},
          {"signoffs_required", quorum.required_signers(panel.size())},
          {"roles_signed", roles}};
}

}  // namespace codewe::coproduction
