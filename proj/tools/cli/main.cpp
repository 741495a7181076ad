// codewe: command line front end for the co-produced survey protocol.

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <memory>

#include "codewe/audit/audit.hpp"
#include "codewe/coproduction/workflow.hpp"
#include "codewe/service/files.hpp"
#include "codewe/service/workspace.hpp"
#include "codewe/util/file_io.hpp"
#include "http_service.hpp"
#include "output.hpp"

namespace fs = std::filesystem;
using namespace codewe;
using canonical::Document;
using cli::Format;
using service::ServiceConfig;
using service::Workspace;

namespace {

service::HttpService* g_running_service = nullptr;

void on_signal(int) {
  if (g_running_service != nullptr) g_running_service->stop();
}

Document read_json_file(const fs::path& path) {
  std::string text;
  try {
    text = util::read_file(path);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::InvalidParameters, e.what());
  }
  try {
    return Document::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidParameters, path.string() + ": " + e.what());
  }
}

Document read_canonical_file(const fs::path& path) {
  try {
    auto text = util::read_file(path);
    if (!text.empty() && text.back() == '\n') text.pop_back();
    return canonical::decode(text);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::InvalidParameters, path.string() + ": " + e.what());
  }
}

void write_canonical_file(const fs::path& path, const Document& doc) {
  util::write_file_atomic(path, canonical::encode(doc) + "\n");
}

crypto::Digest parse_digest(const std::string& hex) { return crypto::digest_from_hex(hex); }

struct Globals {
  std::string config_file;
  std::string ledger;
  std::string cas;
  std::string reports;
  std::string tokens;
  std::string output = "text";
};

class Cli {
 public:
  Cli();
  int run(int argc, char** argv);

 private:
  ServiceConfig config() const;
  std::unique_ptr<Workspace> workspace() const { return std::make_unique<Workspace>(config()); }
  crypto::KeyPair admin_key(const std::string& flag) const;
  Format format() const { return g_.output == "json" ? Format::Json : Format::Text; }
  void print(const Document& doc) const { cli::emit(std::cout, doc, format()); }
  int print_receipt(const ledger::TxReceipt& receipt) const;

  void add_keygen();
  void add_codesign();
  void add_lifecycle();
  void add_tokens();
  void add_respond();
  void add_analysis();
  void add_audit();
  void add_ledger();
  void add_cas();
  void add_serve();

  CLI::App app_{"codewe: co-produced, verifiable workplace well-being surveys"};
  Globals g_;
  std::function<int()> action_;
};

Cli::Cli() {
  app_.require_subcommand(1);
  app_.fallthrough();
  app_.add_option("--config", g_.config_file, "Config file (key = value lines)");
  app_.add_option("--ledger", g_.ledger, "Ledger snapshot file");
  app_.add_option("--cas", g_.cas, "Content-addressed store directory");
  app_.add_option("--reports", g_.reports, "Report output directory");
  app_.add_option("--tokens", g_.tokens, "Token file directory");
  app_.add_option("--output", g_.output, "Output format")->check(CLI::IsMember({"json", "text"}));
  add_keygen();
  add_codesign();
  add_lifecycle();
  add_tokens();
  add_respond();
  add_analysis();
  add_audit();
  add_ledger();
  add_cas();
  add_serve();
}

ServiceConfig Cli::config() const {
  auto cfg = ServiceConfig::load(g_.config_file.empty() ? std::nullopt : std::optional<fs::path>(g_.config_file));
  if (!g_.ledger.empty()) cfg.ledger = g_.ledger;
  if (!g_.cas.empty()) cfg.cas = g_.cas;
  if (!g_.reports.empty()) cfg.reports = g_.reports;
  if (!g_.tokens.empty()) cfg.tokens = g_.tokens;
  return cfg;
}

crypto::KeyPair Cli::admin_key(const std::string& flag) const {
  if (!flag.empty()) return service::read_key_file(flag);
  auto cfg = config();
  if (cfg.admin_key.empty()) throw Error(ErrorCode::InvalidConfig, "no admin key: pass --admin-key or set admin_key");
  return service::read_key_file(cfg.admin_key);
}

int Cli::print_receipt(const ledger::TxReceipt& receipt) const {
  print(receipt.to_document());
  return receipt.accepted() ? cli::kExitOk : cli::kExitRejected;
}

// keygen ---------------------------------------------------------------------

void Cli::add_keygen() {
  auto* cmd = app_.add_subcommand("keygen", "Generate an Ed25519 key file (mode 0600)");
  auto out = std::make_shared<std::string>();
  auto seed = std::make_shared<std::string>();
  cmd->add_option("--out", *out, "Key file to write")->required();
  cmd->add_option("--seed", *seed, "Deterministic 32-byte seed in hex (testing only)");
  cmd->callback([this, out, seed] {
    action_ = [this, out, seed] {
      auto keys = seed->empty() ? crypto::keygen() : crypto::keygen(ByteView(from_hex(*seed)));
      service::write_key_file(*out, keys);
      print({{"public_key", keys.public_key.hex()}, {"key_file", *out}});
      return cli::kExitOk;
    };
  });
}

// codesign -------------------------------------------------------------------

coproduction::CoProductionRecord load_record(const fs::path& path) {
  return coproduction::CoProductionRecord::from_document(read_canonical_file(path));
}

void save_record(const fs::path& path, const coproduction::CoProductionRecord& record) {
  write_canonical_file(path, record.to_document());
}

contract::SurveyParameters draft_from_json(Document doc) {
  if (!doc.contains("coproduction_digest")) doc["coproduction_digest"] = crypto::Digest{}.hex();
  if (!doc.contains("version")) doc["version"] = 1;
  doc.erase("survey_id");
  return contract::SurveyParameters::from_document(doc);
}

void Cli::add_codesign() {
  auto* group = app_.add_subcommand("codesign", "Co-design the survey with a stakeholder panel");
  group->require_subcommand(1);
  auto record = std::make_shared<std::string>();
  auto expected = std::make_shared<std::optional<std::uint64_t>>();
  auto add_common = [record, expected](CLI::App* cmd) {
    cmd->add_option("--record", *record, "Co-production record file")->required();
    cmd->add_option("--expected-revision", *expected, "Fail with ConflictRetry unless the record is at this revision");
  };
  auto summary = [this](const coproduction::CoProductionRecord& r) {
    auto doc = r.public_summary();
    doc["record_id"] = r.record_id.hex();
    doc["revision"] = r.revision;
    print(doc);
  };

  {
    auto* cmd = group->add_subcommand("open", "Start a record from an initial draft and a panel");
    auto draft = std::make_shared<std::string>();
    auto panel = std::make_shared<std::string>();
    auto quorum = std::make_shared<std::string>("2/3");
    auto any_roles = std::make_shared<bool>(false);
    cmd->add_option("--record", *record, "Co-production record file to create")->required();
    cmd->add_option("--draft", *draft, "Initial survey draft (JSON)")->required();
    cmd->add_option("--panel", *panel, "Panel: JSON array of {stakeholder_id, role, public_key}")->required();
    cmd->add_option("--quorum", *quorum, "Sign-off fraction, e.g. 2/3");
    cmd->add_flag("--any-roles", *any_roles, "Do not require every role among the signers");
    cmd->callback([=, this] {
      action_ = [=, this] {
        std::vector<coproduction::Stakeholder> members;
        for (const auto& m : read_json_file(*panel)) members.push_back(coproduction::stakeholder_from_document(m));
        coproduction::QuorumPolicy q;
        auto slash = quorum->find('/');
        if (slash == std::string::npos) throw Error(ErrorCode::InvalidParameters, "quorum must look like n/d");
        q.numerator = std::stoull(quorum->substr(0, slash));
        q.denominator = std::stoull(quorum->substr(slash + 1));
        q.require_every_role = !*any_roles;
        auto r = coproduction::open_codesign(draft_from_json(read_json_file(*draft)), std::move(members), q);
        save_record(*record, r);
        summary(r);
        return cli::kExitOk;
      };
    });
  }
  {
    auto* cmd = group->add_subcommand("propose", "Propose an item change, producing a new draft version");
    add_common(cmd);
    auto who = std::make_shared<std::string>();
    auto change = std::make_shared<std::string>();
    auto rationale = std::make_shared<std::string>();
    cmd->add_option("--as", *who, "Stakeholder id")->required();
    cmd->add_option("--change", *change, "Change file: {kind: add|edit|remove, item | item_id}")->required();
    cmd->add_option("--rationale", *rationale, "Why");
    cmd->callback([=, this] {
      action_ = [=, this] {
        auto r = load_record(*record);
        Document change_doc = read_json_file(*change);
        coproduction::ItemChange c;
        try {
          c = coproduction::change_from_document(change_doc);
        } catch (const nlohmann::json::exception& e) {
          throw Error(ErrorCode::InvalidParameters, e.what());
        }
        auto version = coproduction::propose_revision(r, *who, c, *rationale, *expected);
        save_record(*record, r);
        print({{"draft_version", version}, {"revision", r.revision}});
        return cli::kExitOk;
      };
    });
  }
  {
    auto* cmd = group->add_subcommand("feedback", "Record a feedback round on the latest draft");
    add_common(cmd);
    auto topic = std::make_shared<std::string>();
    auto entries = std::make_shared<std::vector<std::string>>();
    cmd->add_option("--topic", *topic, "Round topic")->required();
    cmd->add_option("--entry", *entries, "stakeholder_id=comment (repeatable)");
    cmd->callback([=, this] {
      action_ = [=, this] {
        auto r = load_record(*record);
        coproduction::FeedbackRound round;
        round.topic = *topic;
        for (const auto& e : *entries) {
          auto eq = e.find('=');
          if (eq == std::string::npos) throw Error(ErrorCode::InvalidParameters, "entry must be id=comment");
          round.entries.push_back({e.substr(0, eq), e.substr(eq + 1)});
        }
        coproduction::record_feedback(r, std::move(round), *expected);
        save_record(*record, r);
        summary(r);
        return cli::kExitOk;
      };
    });
  }
  {
    auto* cmd = group->add_subcommand("flag", "Raise a stigma flag on an item");
    add_common(cmd);
    auto who = std::make_shared<std::string>();
    auto item = std::make_shared<std::string>();
    auto rationale = std::make_shared<std::string>();
    cmd->add_option("--as", *who, "Stakeholder id")->required();
    cmd->add_option("--item", *item, "Item id")->required();
    cmd->add_option("--rationale", *rationale, "Why the item may deter honest answers");
    cmd->callback([=, this] {
      action_ = [=, this] {
        auto r = load_record(*record);
        auto id = coproduction::flag_stigma(r, *who, *item, *rationale, *expected);
        save_record(*record, r);
        print({{"flag_id", id}, {"revision", r.revision}});
        return cli::kExitOk;
      };
    });
  }
  {
    auto* cmd = group->add_subcommand("resolve", "Resolve a stigma flag by a later draft version");
    add_common(cmd);
    auto flag = std::make_shared<std::uint64_t>(0);
    auto version = std::make_shared<std::uint64_t>(0);
    cmd->add_option("--flag", *flag, "Flag id")->required();
    cmd->add_option("--version", *version, "Draft version that addresses the flag")->required();
    cmd->callback([=, this] {
      action_ = [=, this] {
        auto r = load_record(*record);
        coproduction::resolve_stigma(r, *flag, *version, *expected);
        save_record(*record, r);
        summary(r);
        return cli::kExitOk;
      };
    });
  }
  {
    auto* cmd = group->add_subcommand("signoff", "Sign the latest (or a given) draft version");
    add_common(cmd);
    auto who = std::make_shared<std::string>();
    auto key = std::make_shared<std::string>();
    auto version = std::make_shared<std::optional<std::uint64_t>>();
    cmd->add_option("--as", *who, "Stakeholder id")->required();
    cmd->add_option("--key", *key, "Stakeholder key file")->required();
    cmd->add_option("--version", *version, "Draft version (default: latest)");
    cmd->callback([=, this] {
      action_ = [=, this] {
        auto r = load_record(*record);
        auto keys = service::read_key_file(*key);
        const auto v = version->value_or(r.latest_version());
        coproduction::signoff(r, *who, v, coproduction::sign_draft(r, v, keys.private_key), *expected);
        save_record(*record, r);
        summary(r);
        return cli::kExitOk;
      };
    });
  }
  {
    auto* cmd = group->add_subcommand("finalize", "Freeze the record into CAS and write the survey parameters");
    add_common(cmd);
    auto params_out = std::make_shared<std::string>();
    cmd->add_option("--params-out", *params_out, "Where to write the finalised parameters")->required();
    cmd->callback([=, this] {
      action_ = [=, this] {
        auto r = load_record(*record);
        auto cfg = config();
        cfg.prepare();
        cas::CasStore store(cfg.cas, static_cast<std::size_t>(cfg.max_blob_size));
        auto result = coproduction::finalize(r, store, *expected);
        save_record(*record, r);
        write_canonical_file(*params_out, result.params.to_document());
        print({{"survey_id", result.params.survey_id.hex()},
               {"record_digest", result.record_digest.hex()},
               {"params_file", *params_out}});
        return cli::kExitOk;
      };
    });
  }
  {
    auto* cmd = group->add_subcommand("status", "Public summary of a record (counts only)");
    cmd->add_option("--record", *record, "Co-production record file")->required();
    cmd->callback([=, this] {
      action_ = [=, this] {
        summary(load_record(*record));
        return cli::kExitOk;
      };
    });
  }
}

// deploy / open / close ------------------------------------------------------

void Cli::add_lifecycle() {
  {
    auto* cmd = app_.add_subcommand("deploy", "Deploy finalised parameters as a survey contract");
    auto params = std::make_shared<std::string>();
    auto tokens = std::make_shared<std::string>();
    auto key = std::make_shared<std::string>();
    cmd->add_option("--params", *params, "Finalised parameters file")->required();
    cmd->add_option("--token-file", *tokens, "Pre-minted tokens (from `tokens mint`)");
    cmd->add_option("--admin-key", *key, "Administrator key file");
    cmd->callback([=, this] {
      action_ = [=, this] {
        auto p = contract::SurveyParameters::from_document(read_canonical_file(*params));
        auto admin = admin_key(*key);
        auto ws = workspace();
        std::optional<std::vector<contract::EligibilityToken>> minted;
        if (!tokens->empty()) {
          auto file = service::read_token_file(*tokens);
          if (file.contract_id != p.survey_id) throw Error(ErrorCode::InvalidParameters, "token file is for another survey");
          minted = std::move(file.tokens);
        }
        auto result = ws->deploy(p, admin, std::move(minted));
        if (!result.receipt.accepted()) return print_receipt(result.receipt);
        print({{"contract_id", result.contract_id.hex()},
               {"height", result.receipt.height},
               {"token_count", result.tokens.size()},
               {"token_file", ws->token_file(result.contract_id).string()}});
        return cli::kExitOk;
      };
    });
  }
  for (const char* name : {"open", "close"}) {
    const bool opening = std::string_view(name) == "open";
    auto* cmd = app_.add_subcommand(name, opening ? "Open a deployed survey" : "Close an open survey");
    auto id = std::make_shared<std::string>();
    auto key = std::make_shared<std::string>();
    cmd->add_option("contract", *id, "Contract id")->required();
    cmd->add_option("--admin-key", *key, "Administrator key file");
    cmd->callback([=, this] {
      action_ = [=, this] {
        auto admin = admin_key(*key);
        auto ws = workspace();
        return print_receipt(opening ? ws->open(parse_digest(*id), admin) : ws->close(parse_digest(*id), admin));
      };
    });
  }
}

// tokens ---------------------------------------------------------------------

void Cli::add_tokens() {
  auto* group = app_.add_subcommand("tokens", "Eligibility tokens");
  group->require_subcommand(1);
  {
    auto* cmd = group->add_subcommand("mint", "Mint the token count named in the parameters' rules");
    auto params = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--params", *params, "Finalised parameters file")->required();
    cmd->add_option("--out", *out, "Token file to write")->required();
    cmd->callback([=, this] {
      action_ = [=, this] {
        auto p = contract::SurveyParameters::from_document(read_canonical_file(*params));
        auto tokens = contract::mint_tokens(p.rules.eligibility_token_count);
        service::write_token_file(*out, p.survey_id, tokens);
        print({{"survey_id", p.survey_id.hex()}, {"token_count", tokens.size()}, {"token_file", *out}});
        return cli::kExitOk;
      };
    });
  }
  {
    auto* cmd = group->add_subcommand("export", "Copy a survey's tokens for out-of-band distribution");
    auto id = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto split = std::make_shared<std::string>();
    cmd->add_option("contract", *id, "Contract id")->required();
    auto* out_opt = cmd->add_option("--out", *out, "Single token file to write");
    auto* split_opt = cmd->add_option("--split", *split, "Directory to write one file per token");
    out_opt->excludes(split_opt);
    cmd->callback([=, this] {
      action_ = [=, this] {
        auto cfg = config();
        const auto contract_id = parse_digest(*id);
        auto file = service::read_token_file(cfg.tokens / (contract_id.hex() + ".tokens"));
        if (!out->empty()) service::write_token_file(*out, contract_id, file.tokens);
        if (!split->empty()) {
          for (std::size_t i = 0; i < file.tokens.size(); ++i) {
            util::write_file_atomic(fs::path(*split) / ("token-" + std::to_string(i + 1) + ".txt"),
                                    file.tokens[i].hex() + "\n", true);
          }
        }
        Document doc = {{"contract_id", contract_id.hex()}, {"token_count", file.tokens.size()}};
        if (out->empty() && split->empty()) {
          Document list = Document::array();
          for (const auto& t : file.tokens) list.push_back(t.hex());
          doc["tokens"] = list;
        }
        print(doc);
        return cli::kExitOk;
      };
    });
  }
}

// respond --------------------------------------------------------------------

void Cli::add_respond() {
  auto* cmd = app_.add_subcommand("respond", "Answer a survey as a respondent (keys stay local)");
  auto id = std::make_shared<std::string>();
  auto answers_file = std::make_shared<std::string>();
  auto answer_list = std::make_shared<std::vector<std::string>>();
  auto token = std::make_shared<std::string>();
  auto token_file = std::make_shared<std::string>();
  auto token_index = std::make_shared<std::size_t>(0);
  auto key = std::make_shared<std::string>();
  auto key_out = std::make_shared<std::string>();
  auto server = std::make_shared<std::string>();
  auto request_out = std::make_shared<std::string>();
  auto receipt_out = std::make_shared<std::string>();
  cmd->add_option("contract", *id, "Contract id")->required();
  cmd->add_option("--answers", *answers_file, "JSON object item_id -> integer");
  cmd->add_option("--answer", *answer_list, "item_id=value (repeatable)");
  auto* tok = cmd->add_option("--token", *token, "Eligibility token (hex)");
  auto* tokf = cmd->add_option("--token-file", *token_file, "Token file");
  cmd->add_option("--token-index", *token_index, "Zero-based line in --token-file");
  tok->excludes(tokf);
  cmd->add_option("--key", *key, "Existing respondent key file (default: fresh key)");
  cmd->add_option("--key-out", *key_out, "Save the fresh respondent key here");
  cmd->add_option("--server", *server, "Submit over HTTP, e.g. http://127.0.0.1:8080");
  cmd->add_option("--request-out", *request_out, "Write the signed request instead of submitting");
  cmd->add_option("--receipt-out", *receipt_out, "Save the receipt here");
  cmd->callback([=, this] {
    action_ = [=, this] {
      const auto contract_id = parse_digest(*id);

      std::map<std::string, std::int64_t> answers;
      if (!answers_file->empty()) {
        for (const auto& [item, v] : read_json_file(*answers_file).items()) answers[item] = v.get<std::int64_t>();
      }
      for (const auto& a : *answer_list) {
        auto eq = a.find('=');
        if (eq == std::string::npos) throw Error(ErrorCode::InvalidResponse, "answer must be item=value");
        answers[a.substr(0, eq)] = std::stoll(a.substr(eq + 1));
      }

      contract::EligibilityToken t;
      if (!token->empty()) {
        t = contract::EligibilityToken::from_hex(*token, ErrorCode::InvalidParameters);
      } else if (!token_file->empty()) {
        auto file = service::read_token_file(*token_file);
        if (*token_index >= file.tokens.size()) throw Error(ErrorCode::IndexOutOfRange, "token index");
        t = file.tokens[*token_index];
      } else {
        throw Error(ErrorCode::InvalidParameters, "pass --token or --token-file");
      }

      auto keys = key->empty() ? crypto::keygen() : service::read_key_file(*key);
      if (key->empty() && !key_out->empty()) service::write_key_file(*key_out, keys);

      std::unique_ptr<httplib::Client> client;
      std::unique_ptr<Workspace> ws;
      Document survey;
      if (!server->empty()) {
        client = std::make_unique<httplib::Client>(*server);
        auto res = client->Get("/surveys/" + contract_id.hex());
        if (!res) throw Error(ErrorCode::StoreUnavailable, "cannot reach " + *server);
        if (res->status != 200) throw Error(ErrorCode::NotFound, res->body);
        survey = canonical::decode(res->body);
      } else {
        ws = workspace();
        survey = ws->survey_document(contract_id);
      }
      auto params = contract::SurveyParameters::from_document(survey.at("parameters"));
      if (params.survey_id != contract_id || params.compute_id() != contract_id) {
        throw Error(ErrorCode::IntegrityViolation, "served parameters do not match the contract id");
      }

      auto prepared = analysis::prepare_submission(params, answers, keys, t);
      auto request = service::make_submission_request(contract_id, prepared, keys);
      if (!request_out->empty()) {
        write_canonical_file(*request_out, request.to_document());
        print({{"response_digest", prepared.commitment.response_digest.hex()}, {"request_file", *request_out}});
        return cli::kExitOk;
      }

      Document receipt;
      if (client) {
        auto res = client->Post("/surveys/" + contract_id.hex() + "/responses", canonical::encode(request.to_document()),
                                "application/json");
        if (!res) throw Error(ErrorCode::StoreUnavailable, "cannot reach " + *server);
        receipt = canonical::decode(res->body);
        if (res->status != 200) {
          std::cerr << "rejected (" << res->status << "): " << res->body << "\n";
          return cli::kExitRejected;
        }
      } else {
        receipt = ws->submit(contract_id, request).to_document();
      }
      // The receipt is only kept if it names the digest computed locally.
      if (receipt.at("response_digest").get<std::string>() != prepared.commitment.response_digest.hex()) {
        throw Error(ErrorCode::IntegrityViolation, "receipt digest does not match the local response digest");
      }
      if (!receipt_out->empty()) write_canonical_file(*receipt_out, receipt);
      print(receipt);
      return cli::kExitOk;
    };
  });
}

// analyze / report -----------------------------------------------------------

void export_report_dir(const analysis::AnalysisReport& report, const crypto::Digest& contract_id,
                       const fs::path& out) {
  auto proofs = analysis::make_proofs(contract_id, report.included_digests());
  analysis::write_report_files(out, report, proofs);
  analysis::write_plots(out / "charts", analysis::export_plots(report.body));
}

void Cli::add_analysis() {
  {
    auto* cmd = app_.add_subcommand("analyze", "Ingest, score, sign and commit the analysis of a closed survey");
    auto id = std::make_shared<std::string>();
    auto key = std::make_shared<std::string>();
    cmd->add_option("contract", *id, "Contract id")->required();
    cmd->add_option("--admin-key", *key, "Administrator key file");
    cmd->callback([=, this] {
      action_ = [=, this] {
        auto admin = admin_key(*key);
        auto ws = workspace();
        const auto contract_id = parse_digest(*id);
        auto result = ws->analyze(contract_id, admin);
        print({{"contract_id", contract_id.hex()},
               {"analysis_root", result.report.analysis_root().hex()},
               {"report_digest", result.report.report_digest.hex()},
               {"included", result.report.included_digests().size()},
               {"excluded", result.report.excluded().size()},
               {"height", result.receipt.height},
               {"report_dir", ws->report_dir(contract_id).string()}});
        return cli::kExitOk;
      };
    });
  }
  auto* group = app_.add_subcommand("report", "Published reports");
  group->require_subcommand(1);
  auto* cmd = group->add_subcommand("export", "Write report, signature, proofs and charts to a directory");
  auto id = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();
  cmd->add_option("contract", *id, "Contract id")->required();
  cmd->add_option("--out", *out, "Destination directory")->required();
  cmd->callback([=, this] {
    action_ = [=, this] {
      auto cfg = config();
      const auto contract_id = parse_digest(*id);
      auto report = analysis::AnalysisReport::load(cfg.reports / contract_id.hex());
      export_report_dir(report, contract_id, *out);
      print({{"contract_id", contract_id.hex()}, {"report_digest", report.report_digest.hex()}, {"out", *out}});
      return cli::kExitOk;
    };
  });
}

// audit / verify -------------------------------------------------------------

void Cli::add_audit() {
  {
    auto* cmd = app_.add_subcommand("audit", "Independently audit a survey from ledger, CAS and report files");
    auto id = std::make_shared<std::string>();
    auto report = std::make_shared<std::string>();
    cmd->add_option("contract", *id, "Contract id")->required();
    cmd->add_option("--report", *report, "Report directory (default: <reports>/<contract>)");
    cmd->callback([=, this] {
      action_ = [=, this] {
        const auto contract_id = parse_digest(*id);
        try {
          auto cfg = config();
          auto snapshot = ledger::read_snapshot(cfg.ledger);
          cas::CasStore store(cfg.cas, static_cast<std::size_t>(cfg.max_blob_size));
          const fs::path dir = report->empty() ? cfg.reports / contract_id.hex() : fs::path(*report);
          auto finding = audit::full_audit(snapshot, store, contract_id, dir);
          if (format() == Format::Json) {
            print(finding.to_document());
          } else {
            std::cout << finding.summary();
          }
          return finding.verdict == audit::Verdict::Clean ? audit::kExitClean : audit::kExitDiscrepant;
        } catch (const Error& e) {
          std::cerr << "audit inputs unavailable: " << e.what() << "\n";
          return audit::kExitInputsUnavailable;
        } catch (const std::exception& e) {
          std::cerr << "audit inputs unavailable: " << e.what() << "\n";
          return audit::kExitInputsUnavailable;
        }
      };
    });
  }
  {
    auto* cmd = app_.add_subcommand("verify-inclusion", "Check a respondent's proof against the committed root");
    auto id = std::make_shared<std::string>();
    auto proof = std::make_shared<std::string>();
    auto digest = std::make_shared<std::string>();
    cmd->add_option("contract", *id, "Contract id")->required();
    cmd->add_option("--proof", *proof, "Proof file")->required();
    cmd->add_option("--digest", *digest, "Response digest (default: the one named in the proof)");
    cmd->callback([=, this] {
      action_ = [=, this] {
        const auto contract_id = parse_digest(*id);
        auto p = analysis::ProofFile::from_document(read_canonical_file(*proof));
        const auto d = digest->empty() ? p.response_digest : parse_digest(*digest);
        auto snapshot = ledger::read_snapshot(config().ledger);
        const bool ok = audit::verify_inclusion(snapshot.records, contract_id, d, p.proof);
        print({{"response_digest", d.hex()}, {"included", ok}});
        return ok ? cli::kExitOk : cli::kExitVerifyFailed;
      };
    });
  }
}

// ledger ---------------------------------------------------------------------

void Cli::add_ledger() {
  auto* group = app_.add_subcommand("ledger", "Ledger snapshot tools");
  group->require_subcommand(1);
  {
    auto* cmd = group->add_subcommand("verify", "Check the hash chain; exit 1 with the first bad height");
    cmd->callback([this] {
      action_ = [this] {
        auto path = config().ledger;
        ledger::SnapshotContents snap;
        try {
          snap = ledger::read_snapshot(path);
        } catch (const Error& e) {
          print({{"ok", false}, {"footer_ok", false}, {"detail", e.what()}});
          return cli::kExitVerifyFailed;
        }
        auto check = ledger::verify_chain(snap.records);
        std::optional<std::uint64_t> bad = check.first_bad_height;
        if (snap.unparseable_record && (!bad || *snap.unparseable_record < *bad)) bad = snap.unparseable_record;
        const bool ok = snap.footer_ok && check.ok && !snap.unparseable_record;
        Document doc = {{"ok", ok}, {"footer_ok", snap.footer_ok}, {"records", snap.records.size()}};
        if (bad) doc["first_bad_height"] = *bad;
        print(doc);
        return ok ? cli::kExitOk : cli::kExitVerifyFailed;
      };
    });
  }
  {
    auto* cmd = group->add_subcommand("show", "Print a contract's derived state");
    auto id = std::make_shared<std::string>();
    cmd->add_option("contract", *id, "Contract id")->required();
    cmd->callback([=, this] {
      action_ = [=, this] {
        auto ws = workspace();
        print(ws->state(parse_digest(*id)).to_document());
        return cli::kExitOk;
      };
    });
  }
}

// cas / erase ----------------------------------------------------------------

void Cli::add_cas() {
  auto* group = app_.add_subcommand("cas", "Content-addressed store");
  group->require_subcommand(1);
  auto store = [this] {
    auto cfg = config();
    cfg.prepare();
    return cas::CasStore(cfg.cas, static_cast<std::size_t>(cfg.max_blob_size));
  };
  {
    auto* cmd = group->add_subcommand("put", "Store a file; prints its address");
    auto file = std::make_shared<std::string>();
    cmd->add_option("file", *file, "File to store")->required();
    cmd->callback([=, this] {
      action_ = [=, this] {
        auto s = store();
        print({{"address", s.put(util::read_file(*file)).hex()}});
        return cli::kExitOk;
      };
    });
  }
  {
    auto* cmd = group->add_subcommand("get", "Fetch and verify a blob");
    auto addr = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("address", *addr, "Address (hex)")->required();
    cmd->add_option("--out", *out, "Write the blob here instead of stdout");
    cmd->callback([=, this] {
      action_ = [=, this] {
        auto s = store();
        auto got = s.get(parse_digest(*addr));
        if (const auto* bytes = std::get_if<Bytes>(&got)) {
          if (out->empty()) {
            std::cout << codewe::to_string(*bytes);
          } else {
            util::write_file_atomic(*out, codewe::to_string(*bytes));
          }
          return cli::kExitOk;
        }
        if (const auto* erased = std::get_if<cas::Erased>(&got)) {
          print({{"status", "erased"}, {"tombstone", erased->tombstone.to_document()}});
          return cli::kExitRejected;
        }
        throw Error(ErrorCode::NotFound, *addr);
      };
    });
  }
  auto add_erase = [this](CLI::App* cmd, bool with_contract) {
    auto id = std::make_shared<std::string>();
    auto addr = std::make_shared<std::string>();
    auto reason = std::make_shared<std::string>("gdpr-art17");
    auto requester = std::make_shared<std::string>();
    auto key = std::make_shared<std::string>();
    if (with_contract) cmd->add_option("contract", *id, "Contract id")->required();
    cmd->add_option("address", *addr, "Address / response digest (hex)")->required();
    cmd->add_option("--reason", *reason, "Short reason code");
    cmd->add_option("--requester-key", *requester, "Key of whoever requested erasure (default: admin)");
    cmd->add_option("--admin-key", *key, "Administrator key file");
    cmd->callback([=, this] {
      action_ = [=, this] {
        auto admin = admin_key(*key);
        auto req_keys = requester->empty() ? admin : service::read_key_file(*requester);
        const auto address = parse_digest(*addr);
        auto request = cas::ErasureRequest::make(address, *reason, req_keys);
        cas::Tombstone tombstone;
        if (with_contract) {
          auto ws = workspace();
          tombstone = ws->erase(parse_digest(*id), address, request, admin);
        } else {
          auto cfg = config();
          cas::CasStore s(cfg.cas, static_cast<std::size_t>(cfg.max_blob_size));
          tombstone = s.erase(address, request, admin, 0);
        }
        print({{"address", address.hex()}, {"tombstone_digest", tombstone.digest().hex()}});
        return cli::kExitOk;
      };
    });
  };
  add_erase(group->add_subcommand("erase", "Erase a blob, leaving a signed tombstone (no ledger record)"), false);
  add_erase(app_.add_subcommand("erase", "Erase a committed response and record the erasure on the ledger"), true);
}

// serve ----------------------------------------------------------------------

void Cli::add_serve() {
  auto* cmd = app_.add_subcommand("serve", "Run the HTTP service");
  auto listen = std::make_shared<std::string>();
  cmd->add_option("--listen", *listen, "host:port (default from config)");
  cmd->callback([=, this] {
    action_ = [=, this] {
      auto cfg = config();
      if (!listen->empty()) cfg.set("listen", *listen);
      Workspace ws(cfg);
      service::HttpService http(ws);
      g_running_service = &http;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      const bool ok = http.listen(cfg.listen_host, cfg.listen_port);
      g_running_service = nullptr;
      return ok ? cli::kExitOk : cli::kExitIo;
    };
  });
}

int Cli::run(int argc, char** argv) {
  try {
    app_.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app_.exit(e);
    return rc == 0 ? 0 : cli::kExitUsage;
  }
  try {
    return action_ ? action_() : cli::kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitIo;
  }
}

}  // namespace

int main(int argc, char** argv) {
  Cli cli;
  return cli.run(argc, argv);
}
