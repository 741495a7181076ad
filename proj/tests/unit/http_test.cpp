#include <gtest/gtest.h>

#include <random>
#include <sstream>
#include <thread>

#include <spdlog/sinks/ostream_sink.h>

#include "codewe/service/files.hpp"
#include "http_service.hpp"
#include "scenario.hpp"

using namespace codewe;
using namespace codewe::testing;
using crypto::Digest;
namespace fs = std::filesystem;

namespace {

// A workspace with one open survey, served on an ephemeral port.
class Served : public ::testing::Test {
 protected:
  void SetUp() override {
    service::ServiceConfig c;
    c.ledger = dir / "ledger.snap";
    c.cas = dir / "cas";
    c.reports = dir / "reports";
    c.tokens = dir / "tokens";
    c.rate_limit_per_minute = rate_limit();
    ws = std::make_unique<service::Workspace>(c);
    DraftShape shape;
    shape.max_responses = 6;
    shape.token_count = 6;
    params = run_codesign(ws->cas(), make_draft(shape), panel).params;
    auto d = ws->deploy(params, panel.admin);
    id = d.contract_id;
    tokens = d.tokens;
    ws->open(id, panel.admin);

    sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(log);
    http = std::make_unique<service::HttpService>(*ws, std::make_shared<spdlog::logger>("test", sink));
    port = http->bind_any("127.0.0.1");
    ASSERT_GT(port, 0);
    thread = std::thread([this] { http->listen_after_bind(); });
    client = std::make_unique<httplib::Client>("127.0.0.1", port);
    for (int i = 0; i < 100 && !http->running(); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }

  void TearDown() override {
    http->stop();
    thread.join();
  }

  virtual std::uint32_t rate_limit() const { return 0; }

  std::string base() const { return "/surveys/" + id.hex(); }

  struct Sent {
    analysis::PreparedSubmission prep;
    std::string body;
  };

  Sent request(std::size_t token, const std::string& label) {
    auto keys = seeded_key(label);
    auto prep = analysis::prepare_submission(params, random_answers(params, rng), keys, tokens[token]);
    return {prep, canonical::encode(service::make_submission_request(id, prep, keys).to_document())};
  }

  httplib::Result post(const std::string& body) {
    return client->Post(base() + "/responses", body, "application/json");
  }

  TempDir dir;
  Panel panel = seeded_panel("http");
  std::unique_ptr<service::Workspace> ws;
  contract::SurveyParameters params;
  Digest id;
  std::vector<contract::EligibilityToken> tokens;
  std::ostringstream log;
  std::shared_ptr<spdlog::sinks::ostream_sink_mt> sink;
  std::unique_ptr<service::HttpService> http;
  std::thread thread;
  int port = 0;
  std::unique_ptr<httplib::Client> client;
  std::mt19937_64 rng{7};
};

class RateLimited : public Served {
  std::uint32_t rate_limit() const override { return 3; }
};

}  // namespace

TEST_F(Served, SubmitReplayAndProof) {
  auto first = request(0, "h0");
  auto res = post(first.body);
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  auto receipt = canonical::decode(res->body);
  EXPECT_EQ(receipt["response_digest"], first.prep.commitment.response_digest.hex());
  EXPECT_EQ(receipt["contract_id"], id.hex());

  // Same token, different respondent.
  auto replay = request(0, "h1");
  res = post(replay.body);
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 409);
  EXPECT_EQ(canonical::decode(res->body)["error"], "TokenReplay");

  auto second = request(1, "h2");
  EXPECT_EQ(post(second.body)->status, 200);

  res = client->Get(base() + "/proof/" + first.prep.commitment.response_digest.hex());
  EXPECT_EQ(res->status, 404);  // not analysed yet
  ws->close(id, panel.admin);
  ws->analyze(id, panel.admin);

  res = client->Get(base() + "/proof/" + first.prep.commitment.response_digest.hex());
  ASSERT_EQ(res->status, 200);
  auto proof = analysis::ProofFile::from_document(canonical::decode(res->body));
  EXPECT_TRUE(crypto::merkle_verify(*ws->state(id).analysis_root, first.prep.commitment.response_digest, proof.proof));

  res = client->Get(base() + "/report");
  ASSERT_EQ(res->status, 200);
  EXPECT_EQ(canonical::decode(res->body)["analysis_root"], ws->state(id).analysis_root->hex());

  res = client->Get(base() + "/audit");
  ASSERT_EQ(res->status, 200);
  EXPECT_EQ(canonical::decode(res->body)["finding"]["verdict"], "Clean");

  res = client->Get(base());
  ASSERT_EQ(res->status, 200);
  EXPECT_EQ(canonical::decode(res->body)["phase"], "Analyzed");

  // Closed survey.
  EXPECT_EQ(post(request(2, "h3").body)->status, 409);
}

TEST_F(Served, ErrorStatuses) {
  EXPECT_EQ(client->Get("/surveys/" + crypto::hash("none").hex())->status, 404);
  EXPECT_EQ(client->Get("/surveys/not-hex")->status, 404);
  EXPECT_EQ(client->Get(base() + "/report")->status, 404);
  EXPECT_EQ(client->Get(base() + "/audit")->status, 404);
  EXPECT_EQ(post("{not json")->status, 400);
  EXPECT_EQ(post("{}")->status, 400);
  auto bad = request(0, "forged");
  auto doc = canonical::decode(bad.body);
  auto sig = doc["tx_signature"].get<std::string>();
  sig[0] = sig[0] == 'a' ? 'b' : 'a';
  doc["tx_signature"] = sig;
  EXPECT_EQ(post(canonical::encode(doc))->status, 403);
  auto stranger = seeded_key("stranger");
  auto foreign = analysis::prepare_submission(params, random_answers(params, rng), stranger,
                                              seeded_tokens("elsewhere", 1)[0]);
  auto res = post(canonical::encode(service::make_submission_request(id, foreign, stranger).to_document()));
  EXPECT_EQ(res->status, 403);
  EXPECT_EQ(canonical::decode(res->body)["error"], "UnknownToken");
}

TEST_F(Served, LogsAndPayloadsCarryNoSecrets) {
  std::vector<Sent> sent;
  std::string all_bodies;
  for (std::size_t i = 0; i < 3; ++i) {
    sent.push_back(request(i, "secret" + std::to_string(i)));
    auto r = post(sent.back().body);
    all_bodies += r->body;
  }
  all_bodies += client->Get(base())->body;
  auto summary = client->Get(base() + "/codesign");
  ASSERT_EQ(summary->status, 200);
  all_bodies += summary->body;
  ws->close(id, panel.admin);
  ws->analyze(id, panel.admin);
  all_bodies += client->Get(base() + "/report")->body;
  all_bodies += client->Get(base() + "/audit")->body;

  const auto logged = log.str();
  EXPECT_FALSE(logged.empty());
  for (std::size_t i = 0; i < sent.size(); ++i) {
    const auto seed_hex = crypto::hash("secret" + std::to_string(i)).hex();
    EXPECT_EQ(logged.find(seed_hex), std::string::npos);
    EXPECT_EQ(all_bodies.find(seed_hex), std::string::npos);
    EXPECT_EQ(logged.find(sent[i].prep.blob), std::string::npos);
    EXPECT_EQ(logged.find("\"answers\""), std::string::npos);
    EXPECT_EQ(all_bodies.find(sent[i].prep.blob), std::string::npos);
    EXPECT_EQ(all_bodies.find(sent[i].prep.commitment.eligibility_token.hex()), std::string::npos);
  }
  for (const auto* k : {&panel.admin, &panel.researcher, &panel.participant}) {
    EXPECT_EQ(summary->body.find(k->public_key.hex()), std::string::npos);
    EXPECT_EQ(logged.find(k->private_key.reveal_hex()), std::string::npos);
  }
}

TEST_F(RateLimited, FourthPostInAMinuteIs429) {
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(post(request(i, "rl" + std::to_string(i)).body)->status, 200);
  auto res = post(request(3, "rl3").body);
  EXPECT_EQ(res->status, 429);
  EXPECT_EQ(canonical::decode(res->body)["error"], "RateLimited");
  EXPECT_EQ(client->Get(base())->status, 200);  // reads are not limited
}

TEST(RateLimiterTest, SlidingWindow) {
  auto now = std::chrono::steady_clock::time_point{};
  service::RateLimiter limiter(2, [&] { return now; });
  EXPECT_TRUE(limiter.allow("a"));
  EXPECT_TRUE(limiter.allow("a"));
  EXPECT_FALSE(limiter.allow("a"));
  EXPECT_TRUE(limiter.allow("b"));
  now += std::chrono::seconds(59);
  EXPECT_FALSE(limiter.allow("a"));
  now += std::chrono::seconds(1);
  EXPECT_TRUE(limiter.allow("a"));
  service::RateLimiter off(0);
  for (int i = 0; i < 100; ++i) EXPECT_TRUE(off.allow("x"));
}

TEST(HttpStatus, Table) {
  EXPECT_EQ(service::http_status(ErrorCode::UnknownContract), 404);
  EXPECT_EQ(service::http_status(ErrorCode::TokenReplay), 409);
  EXPECT_EQ(service::http_status(ErrorCode::SurveyFull), 409);
  EXPECT_EQ(service::http_status(ErrorCode::InvalidSignature), 403);
  EXPECT_EQ(service::http_status(ErrorCode::BlobTooLarge), 413);
  EXPECT_EQ(service::http_status(ErrorCode::RateLimited), 429);
  EXPECT_EQ(service::http_status(ErrorCode::StoreUnavailable), 503);
  EXPECT_EQ(service::http_status(ErrorCode::InvalidResponse), 400);
}
