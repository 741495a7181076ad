#include "http_service.hpp"

#include <spdlog/sinks/stdout_sinks.h>

namespace codewe::service {

using Document = canonical::Document;

int http_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::UnknownContract:
    case ErrorCode::NotFound:
    case ErrorCode::UnknownCommitment:
    case ErrorCode::ReportUnavailable:
    case ErrorCode::NotYetAnalyzed:
    case ErrorCode::CoProductionMissing:
      return 404;
    case ErrorCode::TokenReplay:
    case ErrorCode::DuplicateKey:
    case ErrorCode::DuplicateContract:
    case ErrorCode::AlreadyAnalyzed:
    case ErrorCode::AlreadyErased:
    case ErrorCode::SurveyClosed:
    case ErrorCode::SurveyFull:
    case ErrorCode::InvalidTransition:
    case ErrorCode::WrongPhase:
    case ErrorCode::ConflictRetry:
      return 409;
    case ErrorCode::InvalidSignature:
    case ErrorCode::Unauthorized:
    case ErrorCode::UnknownToken:
      return 403;
    case ErrorCode::BlobTooLarge:
      return 413;
    case ErrorCode::RateLimited:
      return 429;
    case ErrorCode::StoreUnavailable:
    case ErrorCode::SnapshotCorrupt:
    case ErrorCode::IntegrityViolation:
      return 503;
    default:
      return 400;
  }
}

RateLimiter::RateLimiter(std::uint32_t per_minute, Clock clock) : per_minute_(per_minute), clock_(std::move(clock)) {}

bool RateLimiter::allow(const std::string& address) {
  if (per_minute_ == 0) return true;
  const auto now = clock_();
  std::lock_guard lock(mutex_);
  auto& q = hits_[address];
  while (!q.empty() && now - q.front() >= std::chrono::minutes(1)) q.pop_front();
  if (q.size() >= per_minute_) return false;
  q.push_back(now);
  return true;
}

namespace {

void send(httplib::Response& res, int status, const Document& doc) {
  res.status = status;
  res.set_content(canonical::encode(doc), "application/json");
}

void send_error(httplib::Response& res, ErrorCode code, const std::string& detail) {
  send(res, http_status(code), {{"error", std::string(to_string(code))}, {"detail", detail}});
}

crypto::Digest path_digest(const httplib::Request& req, std::size_t i) {
  return crypto::digest_from_hex(req.matches[static_cast<int>(i)].str());
}

}  // namespace

HttpService::HttpService(Workspace& workspace, std::shared_ptr<spdlog::logger> logger)
    : ws_(workspace),
      log_(logger ? std::move(logger)
                  : std::make_shared<spdlog::logger>("codewe-http", std::make_shared<spdlog::sinks::stderr_sink_mt>())),
      limiter_(workspace.config().rate_limit_per_minute) {
  routes();
}

template <typename F>
void HttpService::respond(const httplib::Request& req, httplib::Response& res, F&& body) {
  try {
    body();
  } catch (const Error& e) {
    send_error(res, e.code(), e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    send_error(res, ErrorCode::StoreUnavailable, e.what());
  } catch (const std::exception& e) {
    res.status = 500;
    res.set_content(canonical::encode(Document{{"error", "Internal"}, {"detail", e.what()}}), "application/json");
  }
  log_->info("{} {} {}", req.method, req.path, res.status);
}

void HttpService::routes() {
  constexpr const char* id = "/surveys/([0-9a-f]{64})";
  const std::string base = id;

  server_.Get(base, [this](const httplib::Request& req, httplib::Response& res) {
    respond(req, res, [&] { send(res, 200, ws_.survey_document(path_digest(req, 1))); });
  });

  server_.Post(base + "/responses", [this](const httplib::Request& req, httplib::Response& res) {
    respond(req, res, [&] {
      if (!limiter_.allow(req.remote_addr)) throw Error(ErrorCode::RateLimited);
      Document doc;
      try {
        doc = canonical::decode(req.body);
      } catch (const std::exception& e) {
        throw Error(ErrorCode::MalformedTransaction, e.what());
      }
      auto receipt = ws_.submit(path_digest(req, 1), SubmissionRequest::from_document(doc));
      send(res, 200, receipt.to_document());
    });
  });

  server_.Get(base + "/proof/([0-9a-f]{64})", [this](const httplib::Request& req, httplib::Response& res) {
    respond(req, res, [&] { send(res, 200, ws_.proof_document(path_digest(req, 1), path_digest(req, 2))); });
  });

  server_.Get(base + "/report", [this](const httplib::Request& req, httplib::Response& res) {
    respond(req, res, [&] { send(res, 200, ws_.report_document(path_digest(req, 1))); });
  });

  server_.Get(base + "/audit", [this](const httplib::Request& req, httplib::Response& res) {
    respond(req, res, [&] {
      auto finding = ws_.audit(path_digest(req, 1));
      send(res, 200, {{"finding", finding.to_document()}, {"summary", finding.summary()}});
    });
  });

  server_.Get(base + "/codesign", [this](const httplib::Request& req, httplib::Response& res) {
    respond(req, res, [&] { send(res, 200, ws_.codesign_summary(path_digest(req, 1))); });
  });
}

bool HttpService::listen(const std::string& host, int port) {
  log_->info("listening on {}:{}", host, port);
  return server_.listen(host, port);
}

int HttpService::bind_any(const std::string& host) { return server_.bind_to_any_port(host); }

bool HttpService::listen_after_bind() { return server_.listen_after_bind(); }

void HttpService::stop() { server_.stop(); }

bool HttpService::running() const { return server_.is_running(); }

}  // namespace codewe::service
