#pragma once

#include <chrono>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include <httplib.h>
#include <spdlog/logger.h>

#include "codewe/service/workspace.hpp"

namespace codewe::service {

/// Status code for a protocol error. Rejections are 4xx; storage faults 503.
int http_status(ErrorCode code) noexcept;

/// Sliding one-minute window per remote address. A limit of 0 allows all.
class RateLimiter {
 public:
  using Clock = std::function<std::chrono::steady_clock::time_point()>;

  explicit RateLimiter(std::uint32_t per_minute, Clock clock = std::chrono::steady_clock::now);

  bool allow(const std::string& address);

 private:
  std::uint32_t per_minute_;
  Clock clock_;
  std::mutex mutex_;
  std::map<std::string, std::deque<std::chrono::steady_clock::time_point>> hits_;
};

/// HTTP front end over a Workspace. Request bodies and response content are
/// never logged; the access log carries method, path and status only.
class HttpService {
 public:
  HttpService(Workspace& workspace, std::shared_ptr<spdlog::logger> logger = nullptr);

  /// Blocks until stop().
  bool listen(const std::string& host, int port);
  /// Binds an ephemeral port and returns it; call listen_after_bind() next.
  int bind_any(const std::string& host);
  bool listen_after_bind();
  void stop();
  bool running() const;

 private:
  void routes();
  template <typename F>
  void respond(const httplib::Request& req, httplib::Response& res, F&& body);

  Workspace& ws_;
  std::shared_ptr<spdlog::logger> log_;
  RateLimiter limiter_;
  httplib::Server server_;
};

}  // namespace codewe::service
