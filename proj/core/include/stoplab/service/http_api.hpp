#pragma once

#include <memory>
#include <string>

#include "stoplab/error.hpp"
#include "stoplab/service/session_service.hpp"

namespace stoplab::service {

struct HttpOptions {
  std::string host = "127.0.0.1";
  /// 0 binds an ephemeral port.
  int port = 8080;
  /// Largest n accepted by GET /solve.
  int solve_cap = 100000;
};

/// HTTP+JSON front end for a SessionService.
class HttpApi {
 public:
  HttpApi(SessionService& service, HttpOptions options);
  ~HttpApi();

  HttpApi(const HttpApi&) = delete;
  HttpApi& operator=(const HttpApi&) = delete;

  /// Binds the socket. Throws Error(kIo) if the address cannot be bound.
  /// Returns the bound port.
  int bind();
  /// Serves until stop() is called. bind() must have succeeded.
  void listen();
  /// Starts serving on a background thread.
  void start();
  void stop();
  int port() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// HTTP status for an error code.
int http_status(ErrorCode code);

}  // namespace stoplab::service
