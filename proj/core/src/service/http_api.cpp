#include "stoplab/service/http_api.hpp"

#include <charconv>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "stoplab/error.hpp"
#include "stoplab/solve_report.hpp"

namespace stoplab::service {

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kOutOfRange:
    case ErrorCode::kHorizonCapExceeded:
    case ErrorCode::kParse:
      return 400;
    case ErrorCode::kNotFound:
      return 404;
    case ErrorCode::kDecisionRequired:
    case ErrorCode::kNoPendingObservation:
    case ErrorCode::kSessionFinalized:
    case ErrorCode::kNotFinalized:
    case ErrorCode::kProtocolViolation:
      return 409;
    case ErrorCode::kIo:
      return 500;
  }
  return 500;
}

namespace {

void send_json(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, ErrorCode code, const std::string& message) {
  Json body;
  body["error"] = std::string(to_string(code));
  body["message"] = message;
  send_json(res, http_status(code), body);
}

Json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return Json::object();
  try {
    Json j = Json::parse(req.body);
    if (!j.is_object()) fail(ErrorCode::kParse, "request body must be a JSON object");
    return j;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, std::string("malformed JSON body: ") + e.what());
  }
}

template <typename T>
T parse_number(const std::string& text, const char* name) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    fail(ErrorCode::kInvalidArgument, std::string("query parameter ") + name + " is not a number");
  }
  return value;
}

double query_double(const httplib::Request& req, const char* name, double fallback) {
  if (!req.has_param(name)) return fallback;
  const auto text = req.get_param_value(name);
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(name);
    return v;
  } catch (const std::logic_error&) {
    fail(ErrorCode::kInvalidArgument, std::string("query parameter ") + name + " is not a number");
  }
}

bool query_bool(const httplib::Request& req, const char* name) {
  if (!req.has_param(name)) return false;
  const auto v = req.get_param_value(name);
  if (v == "1" || v == "true") return true;
  if (v == "0" || v == "false") return false;
  fail(ErrorCode::kInvalidArgument, std::string("query parameter ") + name + " must be true or false");
}

/// Wraps a handler so stoplab errors become JSON error bodies.
template <typename F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const Error& e) {
      send_error(res, e.code(), e.what());
    } catch (const nlohmann::json::exception& e) {
      send_error(res, ErrorCode::kParse, e.what());
    } catch (const std::exception& e) {
      send_error(res, ErrorCode::kIo, e.what());
    }
  };
}

}  // namespace

struct HttpApi::Impl {
  SessionService& service;
  HttpOptions options;
  httplib::Server server;
  std::thread thread;
  int bound_port = -1;

  Impl(SessionService& s, HttpOptions o) : service(s), options(std::move(o)) {
    // The library default adds SO_REUSEPORT, which lets a second server share
    // a busy port silently. Keep SO_REUSEADDR only.
    server.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
    });
    routes();
  }

  void routes() {
    server.Post("/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto record = service.create_session(config_from_json(parse_body(req)));
      send_json(res, 201, redacted_json(record));
    }));

    server.Get(R"(/sessions/([0-9a-f]+))",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 send_json(res, 200, redacted_json(*service.find(req.matches[1])));
               }));

    server.Post(R"(/sessions/([0-9a-f]+)/next)",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
                  send_json(res, 200, reveal_json(service.next_observation(req.matches[1])));
                }));

    server.Post(R"(/sessions/([0-9a-f]+)/decision)",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
                  const Json body = parse_body(req);
                  if (!body.contains("choice") || !body["choice"].is_string()) {
                    fail(ErrorCode::kInvalidArgument, R"(body must contain "choice": "stop" | "pass")");
                  }
                  const auto choice = parse_decision(body["choice"].get<std::string>());
                  Json metadata = body.contains("metadata") ? body["metadata"] : Json(nullptr);
                  const auto record = service.decide(req.matches[1], choice, std::move(metadata));
                  send_json(res, 200, redacted_json(record));
                }));

    server.Get(R"(/sessions/([0-9a-f]+)/result)",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 send_json(res, 200, result_json(service.result(req.matches[1])));
               }));

    server.Get("/export", guarded([this](const httplib::Request& req, httplib::Response& res) {
      ExportFilter filter;
      if (req.has_param("since")) {
        filter.since_ms = parse_number<std::int64_t>(req.get_param_value("since"), "since");
      }
      filter.include_open = query_bool(req, "include_open");
      std::ostringstream out;
      service.export_log(out, filter);
      res.status = 200;
      res.set_content(out.str(), "application/x-ndjson");
    }));

    server.Get("/solve", guarded([this](const httplib::Request& req, httplib::Response& res) {
      PayoffParams params;
      params.alpha = query_double(req, "alpha", 1.0);
      params.beta = query_double(req, "beta", 0.0);
      params.gamma = query_double(req, "gamma", 0.0);
      params.validate();
      if (!req.has_param("n")) fail(ErrorCode::kInvalidArgument, "query parameter n is required");
      const int n = parse_number<int>(req.get_param_value("n"), "n");
      if (n < 1) fail(ErrorCode::kInvalidArgument, "n must be >= 1");
      if (n > options.solve_cap) {
        fail(ErrorCode::kHorizonCapExceeded, "n exceeds the solve cap of " +
                                                 std::to_string(options.solve_cap));
      }
      const auto report = make_solve_report(params, n);
      send_json(res, 200, solve_report_to_json(report, query_bool(req, "tables")));
    }));

    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (!res.body.empty()) return;
      if (res.status == 404) {
        send_error(res, ErrorCode::kNotFound, "no such route");
      }
    });
  }
};

HttpApi::HttpApi(SessionService& service, HttpOptions options)
    : impl_(std::make_unique<Impl>(service, std::move(options))) {}

HttpApi::~HttpApi() { stop(); }

int HttpApi::bind() {
  auto& s = impl_->server;
  if (impl_->options.port == 0) {
    impl_->bound_port = s.bind_to_any_port(impl_->options.host);
  } else if (s.bind_to_port(impl_->options.host, impl_->options.port)) {
    impl_->bound_port = impl_->options.port;
  } else {
    impl_->bound_port = -1;
  }
  if (impl_->bound_port < 0) {
    fail(ErrorCode::kIo, "cannot bind " + impl_->options.host + ":" +
                             std::to_string(impl_->options.port));
  }
  return impl_->bound_port;
}

void HttpApi::listen() {
  if (impl_->bound_port < 0) fail(ErrorCode::kIo, "listen() before a successful bind()");
  impl_->server.listen_after_bind();
}

void HttpApi::start() {
  if (impl_->bound_port < 0) bind();
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void HttpApi::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

int HttpApi::port() const noexcept { return impl_->bound_port; }

}  // namespace stoplab::service
