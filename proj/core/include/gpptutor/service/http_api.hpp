#pragma once

#include <functional>
#include <memory>
#include <string>

#include "gpptutor/proof/problem.hpp"
#include "gpptutor/service/tutor_service.hpp"

namespace gpptutor::service {

inline constexpr int kApiVersion = 1;

struct HttpResponse {
  int status = 200;
  std::string body;  // JSON
};

/// Supplies timestamps for requests that do not carry a "t" field.
using Clock = std::function<proof::Timestamp()>;

/// Milliseconds since the Unix epoch.
proof::Timestamp WallClockMillis();

/// Routes the HTTP+JSON API onto a TutorService. Dispatch is usable without
/// sockets; Listen serves it over HTTP.
///
///   POST /sessions                      {"student", "seed"?, "t"?}
///   POST /sessions/{id}/condition       {"condition"?, "t"?}
///   GET  /sessions/{id}/problem         ?t=
///   POST /sessions/{id}/step            {"action": "advance"} | step request
///   POST /sessions/{id}/hint            {"t"?}
///   POST /sessions/{id}/explanation     {"text", "t"?}
///   POST /sessions/{id}/complete        {"t"?}
///   GET  /sessions/{id}/log
///   GET  /sessions/{id}                 snapshot
///   GET  /rules, GET /health
class HttpApi {
 public:
  explicit HttpApi(TutorService& service, Clock clock = WallClockMillis);
  ~HttpApi();

  HttpApi(const HttpApi&) = delete;
  HttpApi& operator=(const HttpApi&) = delete;

  HttpResponse Dispatch(const std::string& method, const std::string& path, const std::string& query_t,
                        const std::string& body);

  /// Blocks until Stop(). Returns false when the address cannot be bound.
  bool Listen(const std::string& host, int port);
  /// Binds an ephemeral port and returns it; serve with ListenAfterBind.
  int BindToAnyPort(const std::string& host);
  bool ListenAfterBind();
  void Stop();
  bool running() const;

 private:
  struct Server;
  TutorService& service_;
  Clock clock_;
  std::unique_ptr<Server> server_;
};

}  // namespace gpptutor::service
