#pragma once

#include <memory>
#include <string>

#include "tribute/service.hpp"

namespace tribute::service {

/// JSON-over-HTTP front end for a SessionManager, plus a server-sent-events
/// stream of snapshots per session. Routes live under /api.
class HttpServer {
 public:
  explicit HttpServer(SessionManager& sessions);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds the listening socket; port 0 picks a free port. Returns the bound
  // port, throws std::runtime_error when binding fails.
  int bind(const std::string& host, int port);
  // Serves until stop(). Also expires idle sessions once a minute.
  void serve();
  void stop();
  // Blocks until serve() is accepting connections.
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace tribute::service
