#include "tribute/http_server.hpp"

#include <atomic>
#include <condition_variable>
#include <thread>

#include "httplib.h"

namespace tribute::service {

namespace {

constexpr auto kStreamTick = std::chrono::seconds(1);
constexpr int kKeepAliveTicks = 15;

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

json body_of(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    return json::parse(req.body);
  } catch (const json::parse_error& e) {
    throw ServiceError(400, "bad_request", std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

struct HttpServer::Impl {
  explicit Impl(SessionManager& s) : sessions(s) {}

  SessionManager& sessions;
  httplib::Server server;
  std::atomic<bool> stopping{false};
  std::mutex mutex;
  std::condition_variable wake;

  template <typename F>
  httplib::Server::Handler wrap(F&& f, int ok_status = 200) {
    return [f = std::forward<F>(f), ok_status](const httplib::Request& req, httplib::Response& res) {
      try {
        send_json(res, ok_status, f(req));
      } catch (const ServiceError& e) {
        send_json(res, e.status(), e.to_json());
      } catch (const std::exception& e) {
        send_json(res, 500, {{"error", "internal"}, {"message", e.what()}});
      }
    };
  }

  void routes() {
    const std::string sid = "/api/sessions/([0-9a-f]+)";
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
    server.Options(".*", [](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.status = 204;
    });

    server.Get("/api/health", wrap([](const httplib::Request&) {
                 return json{{"ok", true}, {"protocol", kProtocolVersion}};
               }));
    server.Get("/api/agents", wrap([](const httplib::Request&) {
                 return json{{"protocol", kProtocolVersion}, {"agents", SessionManager::list_agents()}};
               }));
    server.Post("/api/sessions", wrap([this](const httplib::Request& req) {
                  return sessions.create(SessionOptions::from_json(body_of(req)));
                }, 201));
    server.Get(sid, wrap([this](const httplib::Request& req) { return sessions.snapshot(req.matches[1]); }));
    server.Delete(sid, wrap([this](const httplib::Request& req) {
                    sessions.remove(req.matches[1]);
                    return json{{"deleted", req.matches[1].str()}};
                  }));
    server.Post(sid + "/draft", wrap([this](const httplib::Request& req) {
                  const json body = body_of(req);
                  const auto p = body.contains("patron") && body["patron"].is_string()
                                     ? parse_patron(body["patron"].get<std::string>())
                                     : std::nullopt;
                  if (!p) throw ServiceError(400, "bad_request", "expected {\"patron\": NAME}");
                  return sessions.draft(req.matches[1], *p);
                }));
    server.Post(sid + "/moves", wrap([this](const httplib::Request& req) {
                  const json body = body_of(req);
                  if (body.contains("index")) {
                    if (!body["index"].is_number_unsigned())
                      throw ServiceError(400, "bad_request", "'index' must be a non-negative integer");
                    return sessions.submit_move_index(req.matches[1], body["index"].get<std::size_t>());
                  }
                  if (body.contains("move")) return sessions.submit_move(req.matches[1], move_from_json(body["move"]));
                  throw ServiceError(400, "bad_request", "expected {\"index\": N} or {\"move\": {...}}");
                }));
    server.Post(sid + "/ai/step", wrap([this](const httplib::Request& req) { return sessions.ai_step(req.matches[1]); }));
    server.Post(sid + "/ai/turn", wrap([this](const httplib::Request& req) { return sessions.ai_turn(req.matches[1]); }));
    server.Get(sid + "/history", wrap([this](const httplib::Request& req) { return sessions.history(req.matches[1]); }));
    server.Get(sid + "/logs", wrap([this](const httplib::Request& req) {
                 std::size_t since = 0;
                 if (req.has_param("since")) since = std::stoul(req.get_param_value("since"));
                 return sessions.logs(req.matches[1], since);
               }));
    server.Get(sid + "/stream", [this](const httplib::Request& req, httplib::Response& res) { stream(req, res); });
  }

  // Server-sent events: one "snapshot" event per version change.
  void stream(const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    std::uint64_t known = 0;
    if (req.has_param("version")) known = std::stoull(req.get_param_value("version"));
    try {
      sessions.snapshot(id);
    } catch (const ServiceError& e) {
      send_json(res, e.status(), e.to_json());
      return;
    }
    res.set_header("Cache-Control", "no-cache");
    res.set_chunked_content_provider("text/event-stream", [this, id, known, idle = 0](std::size_t,
                                                                                      httplib::DataSink& sink) mutable {
      if (stopping) return false;
      std::optional<json> snap;
      try {
        snap = sessions.wait_for_update(id, known, kStreamTick);
      } catch (const ServiceError&) {
        const std::string bye = "event: closed\ndata: {}\n\n";
        sink.write(bye.data(), bye.size());
        sink.done();
        return true;
      }
      if (snap) {
        known = (*snap)["version"].get<std::uint64_t>();
        idle = 0;
        const std::string msg = "event: snapshot\ndata: " + snap->dump() + "\n\n";
        return sink.write(msg.data(), msg.size());
      }
      if (++idle >= kKeepAliveTicks) {
        idle = 0;
        const std::string ping = ": keepalive\n\n";
        return sink.write(ping.data(), ping.size());
      }
      return true;
    });
  }
};

HttpServer::HttpServer(SessionManager& sessions) : impl_(std::make_unique<Impl>(sessions)) { impl_->routes(); }

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  const int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void HttpServer::serve() {
  std::thread janitor([this] {
    std::unique_lock lock(impl_->mutex);
    while (!impl_->stopping) {
      impl_->wake.wait_for(lock, std::chrono::minutes(1));
      if (!impl_->stopping) impl_->sessions.expire_idle();
    }
  });
  impl_->server.listen_after_bind();
  {
    std::lock_guard lock(impl_->mutex);
    impl_->stopping = true;
  }
  impl_->wake.notify_all();
  janitor.join();
}

void HttpServer::stop() {
  {
    std::lock_guard lock(impl_->mutex);
    impl_->stopping = true;
  }
  impl_->wake.notify_all();
  impl_->server.stop();
}

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace tribute::service
