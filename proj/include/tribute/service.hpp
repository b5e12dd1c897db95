#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "tribute/agents.hpp"

namespace tribute::service {

using json = nlohmann::json;

// Bumped whenever a snapshot or request field changes meaning.
inline constexpr int kProtocolVersion = 1;
inline constexpr std::chrono::seconds kDefaultIdleTimeout{3600};

// Request failures. `status` is the HTTP status the server answers with.
class ServiceError : public std::runtime_error {
 public:
  ServiceError(int status, std::string code, const std::string& message, json details = json::object())
      : std::runtime_error(message), status_(status), code_(std::move(code)), details_(std::move(details)) {}
  int status() const { return status_; }
  const std::string& code() const { return code_; }
  const json& details() const { return details_; }
  json to_json() const;

 private:
  int status_;
  std::string code_;
  json details_;
};

// --- wire forms -----------------------------------------------------------

json card_json(const MatchState& s, const CardInstance& c);
json move_json(const MatchState& s, const Move& m);
// Accepts {"type": "PLAY_CARD", "uid": 12}, {"type": "ACTIVATE_PATRON",
// "patron": "Crows"}, {"type": "MAKE_CHOICE", "picks": [0, 2]}, ...
Move move_from_json(const json& j);
json event_json(const Event& e, const CardSet& cards);
// Everything, hidden zones included.
json state_json(const MatchState& s);

// --- sessions -------------------------------------------------------------

struct SessionOptions {
  std::string agent = "random";
  int human_seat = 0;
  std::optional<std::uint64_t> seed;  // drawn at random when absent
  Duration ai_turn_budget = kDefaultTurnBudget;
  AgentOptions agent_options;

  // {"agent", "human_seat", "seed", "turn_budget_ms"}; unknown keys rejected.
  static SessionOptions from_json(const json& j);
};

class SessionManager {
 public:
  using TimeSource = std::function<Clock::time_point()>;

  explicit SessionManager(std::chrono::seconds idle_timeout = kDefaultIdleTimeout, TimeSource now = Clock::now);
  ~SessionManager();
  SessionManager(const SessionManager&) = delete;
  SessionManager& operator=(const SessionManager&) = delete;

  // Each call below returns the session snapshot after the operation, except
  // history/logs/list_agents. Unknown ids raise ServiceError 404.
  json create(const SessionOptions& options);
  json snapshot(const std::string& id);
  json draft(const std::string& id, PatronId patron);
  json submit_move(const std::string& id, const Move& move);
  json submit_move_index(const std::string& id, std::size_t legal_index);
  json ai_step(const std::string& id);
  json ai_turn(const std::string& id);
  json history(const std::string& id);
  json logs(const std::string& id, std::size_t since = 0);
  static json list_agents();
  void remove(const std::string& id);

  // Drops sessions untouched for longer than the idle timeout.
  std::size_t expire_idle();
  std::size_t size() const;

  // Push channel: blocks until the snapshot version exceeds `known_version`
  // or `timeout` passes. nullopt on timeout; ServiceError 404 once the
  // session is gone.
  std::optional<json> wait_for_update(const std::string& id, std::uint64_t known_version, Duration timeout);

  // Replays the recorded draft and moves from the seed alone.
  MatchState replay(const std::string& id);
  MatchState state(const std::string& id);

  struct Session;

 private:
  std::shared_ptr<Session> find(const std::string& id);
  std::string new_id();

  std::chrono::seconds idle_timeout_;
  TimeSource now_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  Rng ids_;
};

}  // namespace tribute::service
