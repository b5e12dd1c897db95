#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tribute/rng.hpp"
#include "tribute/state.hpp"
#include "tribute/view.hpp"

namespace tribute {

using Clock = std::chrono::steady_clock;
using Duration = std::chrono::nanoseconds;

inline constexpr Duration kDefaultTurnBudget = std::chrono::seconds(30);

/// Per-turn thinking allowance. The runner charges the time spent inside each
/// `play` call and resets the budget when the agent's turn starts.
class TimeBudget {
 public:
  explicit TimeBudget(Duration per_turn = kDefaultTurnBudget) : per_turn_(per_turn) {}

  void reset() { consumed_ = Duration::zero(); }
  void charge(Duration spent) { consumed_ += spent; }
  Duration per_turn() const { return per_turn_; }
  Duration consumed() const { return consumed_; }
  Duration remaining() const { return per_turn_ > consumed_ ? per_turn_ - consumed_ : Duration::zero(); }
  bool overdrawn() const { return consumed_ > per_turn_; }

 private:
  Duration per_turn_;
  Duration consumed_{};
};

struct EndGameState {
  Outcome outcome;
  std::array<PlayerView, 2> final_views;
  EventLog events;
  int turns = 0;
  std::uint64_t match_seed = 0;
  std::array<PatronId, 4> patrons{};
};

struct MatchContext {
  CardSetPtr cards;
  int seat = 0;
  std::uint64_t seed = 0;  // per-match agent seed; all agent randomness derives from it
  std::function<void(std::string_view)> log_sink;
};

/// Base class for every agent. Subclasses implement `play` (and optionally
/// patron selection and `game_end`). `select_patron` is called twice per
/// match, `play` once per decision with the legal moves for that decision.
class Agent {
 public:
  virtual ~Agent() = default;

  virtual std::string name() const = 0;

  // Called by the runner before the draft.
  void begin_match(const MatchContext& ctx);

  // Default: uniform over the available patrons.
  virtual PatronId select_patron(std::span<const PatronId> available, int pick_round);
  virtual Move play(const PlayerView& view, std::span<const Move> legal, Duration remaining) = 0;
  virtual void game_end(const EndGameState& /*result*/) {}

  void log(std::string_view text) const;
  // False when nobody listens; lets agents skip formatting log text.
  bool logging() const { return static_cast<bool>(log_sink_); }

 protected:
  virtual void on_match_start() {}

  Rng& rng() { return rng_; }
  int seat() const { return seat_; }
  const CardSetPtr& cards() const { return cards_; }
  // Fresh determinisation seed for one play call.
  std::uint64_t next_seed() { return rng_.next(); }

 private:
  Rng rng_;
  int seat_ = 0;
  CardSetPtr cards_;
  std::function<void(std::string_view)> log_sink_;
};

using AgentPtr = std::unique_ptr<Agent>;

class DraftError : public std::runtime_error {
 public:
  DraftError(int seat, const std::string& what) : std::runtime_error(what), seat_(seat) {}
  int seat() const { return seat_; }

 private:
  int seat_;
};

// Pick order first, second, second, first. Returns picks in pick order.
// Throws DraftError naming the offending seat on an unavailable pick.
std::array<PatronId, 4> draft_patrons(Agent& first, Agent& second);

// Forward simulation on a fully determinised state; `seeded` is untouched.
std::pair<SeededGameState, EventLog> simulate(const SeededGameState& seeded, const Move& move);

}  // namespace tribute
