#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tribute/state.hpp"

namespace tribute {

class IllegalMoveError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class SetupError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// What a single move revealed or changed; lets planners detect random events
// without recording the event log.
enum StepFlag : std::uint8_t {
  kStepDrew = 1 << 0,
  kStepShuffled = 1 << 1,
  kStepTavernRevealed = 1 << 2,
  kStepChoiceOpened = 1 << 3,
  kStepTurnEnded = 1 << 4,
  kStepGameOver = 1 << 5,
};
using StepFlags = std::uint8_t;
inline constexpr StepFlags kRandomEventFlags = kStepDrew | kStepShuffled | kStepTavernRevealed | kStepChoiceOpened;

// Builds the opening position: starter decks, hands, tavern, neutral patrons.
MatchState new_match(CardSetPtr cards, const std::array<PatronId, 4>& patrons, std::uint64_t seed);

// All legal moves in stable order; empty on finished states.
void legal_moves(const MatchState& state, std::vector<Move>& out);
std::vector<Move> legal_moves(const MatchState& state);
bool is_legal(const MatchState& state, const Move& move);

// In-place move application. Throws IllegalMoveError (state untouched) when
// the move is not legal. Events are appended to `log` when given.
StepFlags apply(MatchState& state, const Move& move, EventLog* log = nullptr);

// Functional form: returns the successor and the events of this move.
std::pair<MatchState, EventLog> apply_move(const MatchState& state, const Move& move);

std::optional<Outcome> check_terminal(const MatchState& state);

// The individual rule procedures apply() is built from. Exposed for tests and
// tooling; they assume the caller already validated legality.
namespace rules {

void trigger_combo(MatchState& state, const CardInstance& used, EventLog* log = nullptr);
void activate_patron(MatchState& state, PatronId patron, EventLog* log = nullptr);
void end_turn(MatchState& state, EventLog* log = nullptr);
void keyword_effect(MatchState& state, Keyword keyword, int amount, Uid source, EventLog* log = nullptr);
// Runs queued effects until the queue empties or a choice interrupts it.
void resolve_queue(MatchState& state, EventLog* log = nullptr);
bool can_activate_patron(const MatchState& state, PatronId patron);

}  // namespace rules

}  // namespace tribute
