#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "tribute/rules.hpp"
#include "tribute/state.hpp"

namespace tribute {

/// What one seat may know. Stored as a MatchState whose hidden parts are
/// canonicalised: the viewer's draw pile and the tavern pile are sorted by
/// card name, the opponent's hand and draw pile are merged into one sorted
/// pool (held in the opponent's draw_pile, hand left empty), and the RNG is
/// blanked. Two truths that differ only in hidden ordering give equal views.
struct PlayerView {
  int seat = 0;
  int opponent_hand_size = 0;
  MatchState state;

  const PlayerBoard& self() const { return state.players[seat]; }
  const PlayerBoard& opponent() const { return state.players[1 - seat]; }
  const std::vector<CardInstance>& opponent_pool() const { return opponent().draw_pile; }
  bool my_turn() const { return state.current == seat; }

  friend bool operator==(const PlayerView&, const PlayerView&) = default;
};

/// A complete state fabricated from a view and a seed. Safe to simulate on:
/// nothing in it is hidden.
class SeededGameState {
 public:
  SeededGameState() = default;
  SeededGameState(MatchState state, int seat) : state_(std::move(state)), seat_(seat) {}

  const MatchState& state() const { return state_; }
  MatchState& mutable_state() { return state_; }
  int seat() const { return seat_; }

  std::vector<Move> legal_moves() const { return tribute::legal_moves(state_); }
  // Pure forward application; this object is not modified.
  std::pair<SeededGameState, EventLog> simulate(const Move& move) const;
  // In-place variant for hot loops.
  StepFlags apply_in_place(const Move& move, EventLog* log = nullptr) { return tribute::apply(state_, move, log); }

  friend bool operator==(const SeededGameState&, const SeededGameState&) = default;

 private:
  MatchState state_;
  int seat_ = 0;
};

PlayerView to_player_view(const MatchState& state, int seat);
SeededGameState seed_view(const PlayerView& view, std::uint64_t seed);

// Sorts by raw card-name bytes, ties by uid.
void sort_by_name(std::vector<CardInstance>& cards, const CardSet& set);

}  // namespace tribute
