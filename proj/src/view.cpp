#include "tribute/view.hpp"

#include <algorithm>

namespace tribute {

void sort_by_name(std::vector<CardInstance>& cards, const CardSet& set) {
  std::sort(cards.begin(), cards.end(), [&](const CardInstance& a, const CardInstance& b) {
    const std::string& na = set[a.card].name;
    const std::string& nb = set[b.card].name;
    if (na != nb) return na < nb;
    return a.uid < b.uid;
  });
}

PlayerView to_player_view(const MatchState& state, int seat) {
  PlayerView view;
  view.seat = seat;
  view.state = state;
  MatchState& s = view.state;
  const CardSet& set = *s.cards;

  sort_by_name(s.players[seat].draw_pile, set);

  PlayerBoard& opp = s.players[1 - seat];
  view.opponent_hand_size = static_cast<int>(opp.hand.size());
  opp.draw_pile.insert(opp.draw_pile.end(), opp.hand.begin(), opp.hand.end());
  opp.hand.clear();
  sort_by_name(opp.draw_pile, set);

  sort_by_name(s.tavern_pile, set);
  s.rng = Rng(0);
  if (s.choice && s.choice->seat != seat) {
    s.choice.reset();
    s.effect_queue.clear();
  }
  return view;
}

SeededGameState seed_view(const PlayerView& view, std::uint64_t seed) {
  MatchState s = view.state;
  Rng rng(seed);
  PlayerBoard& self = s.players[view.seat];
  rng.shuffle(std::span(self.draw_pile));

  PlayerBoard& opp = s.players[1 - view.seat];
  std::vector<CardInstance> pool = std::move(opp.draw_pile);
  rng.shuffle(std::span(pool));
  const auto hand_size = static_cast<std::size_t>(std::clamp<int>(view.opponent_hand_size, 0, static_cast<int>(pool.size())));
  opp.hand.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(hand_size));
  opp.draw_pile.assign(pool.begin() + static_cast<std::ptrdiff_t>(hand_size), pool.end());

  rng.shuffle(std::span(s.tavern_pile));
  s.rng = Rng(rng.next());
  return SeededGameState(std::move(s), view.seat);
}

std::pair<SeededGameState, EventLog> SeededGameState::simulate(const Move& move) const {
  std::pair<SeededGameState, EventLog> out{*this, {}};
  tribute::apply(out.first.state_, move, &out.second);
  return out;
}

}  // namespace tribute
