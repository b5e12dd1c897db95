#pragma once

// Helpers shared by the built-in agents.

#include <vector>

#include "tribute/agents.hpp"

namespace tribute::detail {

inline const CardInstance* find_in(const std::vector<CardInstance>& zone, Uid uid) {
  for (const auto& c : zone)
    if (c.uid == uid) return &c;
  return nullptr;
}

// Searches every visible zone of the state.
inline const CardInstance* find_card(const MatchState& s, Uid uid) {
  for (const auto& p : s.players)
    for (const auto* zone : {&p.hand, &p.played, &p.board, &p.cooldown, &p.draw_pile})
      if (const auto* c = find_in(*zone, uid)) return c;
  for (const auto* zone : {&s.tavern, &s.tavern_pile, &s.removed})
    if (const auto* c = find_in(*zone, uid)) return c;
  return nullptr;
}

inline bool is_member(std::span<const Move> legal, const Move& m) {
  for (const auto& x : legal)
    if (x == m) return true;
  return false;
}

inline bool won(const MatchState& s, int seat) { return s.outcome && s.outcome->winner == seat; }

// Tier lookup with the card set's printed tiers as fallback.
struct Tiers {
  const CardSet* set = nullptr;
  const TierList* list = nullptr;
  int operator()(CardId id) const { return list ? list->tier(id) : (*set)[id].tier; }
};

}  // namespace tribute::detail
