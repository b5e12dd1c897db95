#pragma once
// Small deterministic positions for checking the search agents against
// brute-force turn enumeration.

#include <limits>

#include "support.hpp"

namespace tt {

inline CardSetPtr micro_cards() {
  static const CardSetPtr set = make_set({
      card("m_coin", "Crows", "action", 2, {{"1", leaf("COIN", 2)}, {"2", leaf("POWER", 2)}}, 3, 1),
      card("m_fork", "Crows", "action", 3, {{"1", either(leaf("COIN", 2), leaf("POWER", 1))}}, 2, 1),
      card("m_blade", "Ansei", "action", 2, {{"1", leaf("POWER", 2)}, {"2", leaf("POWER", 1)}}, 3, 1),
      agent("m_guard", "Ansei", 3, 3, {{"1", leaf("POWER", 1)}}, false, false, 2),
      card("m_gem", "Hlaalu", "action", 5, {{"1", leaf("COIN", 1)}}, 4, 1),
      agent("m_wall", "Pelin", 3, 2, {{"1", leaf("COIN", 1)}}, true, false, 3),
      card("m_hex", "Pelin", "action", 2, {{"1", both(leaf("KNOCKOUT", 1), leaf("COIN", 1))}}, 3, 1),
      card("m_merc", "Treasury", "contract_action", 3, {{"1", leaf("POWER", 4)}}, 2, 1),
      card("m_relic", "Hlaalu", "action", 2, {{"1", leaf("PATRON", 1)}}, 1, 1),
      agent("m_knight", "Pelin", 4, 4, {{"1", leaf("POWER", 2)}}, false, false, 1),
  });
  return set;
}

// A turn-3 position for seat 0 with a random hand, tavern, opponent board and
// resources. Nothing is hidden from a full-state search.
inline MatchState micro_position(Rng& rng) {
  static const std::vector<std::string> hand_pool = {"m_coin", "m_fork", "m_blade", "m_guard", "m_gem",
                                                     "m_hex",  "m_relic", "gold"};
  static const std::vector<std::string> tavern_pool = {"m_merc", "m_knight", "m_blade", "m_guard", "m_relic"};
  MatchState s = blank(micro_cards(), kPatrons, rng.next());
  s.turn = 3;
  const int hand = 2 + static_cast<int>(rng.below(3));
  for (int i = 0; i < hand; ++i) put(s, s.players[0].hand, hand_pool[rng.below(hand_pool.size())]);
  const int tavern = 2 + static_cast<int>(rng.below(2));
  for (int i = 0; i < tavern; ++i) put(s, s.tavern, tavern_pool[rng.below(tavern_pool.size())]);
  const int opp = static_cast<int>(rng.below(3));
  for (int i = 0; i < opp; ++i) put(s, s.players[1].board, rng.below(2) ? "m_wall" : "m_knight");
  for (int i = 0; i < 3; ++i) put(s, s.players[0].draw_pile, "gold");
  s.players[0].coins = static_cast<int>(rng.below(4));
  s.players[0].power = static_cast<int>(rng.below(4));
  s.players[0].prestige = static_cast<int>(rng.below(20));
  s.players[1].prestige = static_cast<int>(rng.below(20));
  for (auto& p : s.patrons) p.favor = static_cast<std::int8_t>(static_cast<int>(rng.below(3)) - 1);
  return s;
}

// Brute force: the best end-of-turn value reachable after each candidate,
// and the first candidate reaching the overall best.
struct Oracle {
  std::vector<double> values;
  std::size_t best = 0;
  std::size_t nodes = 0;
};

inline double oracle_best(const MatchState& s, int seat, int turn, const Evaluator& eval, std::size_t& nodes) {
  if (s.outcome || s.turn != turn || s.current != seat) return eval(s, seat);
  ++nodes;
  double best = -std::numeric_limits<double>::infinity();
  for (const Move& m : legal_moves(s)) {
    MatchState next = s;
    apply(next, m);
    best = std::max(best, oracle_best(next, seat, turn, eval, nodes));
  }
  return best;
}

inline Oracle turn_oracle(const MatchState& s, const Evaluator& eval) {
  Oracle o;
  const auto moves = legal_moves(s);
  const int seat = s.choice ? s.choice->seat : s.current;
  for (std::size_t i = 0; i < moves.size(); ++i) {
    MatchState next = s;
    apply(next, moves[i]);
    o.values.push_back(oracle_best(next, seat, s.turn, eval, o.nodes));
    if (o.values[i] > o.values[o.best]) o.best = i;
  }
  return o;
}

struct MicroCase {
  MatchState state;
  Oracle oracle;
};

// Draws positions until `count` have an own-turn tree of at most `max_nodes`.
inline std::vector<MicroCase> micro_cases(Rng& rng, int count, const Evaluator& eval, std::size_t max_nodes = 20000) {
  std::vector<MicroCase> out;
  while (static_cast<int>(out.size()) < count) {
    MatchState s = micro_position(rng);
    // Cheap size probe before the full enumeration.
    try {
      policy::exhaustive_turn_search(s, legal_moves(s), eval.rooted(s, 0), max_nodes);
    } catch (const std::runtime_error&) {
      continue;
    }
    Oracle o = turn_oracle(s, eval.rooted(s, 0));
    out.push_back({std::move(s), std::move(o)});
  }
  return out;
}

}  // namespace tt
