#pragma once
// Shared fixtures: tiny card sets, hand-built positions and an independent
// invariant checker used by the fuzz tests and the acceptance binary.

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "tribute/agents.hpp"
#include "tribute/rules.hpp"

namespace tt {

using namespace tribute;
using json = nlohmann::json;

inline json leaf(const std::string& keyword, int amount) { return {{"keyword", keyword}, {"amount", amount}}; }
inline json both(json l, json r) { return {{"op", "AND"}, {"left", std::move(l)}, {"right", std::move(r)}}; }
inline json either(json l, json r) { return {{"op", "OR"}, {"left", std::move(l)}, {"right", std::move(r)}}; }

inline json card(const std::string& id, const std::string& deck, const std::string& kind, int cost, json effects,
                 int tier = 3, int copies = 0) {
  json c = {{"id", id}, {"name", id}, {"deck", deck}, {"kind", kind}, {"cost", cost}, {"tier", tier},
            {"copies", copies}, {"effects", std::move(effects)}};
  return c;
}

inline json agent(const std::string& id, const std::string& deck, int cost, int health, json effects,
                  bool taunt = false, bool contract = false, int tier = 3) {
  json c = card(id, deck, contract ? "contract_agent" : "agent", cost, std::move(effects), tier);
  c["health"] = health;
  if (taunt) c["taunt"] = true;
  return c;
}

// The cards every set needs, with no tavern copies: the three special
// Treasury cards and one starter per draftable deck.
inline json base_cards() {
  json cards = json::array();
  cards.push_back(card("gold", "Treasury", "starter", 0, {{"1", leaf("COIN", 1)}}, 5));
  cards.push_back(card("writ_of_coin", "Treasury", "action", 0, {{"1", leaf("COIN", 2)}}, 3));
  cards.push_back(card("bewilderment", "Treasury", "action", 0, json::object(), 5));
  for (const char* deck : {"Ansei", "Crows", "Hlaalu", "Pelin", "Rajhin", "RedEagle"})
    cards.push_back(card(std::string("starter_") + deck, deck, "starter", 0, {{"1", leaf("POWER", 1)}}, 5));
  return cards;
}

inline CardSetPtr make_set(const std::vector<json>& extra = {}) {
  json cards = base_cards();
  for (const auto& c : extra) cards.push_back(c);
  return load_card_set(json{{"version", 1}, {"cards", cards}}.dump());
}

inline constexpr std::array<PatronId, 4> kPatrons = {PatronId::Ansei, PatronId::Crows, PatronId::Hlaalu,
                                                     PatronId::Pelin};

// A turn-1 position with every zone emptied; tests place cards by hand.
inline MatchState blank(CardSetPtr cards, std::array<PatronId, 4> patrons = kPatrons, std::uint64_t seed = 7) {
  MatchState s = new_match(std::move(cards), patrons, seed);
  for (auto& p : s.players) {
    p.hand.clear();
    p.draw_pile.clear();
  }
  s.tavern.clear();
  s.tavern_pile.clear();
  s.next_uid = 0;
  return s;
}

// Creates a fresh instance of `id` at the end of `zone` and returns its uid.
inline Uid put(MatchState& s, std::vector<CardInstance>& zone, const std::string& id) {
  const CardId card = s.cards->require(id);
  CardInstance c{s.next_uid++, card, 0, false};
  if (s.spec(card).is_agent()) c.health = static_cast<std::int16_t>(s.spec(card).health);
  zone.push_back(c);
  return c.uid;
}

inline const CardInstance* find(const std::vector<CardInstance>& zone, Uid uid) {
  for (const auto& c : zone)
    if (c.uid == uid) return &c;
  return nullptr;
}

inline int count_tag(const EventLog& log, EventTag tag) {
  return static_cast<int>(std::count_if(log.begin(), log.end(), [tag](const Event& e) { return e.tag == tag; }));
}

inline std::vector<std::vector<CardInstance> const*> all_zones(const MatchState& s) {
  std::vector<std::vector<CardInstance> const*> zones;
  for (const auto& p : s.players)
    for (const auto* z : {&p.hand, &p.draw_pile, &p.cooldown, &p.played, &p.board}) zones.push_back(z);
  for (const auto* z : {&s.tavern, &s.tavern_pile, &s.removed}) zones.push_back(z);
  return zones;
}

// Returns an empty string when `after` is a sound successor of `before`
// under the events `log`, else a description of the first violation.
inline std::string check_step(const MatchState& before, const MatchState& after, const EventLog& log) {
  std::ostringstream err;
  // Zone conservation: every instance ever made sits in exactly one zone, and
  // new instances appear only through creation events.
  std::vector<int> seen(after.next_uid, 0);
  for (const auto* zone : all_zones(after))
    for (const auto& c : *zone) {
      if (c.uid >= after.next_uid) {
        err << "uid " << c.uid << " beyond next_uid";
        return err.str();
      }
      ++seen[c.uid];
    }
  for (std::size_t u = 0; u < seen.size(); ++u)
    if (seen[u] != 1) {
      err << "uid " << u << " found in " << seen[u] << " zones";
      return err.str();
    }
  const int created = count_tag(log, EventTag::Create);
  if (after.next_uid != before.next_uid + created) {
    err << "instance count changed by " << after.next_uid - before.next_uid << " with " << created << " creations";
    return err.str();
  }
  const int removed = count_tag(log, EventTag::Remove);
  if (after.removed.size() != before.removed.size() + static_cast<std::size_t>(removed)) {
    err << "removed zone grew without matching events";
    return err.str();
  }
  for (std::size_t i = 0; i < before.removed.size(); ++i)
    if (after.removed[i].uid != before.removed[i].uid) return "a removed card came back";

  if (!after.tavern_pile.empty() && after.tavern.size() != static_cast<std::size_t>(kTavernSize))
    return "tavern below five cards with a non-empty pile";
  if (after.tavern.size() > static_cast<std::size_t>(kTavernSize)) return "tavern above five cards";
  for (int seat = 0; seat < 2; ++seat) {
    const PlayerBoard& p = after.players[seat];
    if (p.board.size() > static_cast<std::size_t>(kMaxBoard)) return "board above seven agents";
    if (p.coins < 0 || p.power < 0 || p.prestige < 0 || p.patron_calls < 0) {
      err << "negative resource for seat " << seat << ": coins " << p.coins << " power " << p.power
          << " prestige " << p.prestige;
      return err.str();
    }
    for (const auto& c : p.board) {
      if (!after.spec(c).is_agent()) return "non-agent on the board";
      if (c.health <= 0 || c.health > after.spec(c).health) return "board agent health out of range";
    }
  }
  if (after.turn > kTurnLimit + 1) return "turn cap exceeded";
  if (after.turn > kTurnLimit && !after.outcome) return "turn 501 without an outcome";

  const auto legal = legal_moves(after);
  if (after.outcome) {
    if (!legal.empty()) return "moves offered after the game ended";
  } else {
    if (legal.empty()) return "no legal moves on a live state";
    if (after.choice) {
      for (const auto& m : legal)
        if (m.type != MoveType::MakeChoice) return "non-choice move offered while a choice is pending";
    } else if (std::find(legal.begin(), legal.end(), Move::end_turn()) == legal.end()) {
      return "END_TURN missing";
    }
  }
  return {};
}

}  // namespace tt
