#include "tribute/service.hpp"

namespace tribute::service {

json ServiceError::to_json() const {
  json j = {{"error", code_}, {"message", what()}};
  if (!details_.empty()) j["details"] = details_;
  return j;
}

namespace {

const CardInstance* locate(const MatchState& s, Uid uid) {
  auto scan = [uid](const std::vector<CardInstance>& zone) -> const CardInstance* {
    for (const auto& c : zone)
      if (c.uid == uid) return &c;
    return nullptr;
  };
  for (const auto& p : s.players)
    for (const auto* zone : {&p.hand, &p.draw_pile, &p.cooldown, &p.played, &p.board})
      if (const auto* c = scan(*zone)) return c;
  for (const auto* zone : {&s.tavern, &s.tavern_pile, &s.removed})
    if (const auto* c = scan(*zone)) return c;
  return nullptr;
}

json zone_json(const MatchState& s, const std::vector<CardInstance>& zone) {
  json out = json::array();
  for (const auto& c : zone) out.push_back(card_json(s, c));
  return out;
}

json effect_json(const Effect& e) {
  auto leaf = [](const EffectLeaf& l) { return json{{"keyword", to_string(l.keyword)}, {"amount", l.amount}}; };
  if (e.op == EffectOp::Single) return leaf(e.left);
  return json{{"op", e.op == EffectOp::And ? "AND" : "OR"}, {"left", leaf(e.left)}, {"right", leaf(e.right)}};
}

std::string favor_name(int favor) {
  if (favor == kNeutral) return "neutral";
  return std::to_string(favor);
}

const json& require(const json& j, const char* key) {
  if (!j.contains(key)) throw ServiceError(400, "bad_request", std::string("move: missing '") + key + "'");
  return j.at(key);
}

}  // namespace

json card_json(const MatchState& s, const CardInstance& c) {
  const CardSpec& sp = s.spec(c);
  json j = {{"uid", c.uid},   {"card", sp.id},   {"name", sp.name},          {"deck", to_string(sp.deck)},
            {"kind", to_string(sp.kind)}, {"cost", sp.cost}, {"tier", sp.tier}};
  if (sp.is_agent()) {
    j["max_health"] = sp.health;
    j["health"] = c.health;
    j["activated"] = c.activated;
    j["taunt"] = sp.taunt;
  }
  json effects = json::array();
  for (std::size_t i = 0; i < sp.effects.size(); ++i)
    if (sp.effects[i]) effects.push_back({{"combo", i + 1}, {"effect", effect_json(*sp.effects[i])}});
  j["effects"] = std::move(effects);
  return j;
}

json move_json(const MatchState& s, const Move& m) {
  json j = {{"type", to_string(m.type)}, {"text", to_string(m)}};
  switch (m.type) {
    case MoveType::ActivatePatron:
      j["patron"] = to_string(m.patron());
      break;
    case MoveType::EndTurn:
      break;
    case MoveType::MakeChoice: {
      json picks = json::array();
      for (int i = 0; i < m.pick_count; ++i) picks.push_back(m.picks[static_cast<std::size_t>(i)]);
      j["picks"] = std::move(picks);
      break;
    }
    default:
      j["uid"] = m.target;
      if (const CardInstance* c = locate(s, m.target)) j["card"] = s.spec(*c).id;
      break;
  }
  return j;
}

Move move_from_json(const json& j) {
  if (!j.is_object()) throw ServiceError(400, "bad_request", "move must be an object");
  const json& type = require(j, "type");
  if (!type.is_string()) throw ServiceError(400, "bad_request", "move: 'type' must be a string");
  auto t = parse_move_type(type.get<std::string>());
  if (!t) throw ServiceError(400, "bad_request", "move: unknown type '" + type.get<std::string>() + "'");
  Move m{*t};
  switch (*t) {
    case MoveType::EndTurn:
      break;
    case MoveType::ActivatePatron: {
      const json& p = require(j, "patron");
      auto id = p.is_string() ? parse_patron(p.get<std::string>()) : std::nullopt;
      if (!id) throw ServiceError(400, "bad_request", "move: unknown patron");
      m.target = static_cast<std::uint16_t>(*id);
      break;
    }
    case MoveType::MakeChoice: {
      const json& picks = require(j, "picks");
      if (!picks.is_array() || picks.size() > kMaxPicks)
        throw ServiceError(400, "bad_request", "move: 'picks' must be an array of at most 7 indices");
      for (const auto& p : picks) {
        if (!p.is_number_unsigned() || p.get<unsigned>() > 255)
          throw ServiceError(400, "bad_request", "move: pick indices must be small non-negative integers");
        m.picks[m.pick_count++] = static_cast<std::uint8_t>(p.get<unsigned>());
      }
      break;
    }
    default: {
      const json& uid = require(j, "uid");
      if (!uid.is_number_unsigned() || uid.get<std::uint64_t>() > 0xffff)
        throw ServiceError(400, "bad_request", "move: 'uid' must be a card uid");
      m.target = static_cast<std::uint16_t>(uid.get<unsigned>());
      break;
    }
  }
  return m;
}

json event_json(const Event& e, const CardSet& cards) {
  json j = {{"tag", to_string(e.tag)}, {"seat", e.seat}, {"turn", e.turn}, {"text", format_event(e, cards)}};
  if (e.card != kNoCard) {
    j["card"] = cards[e.card].id;
    j["uid"] = e.uid;
  }
  return j;
}

json state_json(const MatchState& s) {
  json players = json::array();
  for (const auto& p : s.players) {
    players.push_back({{"coins", p.coins},
                       {"power", p.power},
                       {"prestige", p.prestige},
                       {"patron_calls", p.patron_calls},
                       {"discard_owed", p.discard_owed},
                       {"hand", zone_json(s, p.hand)},
                       {"draw_pile", zone_json(s, p.draw_pile)},
                       {"cooldown", zone_json(s, p.cooldown)},
                       {"played", zone_json(s, p.played)},
                       {"board", zone_json(s, p.board)}});
  }
  json patrons = json::array();
  for (const auto& p : s.patrons) patrons.push_back({{"patron", to_string(p.patron)}, {"favor", favor_name(p.favor)}});

  json j = {{"turn", s.turn},
            {"current", s.current},
            {"players", std::move(players)},
            {"patrons", std::move(patrons)},
            {"tavern", zone_json(s, s.tavern)},
            {"tavern_pile", zone_json(s, s.tavern_pile)},
            {"removed_count", s.removed.size()},
            {"sudden_death", s.mode == EndgameMode::SuddenDeath},
            {"leader", s.leader}};
  if (s.choice) {
    const PendingChoice& c = *s.choice;
    json options = json::array();
    for (std::size_t i = 0; i < c.options.size(); ++i) {
      if (c.kind == ChoiceKind::EffectBranch) {
        options.push_back({{"index", i}, {"effect", effect_json(Effect{EffectOp::Single, i ? c.effect.right : c.effect.left, {}})}});
      } else {
        json o = {{"index", i}, {"uid", c.options[i]}};
        if (const CardInstance* card = locate(s, c.options[i])) o["card"] = card_json(s, *card);
        options.push_back(std::move(o));
      }
    }
    j["choice"] = {{"kind", to_string(c.kind)}, {"seat", c.seat},         {"min_picks", c.min_picks},
                   {"max_picks", c.max_picks}, {"ordered", c.ordered},   {"source", c.source},
                   {"options", std::move(options)}};
  } else {
    j["choice"] = nullptr;
  }
  if (s.outcome)
    j["outcome"] = {{"winner", s.outcome->winner}, {"reason", to_string(s.outcome->reason)}};
  else
    j["outcome"] = nullptr;
  return j;
}

}  // namespace tribute::service
