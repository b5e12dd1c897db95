#include "tribute/heuristic.hpp"

#include <array>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace tribute {

namespace {

using nlohmann::json;

struct Field {
  const char* key;
  double WeightSet::*member;
};

constexpr std::array<Field, 11> kFields = {{
    {"prestige", &WeightSet::prestige},
    {"power", &WeightSet::power},
    {"coins", &WeightSet::coins},
    {"opponent_prestige", &WeightSet::opponent_prestige},
    {"favor", &WeightSet::favor},
    {"own_agent_tier", &WeightSet::own_agent_tier},
    {"opponent_agent_tier", &WeightSet::opponent_agent_tier},
    {"deck_tier", &WeightSet::deck_tier},
    {"deck_concentration", &WeightSet::deck_concentration},
    {"tavern_high_tier", &WeightSet::tavern_high_tier},
    {"tavern_opponent_synergy", &WeightSet::tavern_opponent_synergy},
}};

template <typename TierOf>
double evaluate(const MatchState& s, int seat, const WeightSet& w, TierOf tier_of, std::optional<int> gate) {
  if (s.outcome) {
    if (s.outcome->winner == kDraw) return 0.0;
    return s.outcome->winner == seat ? kWinScore : kLossScore;
  }
  const PlayerBoard& me = s.players[static_cast<std::size_t>(seat)];
  const PlayerBoard& opp = s.players[static_cast<std::size_t>(1 - seat)];

  int favor = 0;
  for (const auto& p : s.patrons) {
    if (p.favor == seat)
      ++favor;
    else if (p.favor == 1 - seat)
      --favor;
  }
  double score = w.prestige * me.prestige + w.power * me.power + w.coins * me.coins +
                 w.opponent_prestige * opp.prestige + w.favor * favor;
  if (gate.value_or(me.prestige) >= kEarlyGamePrestige) return score;

  const CardSet& set = *s.cards;
  double own_agents = 0, opp_agents = 0;
  for (const auto& c : me.board) own_agents += 6 - tier_of(c.card);
  for (const auto& c : opp.board) opp_agents += 6 - tier_of(c.card);

  // Same-deck pairs among owned non-starter patron cards.
  auto deck_counts = [&](const PlayerBoard& p, double* tier_sum) {
    std::array<int, kPatronIdCount> counts{};
    for (const auto* zone : {&p.hand, &p.draw_pile, &p.cooldown, &p.played, &p.board}) {
      for (const auto& c : *zone) {
        const CardSpec& spec = set[c.card];
        if (tier_sum) *tier_sum += 4 - tier_of(c.card);
        if (spec.kind != CardKind::Starter && spec.deck != PatronId::Treasury)
          ++counts[static_cast<std::size_t>(spec.deck)];
      }
    }
    return counts;
  };
  double deck_tier = 0;
  const auto mine = deck_counts(me, &deck_tier);
  const auto theirs = deck_counts(opp, nullptr);
  double concentration = 0;
  for (int n : mine) concentration += n * (n - 1) / 2.0;

  double tavern_high = 0, tavern_synergy = 0;
  for (const auto& c : s.tavern) {
    const int t = tier_of(c.card);
    if (t < 3) tavern_high += 3 - t;
    const CardSpec& spec = set[c.card];
    if (spec.deck != PatronId::Treasury) tavern_synergy += theirs[static_cast<std::size_t>(spec.deck)];
  }

  score += w.own_agent_tier * own_agents + w.opponent_agent_tier * opp_agents + w.deck_tier * deck_tier +
           w.deck_concentration * concentration + w.tavern_high_tier * tavern_high +
           w.tavern_opponent_synergy * tavern_synergy;
  return score;
}

}  // namespace

TierList::TierList(const CardSet& cards) {
  tiers_.reserve(cards.size());
  for (const auto& c : cards.cards()) tiers_.push_back(c.tier);
}

TierList TierList::load(const CardSet& cards, std::string_view json_overrides) {
  TierList list(cards);
  json doc = json::parse(json_overrides);
  if (!doc.is_object()) throw std::invalid_argument("tier list must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    auto id = cards.find(key);
    if (!id) throw std::invalid_argument("tier list: unknown card '" + key + "'");
    if (!value.is_number_integer() || value.get<int>() < 1 || value.get<int>() > 5)
      throw std::invalid_argument("tier list: tier for '" + key + "' must be in 1..5");
    list.set(*id, value.get<int>());
  }
  return list;
}

WeightSet WeightSet::zero() {
  WeightSet w;
  for (const auto& f : kFields) w.*(f.member) = 0.0;
  return w;
}

const WeightSet& WeightSet::defaults() {
  static const WeightSet w = parse(default_weights_json());
  return w;
}

WeightSet WeightSet::parse(std::string_view json_text) {
  json doc = json::parse(json_text);
  if (!doc.is_object()) throw std::invalid_argument("weights must be a JSON object");
  WeightSet w = zero();
  for (const auto& [key, value] : doc.items()) {
    const Field* field = nullptr;
    for (const auto& f : kFields)
      if (key == f.key) field = &f;
    if (!field) throw std::invalid_argument("unknown weight '" + key + "'");
    if (!value.is_number()) throw std::invalid_argument("weight '" + key + "' must be a number");
    w.*(field->member) = value.get<double>();
  }
  return w;
}

std::string WeightSet::to_json() const {
  json doc = json::object();
  for (const auto& f : kFields) doc[f.key] = this->*(f.member);
  return doc.dump(2);
}

double heuristic_evaluate(const MatchState& state, int seat, const WeightSet& weights, const TierList& tiers,
                          std::optional<int> gate_prestige) {
  return evaluate(state, seat, weights, [&](CardId id) { return tiers.tier(id); }, gate_prestige);
}

double heuristic_evaluate(const MatchState& state, int seat, const WeightSet& weights,
                          std::optional<int> gate_prestige) {
  const CardSet& set = *state.cards;
  return evaluate(state, seat, weights, [&](CardId id) { return set[id].tier; }, gate_prestige);
}

Evaluator Evaluator::rooted(const MatchState& root, int seat) const {
  Evaluator e = *this;
  e.gate_prestige = root.players[static_cast<std::size_t>(seat)].prestige;
  return e;
}

}  // namespace tribute
