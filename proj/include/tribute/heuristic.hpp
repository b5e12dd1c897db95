#pragma once

#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tribute/cards.hpp"
#include "tribute/state.hpp"

namespace tribute {

inline constexpr double kWinScore = std::numeric_limits<double>::infinity();
inline constexpr double kLossScore = -std::numeric_limits<double>::infinity();

// Card id -> tier (1 best .. 5 worst). Defaults to the tiers printed in the card set.
class TierList {
 public:
  TierList() = default;
  explicit TierList(const CardSet& cards);

  int tier(CardId id) const { return tiers_[id]; }
  void set(CardId id, int tier) { tiers_[id] = tier; }
  std::size_t size() const { return tiers_.size(); }

  // JSON object {card_id: tier}; unknown ids and tiers outside 1..5 are rejected.
  static TierList load(const CardSet& cards, std::string_view json_overrides);

 private:
  std::vector<int> tiers_;
};

/// Feature weights for heuristic_evaluate. Field names double as the keys of
/// the weight config document.
struct WeightSet {
  double prestige = 1.0;
  double power = 1.0;
  double coins = 0.0;
  double opponent_prestige = -1.0;
  double favor = 0.0;
  double own_agent_tier = 0.0;
  double opponent_agent_tier = 0.0;
  double deck_tier = 0.0;
  double deck_concentration = 0.0;
  double tavern_high_tier = 0.0;
  double tavern_opponent_synergy = 0.0;

  static WeightSet zero();
  // The hand-tuned set shipped in data/weights.json.
  static const WeightSet& defaults();
  // Key-value JSON object; unknown keys are rejected.
  static WeightSet parse(std::string_view json_text);
  std::string to_json() const;
};

// Below this own-prestige the deck-building features are included.
inline constexpr int kEarlyGamePrestige = 30;

// gate_prestige, when given, replaces the state's own prestige in the
// early-game test.
double heuristic_evaluate(const MatchState& state, int seat, const WeightSet& weights, const TierList& tiers,
                          std::optional<int> gate_prestige = std::nullopt);
double heuristic_evaluate(const MatchState& state, int seat, const WeightSet& weights,
                          std::optional<int> gate_prestige = std::nullopt);

// Weights plus optional tier overrides, bound into one scoring function.
struct Evaluator {
  WeightSet weights = WeightSet::defaults();
  std::optional<TierList> tiers;
  std::optional<int> gate_prestige;

  double operator()(const MatchState& state, int seat) const {
    return tiers ? heuristic_evaluate(state, seat, weights, *tiers, gate_prestige)
                 : heuristic_evaluate(state, seat, weights, gate_prestige);
  }
  // Same scorer with the early-game test fixed by `seat`'s prestige in
  // `root`, so every state of one turn's search is scored on the same features.
  Evaluator rooted(const MatchState& root, int seat) const;
};

std::string_view default_weights_json();

}  // namespace tribute
