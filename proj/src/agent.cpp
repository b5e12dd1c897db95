#include "tribute/agent.hpp"

#include <algorithm>

namespace tribute {

void Agent::begin_match(const MatchContext& ctx) {
  cards_ = ctx.cards;
  seat_ = ctx.seat;
  rng_.reseed(ctx.seed);
  log_sink_ = ctx.log_sink;
  on_match_start();
}

PatronId Agent::select_patron(std::span<const PatronId> available, int /*pick_round*/) {
  return available[static_cast<std::size_t>(rng_.below(available.size()))];
}

void Agent::log(std::string_view text) const {
  if (log_sink_) log_sink_(text);
}

std::array<PatronId, 4> draft_patrons(Agent& first, Agent& second) {
  std::vector<PatronId> pool(kDraftablePatrons.begin(), kDraftablePatrons.end());
  std::array<PatronId, 4> picks{};
  const std::array<int, 4> order = {0, 1, 1, 0};
  std::array<int, 2> rounds = {0, 0};
  for (std::size_t i = 0; i < order.size(); ++i) {
    const int seat = order[i];
    Agent& agent = seat == 0 ? first : second;
    const int round = ++rounds[static_cast<std::size_t>(seat)];
    const PatronId pick = agent.select_patron(pool, round);
    auto it = std::find(pool.begin(), pool.end(), pick);
    if (it == pool.end())
      throw DraftError(seat, "seat " + std::to_string(seat) + " picked unavailable patron " +
                                 std::string(to_string(pick)));
    pool.erase(it);
    picks[i] = pick;
  }
  return picks;
}

std::pair<SeededGameState, EventLog> simulate(const SeededGameState& seeded, const Move& move) {
  return seeded.simulate(move);
}

}  // namespace tribute
