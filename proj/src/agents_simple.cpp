#include <algorithm>
#include <tuple>

#include "agent_util.hpp"

namespace tribute {

namespace {

using detail::find_in;

class RandomAgent final : public Agent {
 public:
  std::string name() const override { return "random"; }
  Move play(const PlayerView&, std::span<const Move> legal, Duration) override {
    return policy::random_move(legal, rng());
  }
};

class UniformRandomAgent final : public Agent {
 public:
  std::string name() const override { return "uniform-random"; }
  Move play(const PlayerView&, std::span<const Move> legal, Duration) override {
    return legal[static_cast<std::size_t>(rng().below(legal.size()))];
  }
};

// Tries every path of up to two moves and keeps the first move of the path
// with the most prestige + power. Heuristic value breaks ties, then chance.
class MaxPrestigeAgent final : public Agent {
 public:
  explicit MaxPrestigeAgent(const AgentOptions& o) : eval_{o.weights, o.tiers, std::nullopt} {}
  std::string name() const override { return "max-prestige"; }

  // Crows and Hlaalu turn coins and cards straight into power and prestige.
  PatronId select_patron(std::span<const PatronId> available, int round) override {
    for (PatronId p : {PatronId::Crows, PatronId::Hlaalu})
      if (std::find(available.begin(), available.end(), p) != available.end()) return p;
    return Agent::select_patron(available, round);
  }

  Move play(const PlayerView& view, std::span<const Move> legal, Duration) override {
    if (legal.size() == 1) return legal.front();
    const SeededGameState root = seed_view(view, next_seed());
    const int me = view.seat;
    const int turn = root.state().turn;
    const Evaluator eval = eval_.rooted(root.state(), me);
    auto over = [&](const MatchState& s) { return s.finished() || s.turn != turn || s.current != me; };
    // Ties on prestige + power go to playing cards, then buying, then the heuristic.
    auto rank = [](const Move& m) {
      if (m.type == MoveType::PlayCard || m.type == MoveType::ActivateAgent) return 2;
      return m.type == MoveType::BuyCard ? 1 : 0;
    };
    using Key = std::tuple<double, int, double>;
    constexpr double kNone = -std::numeric_limits<double>::infinity();
    auto score = [&](const MatchState& s, int r) {
      const auto& p = s.players[static_cast<std::size_t>(me)];
      return Key(p.prestige + p.power, r, eval(s, me));
    };

    std::vector<MatchState> after(legal.size(), root.state());
    for (std::size_t i = 0; i < legal.size(); ++i) {
      apply(after[i], legal[i]);
      if (detail::won(after[i], me)) return legal[i];
    }
    std::vector<std::size_t> best;
    Key best_key{kNone, 0, kNone};
    std::vector<Move> second;
    std::optional<std::size_t> end_index;
    Key end_key{};
    for (std::size_t i = 0; i < legal.size(); ++i) {
      const MatchState& s1 = after[i];
      if (legal[i].type == MoveType::EndTurn) {
        end_index = i;
        end_key = s1.finished() ? Key{kNone, -1, 0.0} : score(s1, -1);
        continue;
      }
      const int r = rank(legal[i]);
      Key key = s1.finished() ? Key{kNone, r, eval(s1, me)} : score(s1, r);
      if (!over(s1)) {
        legal_moves(s1, second);
        for (const auto& m2 : policy::distinct_moves(s1, second)) {
          MatchState s2 = s1;
          apply(s2, m2);
          if (detail::won(s2, me)) return legal[i];
          if (s2.finished()) continue;
          key = std::max(key, score(s2, r));
        }
      }
      if (best.empty() || key > best_key) {
        best.assign(1, i);
        best_key = key;
      } else if (key == best_key) {
        best.push_back(i);
      }
    }
    if (best.empty()) return legal.back();  // only END_TURN remains
    // End the turn only when it beats every other path outright.
    if (end_index && end_key > best_key) return legal[*end_index];
    return legal[best[static_cast<std::size_t>(rng().below(best.size()))]];
  }

 private:
  Evaluator eval_;
};

// Chases patron activations that move favor its way.
class PatronFavorsAgent final : public Agent {
 public:
  std::string name() const override { return "patron-favors"; }

  Move play(const PlayerView& view, std::span<const Move> legal, Duration) override {
    if (legal.size() == 1 || view.state.choice) return policy::random_move(legal, rng());
    const int me = view.seat;
    auto wanted = [&](const MatchState& s, const Move& m) {
      if (m.type != MoveType::ActivatePatron || m.patron() == PatronId::Treasury) return false;
      for (const auto& p : s.patrons)
        if (p.patron == m.patron()) return p.favor != me;
      return false;
    };

    std::vector<Move> direct;
    for (const auto& m : legal)
      if (wanted(view.state, m)) direct.push_back(m);
    if (!direct.empty()) return direct[static_cast<std::size_t>(rng().below(direct.size()))];

    // One step ahead: moves after which such an activation becomes legal.
    const SeededGameState root = seed_view(view, next_seed());
    std::vector<Move> enabling, next;
    for (const auto& m : legal) {
      if (m.type == MoveType::EndTurn) continue;
      MatchState s = root.state();
      apply(s, m);
      if (s.finished() || s.current != me) continue;
      legal_moves(s, next);
      if (std::any_of(next.begin(), next.end(), [&](const Move& n) { return wanted(s, n); })) enabling.push_back(m);
    }
    if (!enabling.empty()) return enabling[static_cast<std::size_t>(rng().below(enabling.size()))];
    return policy::random_move(legal, rng());
  }
};

// Plays out its hand and agents first, then buys the best agent it can.
class MaxAgentAgent final : public Agent {
 public:
  explicit MaxAgentAgent(const AgentOptions& o) : tier_list_(o.tiers) {}
  std::string name() const override { return "max-agent"; }

  Move play(const PlayerView& view, std::span<const Move> legal, Duration) override {
    if (legal.size() == 1 || view.state.choice) return policy::random_move(legal, rng());
    std::vector<Move> use;
    for (const auto& m : legal)
      if (m.type == MoveType::PlayCard || m.type == MoveType::ActivateAgent) use.push_back(m);
    if (!use.empty()) return use[static_cast<std::size_t>(rng().below(use.size()))];

    const detail::Tiers tier{view.state.cards.get(), tier_list_ ? &*tier_list_ : nullptr};
    for (CardKind kind : {CardKind::Agent, CardKind::ContractAgent}) {
      const Move* pick = nullptr;
      int pick_tier = 99;
      for (const auto& m : legal) {
        if (m.type != MoveType::BuyCard) continue;
        const CardInstance* c = find_in(view.state.tavern, m.target);
        if (!c || view.state.spec(*c).kind != kind) continue;
        if (tier(c->card) < pick_tier) {
          pick = &m;
          pick_tier = tier(c->card);
        }
      }
      if (pick) return *pick;
    }
    return policy::random_move(legal, rng());
  }

 private:
  std::optional<TierList> tier_list_;
};

}  // namespace

AgentPtr make_random_agent() { return std::make_unique<RandomAgent>(); }
AgentPtr make_uniform_random_agent() { return std::make_unique<UniformRandomAgent>(); }
AgentPtr make_max_prestige_agent(const AgentOptions& options) { return std::make_unique<MaxPrestigeAgent>(options); }
AgentPtr make_patron_favors_agent() { return std::make_unique<PatronFavorsAgent>(); }
AgentPtr make_max_agent_agent(const AgentOptions& options) { return std::make_unique<MaxAgentAgent>(options); }

}  // namespace tribute
