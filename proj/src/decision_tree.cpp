#include <algorithm>
#include <numeric>

#include "agent_util.hpp"

namespace tribute {

namespace {

using detail::find_card;
using detail::find_in;

// Fixed determinisation seed: the policy is a pure function of the view.
constexpr std::uint64_t kTreeSeed = 0x7472656553656564ull;

class DecisionTreeAgent final : public Agent {
 public:
  explicit DecisionTreeAgent(const AgentOptions& o) : eval_{o.weights, o.tiers, std::nullopt} {}
  std::string name() const override { return "decision-tree"; }

  Move play(const PlayerView& view, std::span<const Move> legal, Duration) override {
    if (legal.size() == 1) return legal.front();
    tier_ = detail::Tiers{view.state.cards.get(), eval_.tiers ? &*eval_.tiers : nullptr};
    if (view.state.choice) return choose(view, legal);

    const MatchState& s = view.state;
    const int me = view.seat;

    // Patron win.
    for (const auto& m : legal) {
      if (m.type != MoveType::ActivatePatron) continue;
      if (detail::won(simulate_once(view, m), me)) return m;
    }
    // Block an opponent one activation from winning on favor.
    if (s.favor_count(1 - me) >= 3) {
      for (const auto& m : legal)
        if (m.type == MoveType::ActivatePatron && favor_of(s, m.patron()) == 1 - me) return m;
    }
    // Treasury cards first, then the rest of the hand, then agents.
    for (const auto& m : legal)
      if (m.type == MoveType::PlayCard && spec(s, m.target).deck == PatronId::Treasury) return m;
    for (const auto& m : legal)
      if (m.type == MoveType::PlayCard) return m;
    for (const auto& m : legal)
      if (m.type == MoveType::ActivateAgent) return m;

    // Attacks: taunts must go first; then agents we can finish, best first;
    // then chip at the best agent left.
    const int power = s.players[static_cast<std::size_t>(me)].power;
    const Move* attack = nullptr;
    double attack_score = -1;
    for (const auto& m : legal) {
      if (m.type != MoveType::AttackAgent) continue;
      const CardInstance* target = find_in(s.players[static_cast<std::size_t>(1 - me)].board, m.target);
      if (!target) continue;
      const CardSpec& sp = s.spec(*target);
      const double score = (sp.taunt ? 100.0 : 0.0) + (power >= target->health ? 10.0 : 0.0) + card_value(s, target->card);
      if (score > attack_score) {
        attack = &m;
        attack_score = score;
      }
    }
    if (attack) return *attack;

    // Purchases by tier and affinity with decks already owned.
    const Move* buy = nullptr;
    double buy_score = 0;
    for (const auto& m : legal) {
      if (m.type != MoveType::BuyCard) continue;
      const CardInstance* c = find_in(s.tavern, m.target);
      if (!c) continue;
      const double score = buy_value(s, me, *c);
      if (score > buy_score) {
        buy = &m;
        buy_score = score;
      }
    }
    if (buy) return *buy;

    // Spend leftovers pulling favor our way.
    for (const auto& m : legal) {
      if (m.type != MoveType::ActivatePatron || m.patron() == PatronId::Treasury) continue;
      if (favor_of(s, m.patron()) != me) return m;
    }
    for (const auto& m : legal)
      if (m.type == MoveType::EndTurn) return m;
    return legal.front();
  }

 private:
  static const CardSpec& spec(const MatchState& s, Uid uid) {
    const CardInstance* c = find_card(s, uid);
    return s.spec(*c);
  }

  static int favor_of(const MatchState& s, PatronId p) {
    for (const auto& ps : s.patrons)
      if (ps.patron == p) return ps.favor;
    return kNeutral;
  }

  MatchState simulate_once(const PlayerView& view, const Move& m) const {
    MatchState s = seed_view(view, kTreeSeed).state();
    apply(s, m);
    return s;
  }

  // Goodness of owning a card: higher is better, starters near zero.
  double card_value(const MatchState& s, CardId id) const {
    const CardSpec& sp = s.spec(id);
    if (sp.kind == CardKind::Starter) return 0.0;
    return 6.0 - tier_(id);
  }

  double buy_value(const MatchState& s, int me, const CardInstance& c) const {
    const CardSpec& sp = s.spec(c);
    int owned = 0;
    const auto& p = s.players[static_cast<std::size_t>(me)];
    for (const auto* zone : {&p.hand, &p.draw_pile, &p.cooldown, &p.played, &p.board})
      for (const auto& x : *zone) {
        const CardSpec& xs = s.spec(x);
        owned += xs.deck == sp.deck && xs.kind != CardKind::Starter && sp.deck != PatronId::Treasury;
      }
    double v = 2.0 * card_value(s, c.card) + 0.5 * owned;
    // Agents keep paying out from the board; contracts pay in full at once.
    // Plain actions only cycle back through the deck.
    if (sp.is_agent())
      v += 4.0;
    else if (sp.is_contract())
      v += 3.0;
    return v;
  }

  Move choose(const PlayerView& view, std::span<const Move> legal) const {
    const MatchState& s = view.state;
    const PendingChoice& ch = *s.choice;
    if (ch.kind == ChoiceKind::EffectBranch) {
      std::size_t best = 0;
      double best_value = -std::numeric_limits<double>::infinity();
      const Evaluator eval = eval_.rooted(s, view.seat);
      for (std::size_t i = 0; i < legal.size(); ++i) {
        const double v = eval(simulate_once(view, legal[i]), view.seat);
        if (i == 0 || v > best_value) {
          best = i;
          best_value = v;
        }
      }
      return legal[best];
    }

    std::vector<int> order(ch.options.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> value(ch.options.size());
    std::vector<int> cost(ch.options.size());
    for (std::size_t i = 0; i < ch.options.size(); ++i) {
      const CardInstance* c = find_card(s, ch.options[i]);
      value[i] = c ? card_value(s, c->card) : 0.0;
      cost[i] = c ? s.spec(*c).cost : 0;
    }

    bool want_good = false;
    int count = ch.min_picks;
    switch (ch.kind) {
      case ChoiceKind::Acquire:
      case ChoiceKind::Return:
      case ChoiceKind::PelinReturn:
      case ChoiceKind::Knockout:
        want_good = true;
        count = ch.max_picks;
        break;
      case ChoiceKind::Destroy:
      case ChoiceKind::Replace: {
        // Only cards that are not worth keeping.
        int bad = 0;
        for (double v : value) bad += v <= 2.0;
        count = std::clamp(bad, ch.min_picks, ch.max_picks);
        break;
      }
      default:
        break;
    }
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      if (value[a] != value[b]) return want_good ? value[a] > value[b] : value[a] < value[b];
      // Hlaalu pays by cost: sacrifice the dearest of equally poor cards.
      if (ch.kind == ChoiceKind::HlaaluSacrifice || want_good) return cost[a] > cost[b];
      return cost[a] < cost[b];
    });
    Move m{MoveType::MakeChoice};
    m.pick_count = static_cast<std::uint8_t>(count);
    for (int i = 0; i < count; ++i) m.picks[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(order[i]);
    if (detail::is_member(legal, m) || is_legal(s, m)) {
      for (const auto& x : legal)
        if (x == m) return x;
      // Unordered choices accept any order; return the canonical legal form.
      std::vector<int> sorted(order.begin(), order.begin() + count);
      std::sort(sorted.begin(), sorted.end());
      for (int i = 0; i < count; ++i) m.picks[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(sorted[i]);
      for (const auto& x : legal)
        if (x == m) return x;
    }
    return legal.front();
  }

  Evaluator eval_;
  detail::Tiers tier_;
};

}  // namespace

AgentPtr make_decision_tree_agent(const AgentOptions& options) {
  return std::make_unique<DecisionTreeAgent>(options);
}

}  // namespace tribute
