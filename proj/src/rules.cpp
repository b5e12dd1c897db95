#include "tribute/rules.hpp"

#include <algorithm>
#include <string>

namespace tribute {

namespace {

int other(int seat) { return 1 - seat; }

constexpr int kChoicePickBit = 0x80;

template <typename Pred>
std::optional<std::size_t> index_where(const std::vector<CardInstance>& zone, Pred pred) {
  for (std::size_t i = 0; i < zone.size(); ++i)
    if (pred(zone[i])) return i;
  return std::nullopt;
}

std::optional<std::size_t> index_of(const std::vector<CardInstance>& zone, Uid uid) {
  return index_where(zone, [uid](const CardInstance& c) { return c.uid == uid; });
}

CardInstance take(std::vector<CardInstance>& zone, std::size_t index) {
  CardInstance c = zone[index];
  zone.erase(zone.begin() + static_cast<std::ptrdiff_t>(index));
  return c;
}

PatronState* find_patron(MatchState& s, PatronId p) {
  for (auto& ps : s.patrons)
    if (ps.patron == p) return &ps;
  return nullptr;
}

const PatronState* find_patron(const MatchState& s, PatronId p) {
  for (const auto& ps : s.patrons)
    if (ps.patron == p) return &ps;
  return nullptr;
}

// Applies rule procedures to one state, collecting events and step flags.
class Resolver {
 public:
  Resolver(MatchState& s, EventLog* log) : s_(s), log_(log) {}

  StepFlags flags() const { return flags_; }

  void emit(EventTag tag, int seat, CardId card = kNoCard, Uid uid = 0, int amount = 0,
            int detail = 0) {
    if (!log_) return;
    log_->push_back(Event{tag, static_cast<std::uint8_t>(seat), static_cast<std::uint16_t>(s_.turn),
                          card, uid, static_cast<std::int16_t>(amount),
                          static_cast<std::uint8_t>(detail)});
  }

  void finish(int winner, EndReason reason) {
    if (s_.outcome) return;
    s_.outcome = Outcome{winner, reason};
    s_.mode = EndgameMode::Finished;
    flags_ |= kStepGameOver;
    emit(EventTag::GameEnd, winner == kDraw ? 2 : winner, kNoCard, 0, 0, static_cast<int>(reason));
  }

  // -- zone helpers ---------------------------------------------------------

  void draw(int seat, int count) {
    PlayerBoard& p = s_.players[seat];
    for (int i = 0; i < count; ++i) {
      if (p.draw_pile.empty()) {
        if (p.cooldown.empty()) return;
        p.draw_pile.swap(p.cooldown);
        s_.rng.shuffle(std::span(p.draw_pile));
        flags_ |= kStepShuffled;
        emit(EventTag::Shuffle, seat, kNoCard, 0, static_cast<int>(p.draw_pile.size()));
      }
      CardInstance c = p.draw_pile.back();
      p.draw_pile.pop_back();
      p.hand.push_back(c);
      flags_ |= kStepDrew;
      emit(EventTag::Draw, seat, c.card, c.uid);
    }
  }

  void refill_tavern(std::size_t slot) {
    if (s_.tavern_pile.empty()) {
      s_.tavern.erase(s_.tavern.begin() + static_cast<std::ptrdiff_t>(slot));
      return;
    }
    s_.tavern[slot] = s_.tavern_pile.back();
    s_.tavern_pile.pop_back();
    flags_ |= kStepTavernRevealed;
  }

  CardInstance create(CardId card) {
    CardInstance c{s_.next_uid++, card, 0, false};
    return c;
  }

  void defeat(int owner, std::size_t board_index) {
    PlayerBoard& p = s_.players[owner];
    CardInstance c = take(p.board, board_index);
    emit(EventTag::Defeat, owner, c.card, c.uid);
    c.health = 0;
    c.activated = false;
    if (s_.spec(c).is_contract()) {
      emit(EventTag::Remove, owner, c.card, c.uid);
      s_.removed.push_back(c);
    } else {
      p.cooldown.push_back(c);
    }
  }

  void damage_agent(int owner, std::size_t board_index, int amount) {
    PlayerBoard& attacker = s_.players[other(owner)];
    CardInstance& target = s_.players[owner].board[board_index];
    const int dealt = std::min<int>(amount, target.health);
    attacker.power -= dealt;
    target.health = static_cast<std::int16_t>(target.health - dealt);
    emit(EventTag::Attack, other(owner), target.card, target.uid, dealt);
    if (target.health <= 0) defeat(owner, board_index);
  }

  // Puts an agent on the board (or, when full, into the played pile) and uses it.
  void summon_or_play(CardInstance c) {
    PlayerBoard& me = s_.me();
    const CardSpec& spec = s_.spec(c);
    if (spec.is_agent() && static_cast<int>(me.board.size()) < kMaxBoard) {
      c.health = static_cast<std::int16_t>(spec.health);
      c.activated = true;
      me.board.push_back(c);
    } else {
      me.played.push_back(c);
    }
    trigger_combo(c);
  }

  // Buy routing, shared by BUY_CARD and ACQUIRE.
  void route_acquired(CardInstance c) {
    const CardSpec& spec = s_.spec(c);
    switch (spec.kind) {
      case CardKind::ContractAction:
        s_.me().played.push_back(c);
        trigger_combo(c);
        break;
      case CardKind::ContractAgent:
        summon_or_play(c);
        break;
      default:
        s_.me().cooldown.push_back(c);
        break;
    }
  }

  // -- combos and effects ---------------------------------------------------

  void trigger_combo(const CardInstance& used) {
    const CardSpec& spec = s_.spec(used);
    auto& counter = s_.combo[static_cast<int>(spec.deck)];
    if (counter < 255) ++counter;
    const int level = counter;
    for (int l = 1; l <= std::min(level, kMaxComboLevel); ++l) {
      if (const auto& e = spec.effects[l - 1]) {
        if (l > 1) emit(EventTag::Combo, s_.current, used.card, used.uid, 0, l);
        s_.effect_queue.push_back({*e, used.uid});
      }
    }
    if (level <= kMaxComboLevel) {
      for (const UsedCard& prev : s_.used_this_turn) {
        const CardSpec& ps = s_.spec(prev.card);
        if (ps.deck != spec.deck) continue;
        if (const auto& e = ps.effects[level - 1]) {
          emit(EventTag::Combo, s_.current, prev.card, prev.uid, 0, level);
          s_.effect_queue.push_back({*e, prev.uid});
        }
      }
    }
    s_.used_this_turn.push_back({used.uid, used.card});
  }

  void open_choice(PendingChoice choice) {
    // A choice with exactly one possible selection resolves itself.
    const int n = static_cast<int>(choice.options.size());
    const bool forced = choice.min_picks == n && choice.max_picks == n && (!choice.ordered || n == 1);
    emit(EventTag::Choice, choice.seat, kNoCard, choice.source, n, static_cast<int>(choice.kind));
    if (forced) {
      std::vector<int> picks(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) picks[static_cast<std::size_t>(i)] = i;
      resolve_choice(choice, picks);
      return;
    }
    flags_ |= kStepChoiceOpened;
    s_.choice = std::move(choice);
  }

  PendingChoice card_choice(ChoiceKind kind, std::vector<Uid> options, int min_picks, int max_picks,
                            Uid source) {
    PendingChoice c;
    c.kind = kind;
    c.seat = s_.current;
    c.options = std::move(options);
    c.min_picks = min_picks;
    c.max_picks = max_picks;
    c.source = source;
    return c;
  }

  void keyword_effect(Keyword kw, int amount, Uid source) {
    PlayerBoard& me = s_.me();
    PlayerBoard& opp = s_.opponent();
    const int seat = s_.current;
    emit(EventTag::Effect, seat, kNoCard, source, amount, static_cast<int>(kw));
    switch (kw) {
      case Keyword::Coin:
        me.coins += amount;
        break;
      case Keyword::Power:
        me.power += amount;
        break;
      case Keyword::OppLosePrestige:
        opp.prestige = std::max(0, opp.prestige - amount);
        break;
      case Keyword::Draw:
        draw(seat, amount);
        break;
      case Keyword::Patron:
        me.patron_calls += amount;
        break;
      case Keyword::Discard:
        opp.discard_owed += amount;
        break;
      case Keyword::Heal: {
        auto idx = index_of(me.board, source);
        if (idx) {
          CardInstance& agent = me.board[*idx];
          agent.health = static_cast<std::int16_t>(
              std::min<int>(s_.spec(agent).health, agent.health + amount));
        }
        break;
      }
      case Keyword::Acquire: {
        std::vector<Uid> options;
        for (const auto& c : s_.tavern)
          if (s_.spec(c).cost <= amount) options.push_back(c.uid);
        if (!options.empty()) open_choice(card_choice(ChoiceKind::Acquire, std::move(options), 1, 1, source));
        break;
      }
      case Keyword::Destroy: {
        std::vector<Uid> options;
        for (const auto& c : me.played) options.push_back(c.uid);
        for (const auto& c : me.board) options.push_back(c.uid);
        if (!options.empty()) {
          const int max_picks = std::min<int>({amount, static_cast<int>(options.size()), kMaxPicks});
          open_choice(card_choice(ChoiceKind::Destroy, std::move(options), 0, max_picks, source));
        }
        break;
      }
      case Keyword::Knockout: {
        std::vector<Uid> options;
        for (const auto& c : opp.board) options.push_back(c.uid);
        if (!options.empty()) {
          const int k = std::min<int>({amount, static_cast<int>(options.size()), kMaxPicks});
          open_choice(card_choice(ChoiceKind::Knockout, std::move(options), k, k, source));
        }
        break;
      }
      case Keyword::Replace: {
        std::vector<Uid> options;
        for (const auto& c : s_.tavern) options.push_back(c.uid);
        if (!options.empty()) {
          const int max_picks = std::min<int>({amount, static_cast<int>(options.size()), kMaxPicks});
          open_choice(card_choice(ChoiceKind::Replace, std::move(options), 0, max_picks, source));
        }
        break;
      }
      case Keyword::Return: {
        std::vector<Uid> options;
        for (const auto& c : me.cooldown) options.push_back(c.uid);
        if (!options.empty()) {
          const int k = std::min<int>({amount, static_cast<int>(options.size()), kMaxPicks});
          auto choice = card_choice(ChoiceKind::Return, std::move(options), k, k, source);
          choice.ordered = true;
          open_choice(std::move(choice));
        }
        break;
      }
    }
  }

  void resolve_queue() {
    while (!s_.choice && !s_.outcome && !s_.effect_queue.empty()) {
      QueuedEffect q = s_.effect_queue.front();
      s_.effect_queue.erase(s_.effect_queue.begin());
      switch (q.effect.op) {
        case EffectOp::Single:
          keyword_effect(q.effect.left.keyword, q.effect.left.amount, q.source);
          break;
        case EffectOp::And:
          s_.effect_queue.insert(s_.effect_queue.begin(),
                                 {QueuedEffect{Effect{EffectOp::Single, q.effect.left, {}}, q.source},
                                  QueuedEffect{Effect{EffectOp::Single, q.effect.right, {}}, q.source}});
          break;
        case EffectOp::Or: {
          PendingChoice c;
          c.kind = ChoiceKind::EffectBranch;
          c.seat = s_.current;
          c.options = {0, 1};
          c.min_picks = 1;
          c.max_picks = 1;
          c.source = q.source;
          c.effect = q.effect;
          flags_ |= kStepChoiceOpened;
          emit(EventTag::Choice, c.seat, kNoCard, c.source, 2, static_cast<int>(c.kind));
          s_.choice = std::move(c);
          break;
        }
      }
    }
  }

  void resolve_choice(const PendingChoice& choice, const std::vector<int>& picks) {
    PlayerBoard& me = s_.players[choice.seat];
    PlayerBoard& opp = s_.players[other(choice.seat)];
    auto picked_uid = [&](int i) { return choice.options[static_cast<std::size_t>(i)]; };
    for (int i : picks) {
      if (choice.kind == ChoiceKind::EffectBranch) {
        emit(EventTag::Choice, choice.seat, kNoCard, choice.source, i, static_cast<int>(choice.kind) | kChoicePickBit);
        break;
      }
      const Uid uid = picked_uid(i);
      CardId card = kNoCard;
      for (const auto* zone : {&me.hand, &me.played, &me.board, &me.cooldown, &opp.board, &s_.tavern})
        if (auto idx = index_of(*zone, uid)) card = (*zone)[*idx].card;
      emit(EventTag::Choice, choice.seat, card, uid, 0, static_cast<int>(choice.kind) | kChoicePickBit);
    }

    switch (choice.kind) {
      case ChoiceKind::EffectBranch: {
        const EffectLeaf& leaf = picks.front() == 0 ? choice.effect.left : choice.effect.right;
        s_.effect_queue.insert(s_.effect_queue.begin(),
                               QueuedEffect{Effect{EffectOp::Single, leaf, {}}, choice.source});
        break;
      }
      case ChoiceKind::Acquire: {
        auto idx = index_of(s_.tavern, picked_uid(picks.front()));
        CardInstance c = s_.tavern[*idx];
        refill_tavern(*idx);
        emit(EventTag::Acquire, choice.seat, c.card, c.uid);
        route_acquired(c);
        break;
      }
      case ChoiceKind::Destroy:
        for (int i : picks) {
          const Uid uid = picked_uid(i);
          CardInstance c;
          if (auto idx = index_of(me.played, uid))
            c = take(me.played, *idx);
          else if (auto bidx = index_of(me.board, uid))
            c = take(me.board, *bidx);
          else
            continue;
          c.health = 0;
          c.activated = false;
          emit(EventTag::Remove, choice.seat, c.card, c.uid);
          s_.removed.push_back(c);
        }
        break;
      case ChoiceKind::Discard:
        for (int i : picks) {
          auto idx = index_of(me.hand, picked_uid(i));
          if (idx) me.cooldown.push_back(take(me.hand, *idx));
        }
        break;
      case ChoiceKind::Knockout:
        for (int i : picks) {
          auto idx = index_of(opp.board, picked_uid(i));
          if (idx) defeat(other(choice.seat), *idx);
        }
        break;
      case ChoiceKind::Replace:
        for (int i : picks) {
          auto idx = index_of(s_.tavern, picked_uid(i));
          if (!idx) continue;
          s_.tavern_pile.insert(s_.tavern_pile.begin(), s_.tavern[*idx]);
          s_.tavern[*idx] = s_.tavern_pile.back();
          s_.tavern_pile.pop_back();
          flags_ |= kStepTavernRevealed;
        }
        break;
      case ChoiceKind::Return:
        // First pick ends up on top.
        for (auto it = picks.rbegin(); it != picks.rend(); ++it) {
          auto idx = index_of(me.cooldown, picked_uid(*it));
          if (idx) me.draw_pile.push_back(take(me.cooldown, *idx));
        }
        break;
      case ChoiceKind::HlaaluSacrifice:
      case ChoiceKind::TreasurySacrifice: {
        const Uid uid = picked_uid(picks.front());
        CardInstance c;
        if (auto idx = index_of(me.hand, uid))
          c = take(me.hand, *idx);
        else if (auto pidx = index_of(me.played, uid))
          c = take(me.played, *pidx);
        else
          break;
        emit(EventTag::Remove, choice.seat, c.card, c.uid);
        s_.removed.push_back(c);
        if (choice.kind == ChoiceKind::HlaaluSacrifice) {
          me.prestige += s_.spec(c).cost - 1;
        } else {
          CardInstance writ = create(s_.cards->writ_of_coin());
          emit(EventTag::Create, choice.seat, writ.card, writ.uid);
          me.cooldown.push_back(writ);
        }
        break;
      }
      case ChoiceKind::PelinReturn: {
        auto idx = index_of(me.cooldown, picked_uid(picks.front()));
        if (idx) me.draw_pile.push_back(take(me.cooldown, *idx));
        break;
      }
    }
  }

  // -- patrons --------------------------------------------------------------

  void shift_favor(PatronState& ps) {
    const int seat = s_.current;
    if (ps.favor == other(seat))
      ps.favor = kNeutral;
    else
      ps.favor = static_cast<std::int8_t>(seat);
  }

  void check_patron_win() {
    if (!s_.outcome && s_.favor_count(s_.current) == 4) finish(s_.current, EndReason::PatronFavor);
  }

  // Hlaalu only takes cards that cost something.
  std::vector<Uid> sacrifice_pool(int min_cost) const {
    std::vector<Uid> pool;
    for (const auto* zone : {&s_.me().hand, &s_.me().played})
      for (const auto& c : *zone)
        if (s_.spec(c).cost >= min_cost) pool.push_back(c.uid);
    return pool;
  }

  void activate_patron(PatronId patron) {
    PlayerBoard& me = s_.me();
    const int seat = s_.current;
    me.patron_calls -= 1;
    PatronState* ps = find_patron(s_, patron);
    switch (patron) {
      case PatronId::Ansei:
        me.power -= 2;
        break;
      case PatronId::Crows:
        me.power += me.coins - 1;
        me.coins = 0;
        break;
      case PatronId::Hlaalu:
        break;
      case PatronId::Pelin:
        me.power -= 2;
        break;
      case PatronId::Rajhin: {
        me.coins -= 3;
        CardInstance bew = create(s_.cards->bewilderment());
        emit(EventTag::Create, other(seat), bew.card, bew.uid);
        s_.opponent().cooldown.push_back(bew);
        break;
      }
      case PatronId::RedEagle:
        me.power -= 2;
        break;
      case PatronId::Treasury:
        me.coins -= 2;
        break;
    }
    if (ps) shift_favor(*ps);
    emit(EventTag::Patron, seat, kNoCard, 0, ps ? ps->favor : kNeutral, static_cast<int>(patron));
    check_patron_win();
    if (s_.outcome) return;

    switch (patron) {
      case PatronId::RedEagle:
        draw(seat, 1);
        break;
      case PatronId::Hlaalu:
        open_choice(card_choice(ChoiceKind::HlaaluSacrifice, sacrifice_pool(1), 1, 1, 0));
        break;
      case PatronId::Treasury:
        open_choice(card_choice(ChoiceKind::TreasurySacrifice, sacrifice_pool(0), 1, 1, 0));
        break;
      case PatronId::Pelin: {
        std::vector<Uid> agents;
        for (const auto& c : me.cooldown)
          if (s_.spec(c).is_agent()) agents.push_back(c.uid);
        if (!agents.empty()) open_choice(card_choice(ChoiceKind::PelinReturn, std::move(agents), 1, 1, 0));
        break;
      }
      default:
        break;
    }
  }

  // -- turn structure -------------------------------------------------------

  void start_turn() {
    PlayerBoard& me = s_.me();
    const int seat = s_.current;
    emit(EventTag::TurnStart, seat);
    me.coins = 0;
    if (s_.turn == 2) me.coins += 1;  // second player's handicap
    if (const PatronState* ansei = find_patron(s_, PatronId::Ansei); ansei && ansei->favor == seat)
      me.coins += 1;
    if (me.discard_owed > 0) {
      const int owed = me.discard_owed;
      me.discard_owed = 0;
      std::vector<Uid> options;
      for (const auto& c : me.hand) options.push_back(c.uid);
      if (!options.empty()) {
        const int k = std::min<int>({owed, static_cast<int>(options.size()), kMaxPicks});
        open_choice(card_choice(ChoiceKind::Discard, std::move(options), k, k, 0));
      }
    }
  }

  void end_turn() {
    const int seat = s_.current;
    PlayerBoard& me = s_.me();
    PlayerBoard& opp = s_.opponent();

    // Taunt agents soak up unspent power first.
    for (std::size_t i = 0; i < opp.board.size() && me.power > 0;) {
      if (s_.spec(opp.board[i]).taunt) {
        const std::size_t before = opp.board.size();
        damage_agent(other(seat), i, me.power);
        if (opp.board.size() < before) continue;
      }
      ++i;
    }
    me.prestige += me.power;
    me.power = 0;
    me.coins = 0;
    for (const auto& c : me.played) {
      if (s_.spec(c).is_contract()) {
        emit(EventTag::Remove, seat, c.card, c.uid);
        s_.removed.push_back(c);
      } else {
        me.cooldown.push_back(c);
      }
    }
    me.played.clear();
    me.cooldown.insert(me.cooldown.end(), me.hand.begin(), me.hand.end());
    me.hand.clear();
    emit(EventTag::TurnEnd, seat, kNoCard, 0, me.prestige);
    flags_ |= kStepTurnEnded;

    if (me.prestige >= kWinningPrestige) {
      finish(seat, EndReason::Prestige80);
    } else if (s_.mode == EndgameMode::SuddenDeath && s_.leader == other(seat)) {
      if (me.prestige > opp.prestige) {
        if (me.prestige >= kSuddenDeathPrestige) {
          s_.leader = seat;
        } else {
          s_.mode = EndgameMode::Normal;
          s_.leader = -1;
        }
      } else {
        finish(other(seat), EndReason::SuddenDeath);
      }
    } else if (me.prestige >= kSuddenDeathPrestige && me.prestige > opp.prestige) {
      s_.mode = EndgameMode::SuddenDeath;
      s_.leader = seat;
    }
    if (s_.outcome) return;

    draw(seat, kHandSize);

    s_.current = other(seat);
    s_.turn += 1;
    s_.combo.fill(0);
    s_.used_this_turn.clear();
    for (auto& p : s_.players) {
      p.patron_calls = 1;
      for (auto& agent : p.board) agent.activated = false;
    }
    if (s_.turn > kTurnLimit) {
      finish(kDraw, EndReason::TurnLimitDraw);
      return;
    }
    start_turn();
  }

  MatchState& s_;
  EventLog* log_;
  StepFlags flags_ = 0;
};

bool pick_set_valid(const PendingChoice& c, const Move& m) {
  if (m.pick_count < c.min_picks || m.pick_count > c.max_picks) return false;
  std::array<bool, 256> seen{};
  for (int i = 0; i < m.pick_count; ++i) {
    const int p = m.picks[static_cast<std::size_t>(i)];
    if (p >= static_cast<int>(c.options.size()) || seen[static_cast<std::size_t>(p)]) return false;
    seen[static_cast<std::size_t>(p)] = true;
  }
  return true;
}

// Emits all k-subsets (or k-permutations) of option indices as MAKE_CHOICE moves.
void enumerate_picks(const PendingChoice& c, std::vector<Move>& out) {
  const int n = static_cast<int>(c.options.size());
  std::array<std::uint8_t, kMaxPicks> cur{};
  std::array<bool, 256> used{};
  auto rec = [&](auto&& self, int depth, int k, int start) -> void {
    if (depth == k) {
      Move m{MoveType::MakeChoice, 0};
      m.pick_count = static_cast<std::uint8_t>(k);
      m.picks = cur;
      for (int i = k; i < kMaxPicks; ++i) m.picks[static_cast<std::size_t>(i)] = 0;
      out.push_back(m);
      return;
    }
    for (int i = c.ordered ? 0 : start; i < n; ++i) {
      if (used[static_cast<std::size_t>(i)]) continue;
      used[static_cast<std::size_t>(i)] = true;
      cur[static_cast<std::size_t>(depth)] = static_cast<std::uint8_t>(i);
      self(self, depth + 1, k, i + 1);
      used[static_cast<std::size_t>(i)] = false;
    }
  };
  for (int k = c.min_picks; k <= c.max_picks; ++k) rec(rec, 0, k, 0);
}

bool has_sacrifice(const MatchState& s, int min_cost) {
  for (const auto* zone : {&s.me().hand, &s.me().played})
    for (const auto& c : *zone)
      if (s.spec(c).cost >= min_cost) return true;
  return false;
}

}  // namespace

int MatchState::favor_count(int seat) const {
  int n = 0;
  for (const auto& p : patrons)
    if (p.favor == seat) ++n;
  return n;
}

namespace rules {

bool can_activate_patron(const MatchState& s, PatronId patron) {
  const PlayerBoard& me = s.me();
  if (me.patron_calls < 1) return false;
  const PatronState* ps = find_patron(s, patron);
  if (patron != PatronId::Treasury && !ps) return false;
  switch (patron) {
    case PatronId::Ansei:
      return me.power >= 2 && ps->favor != s.current;
    case PatronId::Crows:
      return me.coins >= 1 && ps->favor != s.current;
    case PatronId::Hlaalu:
      return has_sacrifice(s, 1);
    case PatronId::Pelin:
    case PatronId::RedEagle:
      return me.power >= 2;
    case PatronId::Rajhin:
      return me.coins >= 3;
    case PatronId::Treasury:
      return me.coins >= 2 && has_sacrifice(s, 0);
  }
  return false;
}

void trigger_combo(MatchState& state, const CardInstance& used, EventLog* log) {
  Resolver(state, log).trigger_combo(used);
}

void activate_patron(MatchState& state, PatronId patron, EventLog* log) {
  Resolver r(state, log);
  r.activate_patron(patron);
  r.resolve_queue();
}

void end_turn(MatchState& state, EventLog* log) { Resolver(state, log).end_turn(); }

void keyword_effect(MatchState& state, Keyword keyword, int amount, Uid source, EventLog* log) {
  Resolver(state, log).keyword_effect(keyword, amount, source);
}

void resolve_queue(MatchState& state, EventLog* log) { Resolver(state, log).resolve_queue(); }

}  // namespace rules

MatchState new_match(CardSetPtr cards, const std::array<PatronId, 4>& patrons, std::uint64_t seed) {
  if (!cards) throw SetupError("card set is null");
  for (std::size_t i = 0; i < patrons.size(); ++i) {
    if (patrons[i] == PatronId::Treasury) throw SetupError("Treasury cannot be drafted");
    for (std::size_t j = 0; j < i; ++j)
      if (patrons[i] == patrons[j])
        throw SetupError("patron " + std::string(to_string(patrons[i])) + " picked twice");
  }

  MatchState s;
  s.cards = std::move(cards);
  s.rng = Rng(seed);
  for (std::size_t i = 0; i < patrons.size(); ++i) s.patrons[i] = {patrons[i], kNeutral};

  const CardSet& set = *s.cards;
  for (int seat = 0; seat < 2; ++seat) {
    PlayerBoard& p = s.players[static_cast<std::size_t>(seat)];
    std::vector<CardInstance> deck;
    for (PatronId patron : patrons) deck.push_back({s.next_uid++, set.starter(patron), 0, false});
    for (int i = 0; i < kStartingGold; ++i) deck.push_back({s.next_uid++, set.gold(), 0, false});
    s.rng.shuffle(std::span(deck));
    p.hand.assign(deck.begin(), deck.begin() + kHandSize);
    p.draw_pile.assign(deck.begin() + kHandSize, deck.end());
  }
  for (PatronId patron : patrons)
    for (CardId id : set.tavern_cards(patron)) s.tavern_pile.push_back({s.next_uid++, id, 0, false});
  for (CardId id : set.tavern_cards(PatronId::Treasury))
    s.tavern_pile.push_back({s.next_uid++, id, 0, false});
  s.rng.shuffle(std::span(s.tavern_pile));
  while (static_cast<int>(s.tavern.size()) < kTavernSize && !s.tavern_pile.empty()) {
    s.tavern.push_back(s.tavern_pile.back());
    s.tavern_pile.pop_back();
  }
  return s;
}

void legal_moves(const MatchState& s, std::vector<Move>& out) {
  out.clear();
  if (s.outcome) return;
  if (s.choice) {
    enumerate_picks(*s.choice, out);
    return;
  }
  const PlayerBoard& me = s.me();
  for (const auto& c : me.hand) out.push_back(Move::play_card(c.uid));
  for (const auto& c : me.board)
    if (!c.activated) out.push_back(Move::activate_agent(c.uid));
  for (const auto& c : s.tavern)
    if (s.spec(c).cost <= me.coins) out.push_back(Move::buy_card(c.uid));
  if (me.power >= 1)
    for (const auto& c : s.opponent().board) out.push_back(Move::attack_agent(c.uid));
  for (const auto& ps : s.patrons)
    if (rules::can_activate_patron(s, ps.patron)) out.push_back(Move::activate_patron(ps.patron));
  if (rules::can_activate_patron(s, PatronId::Treasury)) out.push_back(Move::activate_patron(PatronId::Treasury));
  out.push_back(Move::end_turn());
}

std::vector<Move> legal_moves(const MatchState& state) {
  std::vector<Move> out;
  legal_moves(state, out);
  return out;
}

bool is_legal(const MatchState& s, const Move& m) {
  if (s.outcome) return false;
  if (s.choice) return m.type == MoveType::MakeChoice && pick_set_valid(*s.choice, m);
  const PlayerBoard& me = s.me();
  switch (m.type) {
    case MoveType::PlayCard:
      return index_of(me.hand, m.target).has_value();
    case MoveType::ActivateAgent: {
      auto idx = index_of(me.board, m.target);
      return idx && !me.board[*idx].activated;
    }
    case MoveType::BuyCard: {
      auto idx = index_of(s.tavern, m.target);
      return idx && s.spec(s.tavern[*idx]).cost <= me.coins;
    }
    case MoveType::AttackAgent:
      return me.power >= 1 && index_of(s.opponent().board, m.target).has_value();
    case MoveType::ActivatePatron:
      return m.target < kPatronIdCount && rules::can_activate_patron(s, m.patron());
    case MoveType::EndTurn:
      return true;
    case MoveType::MakeChoice:
      return false;
  }
  return false;
}

StepFlags apply(MatchState& s, const Move& m, EventLog* log) {
  if (!is_legal(s, m)) throw IllegalMoveError("illegal move " + to_string(m));
  Resolver r(s, log);
  PlayerBoard& me = s.me();
  switch (m.type) {
    case MoveType::PlayCard: {
      CardInstance c = take(me.hand, *index_of(me.hand, m.target));
      r.emit(EventTag::Play, s.current, c.card, c.uid);
      r.summon_or_play(c);
      break;
    }
    case MoveType::ActivateAgent: {
      CardInstance& agent = me.board[*index_of(me.board, m.target)];
      agent.activated = true;
      r.emit(EventTag::Activate, s.current, agent.card, agent.uid);
      r.trigger_combo(agent);
      break;
    }
    case MoveType::BuyCard: {
      const std::size_t slot = *index_of(s.tavern, m.target);
      CardInstance c = s.tavern[slot];
      const int cost = s.spec(c).cost;
      me.coins -= cost;
      r.refill_tavern(slot);
      r.emit(EventTag::Buy, s.current, c.card, c.uid, cost);
      r.route_acquired(c);
      break;
    }
    case MoveType::AttackAgent: {
      PlayerBoard& opp = s.opponent();
      r.damage_agent(1 - s.current, *index_of(opp.board, m.target), me.power);
      break;
    }
    case MoveType::ActivatePatron:
      r.activate_patron(m.patron());
      break;
    case MoveType::EndTurn:
      r.end_turn();
      break;
    case MoveType::MakeChoice: {
      PendingChoice choice = std::move(*s.choice);
      s.choice.reset();
      std::vector<int> picks(m.picks.begin(), m.picks.begin() + m.pick_count);
      r.resolve_choice(choice, picks);
      break;
    }
  }
  r.resolve_queue();
  return r.flags();
}

std::pair<MatchState, EventLog> apply_move(const MatchState& state, const Move& move) {
  std::pair<MatchState, EventLog> result{state, {}};
  apply(result.first, move, &result.second);
  return result;
}

std::optional<Outcome> check_terminal(const MatchState& s) {
  if (s.outcome) return s.outcome;
  if (s.favor_count(s.current) == 4) return Outcome{s.current, EndReason::PatronFavor};
  if (s.turn > kTurnLimit) return Outcome{kDraw, EndReason::TurnLimitDraw};
  return std::nullopt;
}

}  // namespace tribute
