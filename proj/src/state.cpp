#include "tribute/state.hpp"

#include <sstream>

namespace tribute {

namespace {

constexpr std::array<std::string_view, 7> kEndReasonNames = {
    "patron_favor", "prestige_80", "sudden_death", "turn_limit_draw",
    "timeout",      "illegal_move", "agent_crash"};
constexpr std::array<std::string_view, 10> kChoiceKindNames = {
    "ACQUIRE", "DESTROY", "DISCARD", "KNOCKOUT", "REPLACE", "RETURN",
    "EFFECT_BRANCH", "HLAALU_SACRIFICE", "TREASURY_SACRIFICE", "PELIN_RETURN"};
constexpr std::array<std::string_view, 7> kMoveTypeNames = {
    "ACTIVATE_AGENT", "ACTIVATE_PATRON", "ATTACK_AGENT", "BUY_CARD",
    "END_TURN",       "MAKE_CHOICE",     "PLAY_CARD"};
constexpr std::array<std::string_view, 17> kEventTagNames = {
    "PLAY",   "ACTIVATE", "BUY",    "ACQUIRE", "EFFECT", "COMBO",      "DRAW",     "SHUFFLE", "PATRON",
    "ATTACK", "DEFEAT",   "CHOICE", "CREATE",  "REMOVE", "TURN_START", "TURN_END", "GAME_END"};

constexpr int kChoicePickBit = 0x80;

std::string seat_name(int seat) { return seat == 2 ? "none" : std::to_string(seat); }

}  // namespace

std::string_view to_string(EndReason r) { return kEndReasonNames[static_cast<int>(r)]; }
std::string_view to_string(ChoiceKind k) { return kChoiceKindNames[static_cast<int>(k)]; }
std::string_view to_string(MoveType t) { return kMoveTypeNames[static_cast<int>(t)]; }
std::string_view to_string(EventTag t) { return kEventTagNames[static_cast<int>(t)]; }

std::optional<MoveType> parse_move_type(std::string_view s) {
  for (std::size_t i = 0; i < kMoveTypeNames.size(); ++i)
    if (kMoveTypeNames[i] == s) return static_cast<MoveType>(i);
  return std::nullopt;
}

bool operator==(const MatchState& a, const MatchState& b) {
  return a.cards == b.cards && a.players == b.players && a.current == b.current && a.turn == b.turn &&
         a.patrons == b.patrons && a.combo == b.combo && a.used_this_turn == b.used_this_turn &&
         a.choice == b.choice && a.effect_queue == b.effect_queue && a.tavern == b.tavern &&
         a.tavern_pile == b.tavern_pile && a.removed == b.removed && a.rng == b.rng && a.mode == b.mode &&
         a.leader == b.leader && a.outcome == b.outcome && a.next_uid == b.next_uid;
}

Move Move::make_choice(std::initializer_list<int> option_indices) {
  Move m{MoveType::MakeChoice, 0};
  for (int i : option_indices) {
    if (m.pick_count == kMaxPicks) break;
    m.picks[m.pick_count++] = static_cast<std::uint8_t>(i);
  }
  return m;
}

bool operator==(const Move& a, const Move& b) {
  if (a.type != b.type || a.target != b.target || a.pick_count != b.pick_count) return false;
  for (int i = 0; i < a.pick_count; ++i)
    if (a.picks[static_cast<std::size_t>(i)] != b.picks[static_cast<std::size_t>(i)]) return false;
  return true;
}

std::string to_string(const Move& m) {
  std::string out(to_string(m.type));
  switch (m.type) {
    case MoveType::ActivatePatron:
      out += ' ';
      out += to_string(m.patron());
      break;
    case MoveType::EndTurn:
      break;
    case MoveType::MakeChoice:
      out += " [";
      for (int i = 0; i < m.pick_count; ++i) {
        if (i) out += ',';
        out += std::to_string(m.picks[static_cast<std::size_t>(i)]);
      }
      out += ']';
      break;
    default:
      out += " #" + std::to_string(m.target);
      break;
  }
  return out;
}

std::string format_event(const Event& e, const CardSet& cards) {
  std::ostringstream os;
  os << to_string(e.tag) << " turn=" << e.turn << " seat=" << seat_name(e.seat);
  auto card = [&] {
    if (e.card != kNoCard) os << " card=" << cards[e.card].id << " uid=" << e.uid;
  };
  switch (e.tag) {
    case EventTag::Play:
    case EventTag::Activate:
    case EventTag::Acquire:
    case EventTag::Draw:
    case EventTag::Defeat:
    case EventTag::Create:
    case EventTag::Remove:
      card();
      break;
    case EventTag::Buy:
      card();
      os << " cost=" << e.amount;
      break;
    case EventTag::Effect:
      os << " keyword=" << to_string(static_cast<Keyword>(e.detail)) << " amount=" << e.amount
         << " source=" << e.uid;
      break;
    case EventTag::Combo:
      card();
      os << " level=" << static_cast<int>(e.detail);
      break;
    case EventTag::Shuffle:
      os << " cards=" << e.amount;
      break;
    case EventTag::Patron:
      os << " patron=" << to_string(static_cast<PatronId>(e.detail)) << " favor="
         << (e.amount < 0 ? std::string("neutral") : std::to_string(e.amount));
      break;
    case EventTag::Attack:
      card();
      os << " damage=" << e.amount;
      break;
    case EventTag::Choice: {
      const bool pick = (e.detail & kChoicePickBit) != 0;
      const auto kind = static_cast<ChoiceKind>(e.detail & ~kChoicePickBit);
      os << " kind=" << to_string(kind);
      if (pick) {
        os << " pick";
        if (kind == ChoiceKind::EffectBranch)
          os << " branch=" << e.amount;
        else
          card();
      } else {
        os << " open options=" << e.amount << " source=" << e.uid;
      }
      break;
    }
    case EventTag::TurnStart:
      break;
    case EventTag::TurnEnd:
      os << " prestige=" << e.amount;
      break;
    case EventTag::GameEnd:
      os << " reason=" << to_string(static_cast<EndReason>(e.detail));
      break;
  }
  return os.str();
}

std::string format_events(const EventLog& log, const CardSet& cards) {
  std::string out;
  for (const auto& e : log) {
    out += format_event(e, cards);
    out += '\n';
  }
  return out;
}

}  // namespace tribute
