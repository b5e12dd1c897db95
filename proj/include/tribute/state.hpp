#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tribute/cards.hpp"
#include "tribute/rng.hpp"

namespace tribute {

using Uid = std::uint16_t;  // per-match card instance id

inline constexpr int kHandSize = 5;
inline constexpr int kTavernSize = 5;
inline constexpr int kMaxBoard = 7;
inline constexpr int kTurnLimit = 500;
inline constexpr int kSuddenDeathPrestige = 40;
inline constexpr int kWinningPrestige = 80;
inline constexpr int kStartingGold = 6;

struct CardInstance {
  Uid uid = 0;
  CardId card = kNoCard;
  std::int16_t health = 0;   // meaningful on the board only
  bool activated = false;    // board agents: used this turn
  friend bool operator==(const CardInstance&, const CardInstance&) = default;
};

struct PlayerBoard {
  int coins = 0;
  int power = 0;
  int prestige = 0;
  int patron_calls = 1;
  std::vector<CardInstance> hand;
  std::vector<CardInstance> draw_pile;  // back() is the top card
  std::vector<CardInstance> cooldown;
  std::vector<CardInstance> played;
  std::vector<CardInstance> board;
  int discard_owed = 0;  // DISCARD amounts to resolve at this player's next turn start
  friend bool operator==(const PlayerBoard&, const PlayerBoard&) = default;
};

inline constexpr std::int8_t kNeutral = -1;

struct PatronState {
  PatronId patron = PatronId::Treasury;
  std::int8_t favor = kNeutral;  // seat index or kNeutral
  friend bool operator==(const PatronState&, const PatronState&) = default;
};

enum class EndReason : std::uint8_t {
  PatronFavor,
  Prestige80,
  SuddenDeath,
  TurnLimitDraw,
  Timeout,
  IllegalMove,
  AgentCrash,
};
std::string_view to_string(EndReason r);

inline constexpr int kDraw = -1;

struct Outcome {
  int winner = kDraw;  // seat, or kDraw
  EndReason reason = EndReason::TurnLimitDraw;
  friend bool operator==(const Outcome&, const Outcome&) = default;
};

enum class ChoiceKind : std::uint8_t {
  Acquire,
  Destroy,
  Discard,
  Knockout,
  Replace,
  Return,
  EffectBranch,       // OR composite: option 0 = left, 1 = right
  HlaaluSacrifice,
  TreasurySacrifice,
  PelinReturn,
};
std::string_view to_string(ChoiceKind k);

struct PendingChoice {
  ChoiceKind kind = ChoiceKind::Acquire;
  int seat = 0;
  std::vector<Uid> options;  // card uids, or branch indices for EffectBranch
  int min_picks = 1;
  int max_picks = 1;
  bool ordered = false;  // selection order matters (RETURN)
  Uid source = 0;
  Effect effect;  // EffectBranch: the OR composite being decided
  friend bool operator==(const PendingChoice&, const PendingChoice&) = default;
};

struct QueuedEffect {
  Effect effect;
  Uid source = 0;
  friend bool operator==(const QueuedEffect&, const QueuedEffect&) = default;
};

struct UsedCard {
  Uid uid = 0;
  CardId card = kNoCard;
  friend bool operator==(const UsedCard&, const UsedCard&) = default;
};

enum class EndgameMode : std::uint8_t { Normal, SuddenDeath, Finished };

/// Complete game truth, including hidden zones and the RNG stream.
struct MatchState {
  CardSetPtr cards;
  std::array<PlayerBoard, 2> players;
  int current = 0;
  int turn = 1;
  std::array<PatronState, 4> patrons;
  std::array<std::uint8_t, kPatronIdCount> combo{};
  std::vector<UsedCard> used_this_turn;
  std::optional<PendingChoice> choice;
  std::vector<QueuedEffect> effect_queue;
  std::vector<CardInstance> tavern;
  std::vector<CardInstance> tavern_pile;  // back() is the top card
  std::vector<CardInstance> removed;
  Rng rng;
  EndgameMode mode = EndgameMode::Normal;
  int leader = -1;  // sudden-death leader seat
  std::optional<Outcome> outcome;
  Uid next_uid = 0;

  const CardSpec& spec(CardId id) const { return (*cards)[id]; }
  const CardSpec& spec(const CardInstance& c) const { return (*cards)[c.card]; }
  PlayerBoard& me() { return players[current]; }
  const PlayerBoard& me() const { return players[current]; }
  PlayerBoard& opponent() { return players[1 - current]; }
  const PlayerBoard& opponent() const { return players[1 - current]; }
  bool finished() const { return outcome.has_value(); }
  int favor_count(int seat) const;

  friend bool operator==(const MatchState& a, const MatchState& b);
};

enum class MoveType : std::uint8_t {
  ActivateAgent,
  ActivatePatron,
  AttackAgent,
  BuyCard,
  EndTurn,
  MakeChoice,
  PlayCard,
};
std::string_view to_string(MoveType t);
std::optional<MoveType> parse_move_type(std::string_view s);

inline constexpr int kMaxPicks = 7;

struct Move {
  MoveType type = MoveType::EndTurn;
  std::uint16_t target = 0;  // card uid, or PatronId for ActivatePatron
  std::uint8_t pick_count = 0;
  std::array<std::uint8_t, kMaxPicks> picks{};  // indices into PendingChoice::options

  static Move play_card(Uid uid) { return {MoveType::PlayCard, uid}; }
  static Move activate_agent(Uid uid) { return {MoveType::ActivateAgent, uid}; }
  static Move attack_agent(Uid uid) { return {MoveType::AttackAgent, uid}; }
  static Move buy_card(Uid uid) { return {MoveType::BuyCard, uid}; }
  static Move activate_patron(PatronId p) {
    return {MoveType::ActivatePatron, static_cast<std::uint16_t>(p)};
  }
  static Move end_turn() { return {MoveType::EndTurn, 0}; }
  static Move make_choice(std::initializer_list<int> option_indices);

  PatronId patron() const { return static_cast<PatronId>(target); }
  friend bool operator==(const Move& a, const Move& b);
};

std::string to_string(const Move& m);

enum class EventTag : std::uint8_t {
  Play,
  Activate,
  Buy,
  Acquire,
  Effect,
  Combo,
  Draw,
  Shuffle,
  Patron,
  Attack,
  Defeat,
  Choice,
  Create,
  Remove,
  TurnStart,
  TurnEnd,
  GameEnd,
};
std::string_view to_string(EventTag t);

// Compact event record; format_event renders the stable one-line text form.
struct Event {
  EventTag tag = EventTag::Effect;
  std::uint8_t seat = 0;
  std::uint16_t turn = 0;
  CardId card = kNoCard;
  Uid uid = 0;
  std::int16_t amount = 0;
  std::uint8_t detail = 0;  // keyword, combo level, patron, choice kind, ... per tag
  friend bool operator==(const Event&, const Event&) = default;
};

using EventLog = std::vector<Event>;

std::string format_event(const Event& e, const CardSet& cards);
std::string format_events(const EventLog& log, const CardSet& cards);

}  // namespace tribute
