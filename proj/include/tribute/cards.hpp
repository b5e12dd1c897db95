#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tribute {

enum class PatronId : std::uint8_t {
  Ansei,
  Crows,
  Hlaalu,
  Pelin,
  Rajhin,
  RedEagle,
  Treasury,
};
inline constexpr int kPatronIdCount = 7;
inline constexpr std::array<PatronId, 6> kDraftablePatrons = {
    PatronId::Ansei,  PatronId::Crows,  PatronId::Hlaalu,
    PatronId::Pelin,  PatronId::Rajhin, PatronId::RedEagle};

enum class CardKind : std::uint8_t {
  Starter,
  Action,
  ContractAction,
  Agent,
  ContractAgent,
};

enum class Keyword : std::uint8_t {
  Acquire,
  Coin,
  Destroy,
  Discard,
  Draw,
  Heal,
  Knockout,
  OppLosePrestige,
  Patron,
  Power,
  Replace,
  Return,
};
inline constexpr int kKeywordCount = 12;

std::string_view to_string(PatronId p);
std::string_view to_string(CardKind k);
std::string_view to_string(Keyword k);
std::optional<PatronId> parse_patron(std::string_view s);
std::optional<CardKind> parse_card_kind(std::string_view s);
std::optional<Keyword> parse_keyword(std::string_view s);

struct EffectLeaf {
  Keyword keyword = Keyword::Coin;
  int amount = 1;
  friend bool operator==(const EffectLeaf&, const EffectLeaf&) = default;
};

enum class EffectOp : std::uint8_t { Single, And, Or };

// A play or combo effect: one keyword, or two joined by AND / OR.
struct Effect {
  EffectOp op = EffectOp::Single;
  EffectLeaf left;
  EffectLeaf right;  // unused when op == Single

  static Effect single(Keyword k, int amount) { return {EffectOp::Single, {k, amount}, {}}; }
  friend bool operator==(const Effect&, const Effect&) = default;
};

using CardId = std::uint16_t;  // index into a CardSet
inline constexpr CardId kNoCard = 0xffff;
inline constexpr int kMaxComboLevel = 4;

struct CardSpec {
  std::string id;
  std::string name;
  PatronId deck = PatronId::Treasury;
  CardKind kind = CardKind::Action;
  int cost = 0;
  int health = 0;  // agents only
  bool taunt = false;
  int tier = 3;  // 1 = best, 5 = worst
  int copies = 1;  // copies shuffled into the tavern pile
  // effects[0] is the play effect (combo 1); effects[i] fires at combo i + 1.
  std::array<std::optional<Effect>, kMaxComboLevel> effects;

  bool is_agent() const { return kind == CardKind::Agent || kind == CardKind::ContractAgent; }
  bool is_contract() const {
    return kind == CardKind::ContractAction || kind == CardKind::ContractAgent;
  }
};

class CardSetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Validated, immutable collection of card definitions. Besides the six
/// patron decks it always contains the Treasury cards the rules create or
/// hand out: Gold, Writ of Coin and Bewilderment.
class CardSet {
 public:
  explicit CardSet(std::vector<CardSpec> cards);

  const CardSpec& operator[](CardId id) const { return cards_[id]; }
  std::size_t size() const { return cards_.size(); }
  const std::vector<CardSpec>& cards() const { return cards_; }

  std::optional<CardId> find(std::string_view id) const;
  CardId require(std::string_view id) const;

  CardId gold() const { return gold_; }
  CardId writ_of_coin() const { return writ_; }
  CardId bewilderment() const { return bewilderment_; }
  CardId starter(PatronId deck) const { return starters_[static_cast<int>(deck)]; }
  // Cards that go into the tavern pile, each listed once per copy.
  const std::vector<CardId>& tavern_cards(PatronId deck) const {
    return tavern_cards_[static_cast<int>(deck)];
  }

 private:
  std::vector<CardSpec> cards_;
  std::unordered_map<std::string, CardId> by_id_;
  std::array<CardId, kPatronIdCount> starters_{};
  std::array<std::vector<CardId>, kPatronIdCount> tavern_cards_;
  CardId gold_ = kNoCard;
  CardId writ_ = kNoCard;
  CardId bewilderment_ = kNoCard;
};

using CardSetPtr = std::shared_ptr<const CardSet>;

// Parse and validate a card-definition document (JSON text).
CardSetPtr load_card_set(std::string_view json_text);
CardSetPtr load_card_set_file(const std::filesystem::path& path);
// The card set bundled with the library (data/cards.json, embedded at build time).
const CardSetPtr& default_card_set();
std::string_view default_card_set_json();

}  // namespace tribute
