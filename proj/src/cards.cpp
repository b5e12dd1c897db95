#include "tribute/cards.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace tribute {

namespace {

using nlohmann::json;

constexpr std::array<std::string_view, kPatronIdCount> kPatronNames = {
    "Ansei", "Crows", "Hlaalu", "Pelin", "Rajhin", "RedEagle", "Treasury"};
constexpr std::array<std::string_view, 5> kKindNames = {
    "starter", "action", "contract_action", "agent", "contract_agent"};
constexpr std::array<std::string_view, kKeywordCount> kKeywordNames = {
    "ACQUIRE", "COIN", "DESTROY", "DISCARD", "DRAW", "HEAL",
    "KNOCKOUT", "OPPLOSEPR", "PATRON", "POWER", "REPLACE", "RETURN"};

template <typename Enum, std::size_t N>
std::optional<Enum> parse_enum(const std::array<std::string_view, N>& names, std::string_view s) {
  for (std::size_t i = 0; i < N; ++i)
    if (names[i] == s) return static_cast<Enum>(i);
  return std::nullopt;
}

[[noreturn]] void fail(const std::string& card, const std::string& field, const std::string& what) {
  throw CardSetError("card '" + card + "', field '" + field + "': " + what);
}

int read_int(const json& obj, const std::string& card, const char* field, int min_value) {
  const auto& v = obj.at(field);
  if (!v.is_number_integer()) fail(card, field, "expected an integer");
  const auto value = v.get<long long>();
  if (value < min_value) fail(card, field, "must be >= " + std::to_string(min_value));
  if (value > 1000) fail(card, field, "out of range");
  return static_cast<int>(value);
}

std::string read_string(const json& obj, const std::string& card, const char* field) {
  auto it = obj.find(field);
  if (it == obj.end()) fail(card, field, "missing");
  if (!it->is_string()) fail(card, field, "expected a string");
  return it->get<std::string>();
}

EffectLeaf parse_leaf(const json& node, const std::string& card, const std::string& field) {
  if (!node.is_object()) fail(card, field, "effect must be an object");
  if (node.contains("op")) fail(card, field, "effects nest at most one level (two keywords)");
  auto kw = node.find("keyword");
  if (kw == node.end() || !kw->is_string()) fail(card, field, "missing keyword");
  auto keyword = parse_keyword(kw->get<std::string>());
  if (!keyword) fail(card, field, "unknown keyword '" + kw->get<std::string>() + "'");
  auto amount = node.find("amount");
  if (amount == node.end() || !amount->is_number_integer() || amount->get<long long>() < 1 ||
      amount->get<long long>() > 99)
    fail(card, field, "amount must be an integer in 1..99");
  for (const auto& [key, _] : node.items())
    if (key != "keyword" && key != "amount") fail(card, field, "unexpected key '" + key + "'");
  return {*keyword, static_cast<int>(amount->get<long long>())};
}

Effect parse_effect(const json& node, const std::string& card, const std::string& field) {
  if (!node.is_object()) fail(card, field, "effect must be an object");
  auto op = node.find("op");
  if (op == node.end()) return {EffectOp::Single, parse_leaf(node, card, field), {}};
  if (!op->is_string()) fail(card, field, "op must be \"AND\" or \"OR\"");
  Effect e;
  const auto op_name = op->get<std::string>();
  if (op_name == "AND")
    e.op = EffectOp::And;
  else if (op_name == "OR")
    e.op = EffectOp::Or;
  else
    fail(card, field, "op must be \"AND\" or \"OR\"");
  if (!node.contains("left") || !node.contains("right")) fail(card, field, "composite needs left and right");
  for (const auto& [key, _] : node.items())
    if (key != "op" && key != "left" && key != "right") fail(card, field, "unexpected key '" + key + "'");
  e.left = parse_leaf(node.at("left"), card, field + ".left");
  e.right = parse_leaf(node.at("right"), card, field + ".right");
  return e;
}

CardSpec parse_card(const json& node, std::size_t index) {
  if (!node.is_object()) throw CardSetError("cards[" + std::to_string(index) + "] is not an object");
  std::string id = "cards[" + std::to_string(index) + "]";
  id = read_string(node, id, "id");
  if (id.empty()) fail(id, "id", "must not be empty");

  CardSpec spec;
  spec.id = id;
  spec.name = read_string(node, id, "name");
  auto deck = parse_patron(read_string(node, id, "deck"));
  if (!deck) fail(id, "deck", "unknown deck");
  spec.deck = *deck;
  auto kind = parse_card_kind(read_string(node, id, "kind"));
  if (!kind) fail(id, "kind", "unknown kind");
  spec.kind = *kind;
  if (!node.contains("cost")) fail(id, "cost", "missing");
  spec.cost = read_int(node, id, "cost", 0);
  if (!node.contains("tier")) fail(id, "tier", "missing");
  spec.tier = read_int(node, id, "tier", 1);
  if (spec.tier > 5) fail(id, "tier", "must be in 1..5");
  spec.copies = node.contains("copies") ? read_int(node, id, "copies", 0)
                                        : (spec.kind == CardKind::Starter ? 0 : 1);

  if (spec.is_agent()) {
    if (!node.contains("health")) fail(id, "health", "required for agent cards");
    spec.health = read_int(node, id, "health", 1);
  } else if (node.contains("health")) {
    fail(id, "health", "only agent cards have health");
  }
  if (node.contains("taunt")) {
    if (!node.at("taunt").is_boolean()) fail(id, "taunt", "expected a boolean");
    spec.taunt = node.at("taunt").get<bool>();
    if (spec.taunt && !spec.is_agent()) fail(id, "taunt", "only agent cards can have taunt");
  }
  if (spec.kind == CardKind::Starter && spec.copies != 0)
    fail(id, "copies", "starter cards never enter the tavern");

  if (node.contains("effects")) {
    const auto& effects = node.at("effects");
    if (!effects.is_object()) fail(id, "effects", "expected an object keyed by combo level");
    for (const auto& [key, value] : effects.items()) {
      if (key.size() != 1 || key[0] < '1' || key[0] > '9') fail(id, "effects", "bad combo level '" + key + "'");
      const int level = key[0] - '0';
      if (level > kMaxComboLevel) fail(id, "effects." + key, "combo level above 4");
      spec.effects[level - 1] = parse_effect(value, id, "effects." + key);
    }
  }
  static const std::vector<std::string> known = {"id", "name", "deck", "kind", "cost", "health",
                                                 "taunt", "tier", "copies", "effects"};
  for (const auto& [key, _] : node.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      fail(id, key, "unknown field");
  return spec;
}

}  // namespace

std::string_view to_string(PatronId p) { return kPatronNames[static_cast<int>(p)]; }
std::string_view to_string(CardKind k) { return kKindNames[static_cast<int>(k)]; }
std::string_view to_string(Keyword k) { return kKeywordNames[static_cast<int>(k)]; }
std::optional<PatronId> parse_patron(std::string_view s) { return parse_enum<PatronId>(kPatronNames, s); }
std::optional<CardKind> parse_card_kind(std::string_view s) { return parse_enum<CardKind>(kKindNames, s); }
std::optional<Keyword> parse_keyword(std::string_view s) { return parse_enum<Keyword>(kKeywordNames, s); }

CardSet::CardSet(std::vector<CardSpec> cards) : cards_(std::move(cards)) {
  if (cards_.size() >= kNoCard) throw CardSetError("too many cards");
  starters_.fill(kNoCard);
  for (std::size_t i = 0; i < cards_.size(); ++i) {
    const CardSpec& c = cards_[i];
    const auto id = static_cast<CardId>(i);
    if (!by_id_.emplace(c.id, id).second) throw CardSetError("duplicate card id '" + c.id + "'");
    const int deck = static_cast<int>(c.deck);
    if (c.kind == CardKind::Starter) {
      if (starters_[deck] != kNoCard)
        throw CardSetError("deck " + std::string(to_string(c.deck)) + " has more than one starter ('" +
                           cards_[starters_[deck]].id + "', '" + c.id + "')");
      starters_[deck] = id;
    }
    for (int k = 0; k < c.copies; ++k) tavern_cards_[deck].push_back(id);
  }
  for (PatronId p : kDraftablePatrons)
    if (starters_[static_cast<int>(p)] == kNoCard)
      throw CardSetError("deck " + std::string(to_string(p)) + " has no starter card");

  auto special = [&](std::string_view id, CardKind kind) {
    auto found = find(id);
    if (!found) throw CardSetError("Treasury card '" + std::string(id) + "' is missing");
    const CardSpec& c = cards_[*found];
    if (c.deck != PatronId::Treasury) fail(c.id, "deck", "must be Treasury");
    if (c.kind != kind) fail(c.id, "kind", "must be " + std::string(to_string(kind)));
    if (c.copies != 0) fail(c.id, "copies", "must be 0");
    return *found;
  };
  gold_ = special("gold", CardKind::Starter);
  writ_ = special("writ_of_coin", CardKind::Action);
  bewilderment_ = special("bewilderment", CardKind::Action);
}

std::optional<CardId> CardSet::find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

CardId CardSet::require(std::string_view id) const {
  auto found = find(id);
  if (!found) throw CardSetError("unknown card id '" + std::string(id) + "'");
  return *found;
}

CardSetPtr load_card_set(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw CardSetError(std::string("card set is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw CardSetError("card set must be a JSON object");
  if (!doc.contains("version") || !doc.at("version").is_number_integer())
    throw CardSetError("card set needs an integer 'version'");
  if (!doc.contains("cards") || !doc.at("cards").is_array())
    throw CardSetError("card set needs a 'cards' array");
  std::vector<CardSpec> cards;
  const auto& list = doc.at("cards");
  cards.reserve(list.size());
  try {
    for (std::size_t i = 0; i < list.size(); ++i) cards.push_back(parse_card(list[i], i));
  } catch (const json::exception& e) {
    throw CardSetError(std::string("card set: ") + e.what());
  }
  return std::make_shared<const CardSet>(std::move(cards));
}

CardSetPtr load_card_set_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CardSetError("cannot open card set file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_card_set(buf.str());
}

const CardSetPtr& default_card_set() {
  static const CardSetPtr cards = load_card_set(default_card_set_json());
  return cards;
}

}  // namespace tribute
