#include <map>
#include <numeric>

#include "doctest.h"
#include "support.hpp"

using namespace tt;

namespace {

int count_type(const std::vector<Move>& moves, MoveType t) {
  return static_cast<int>(std::count_if(moves.begin(), moves.end(), [t](const Move& m) { return m.type == t; }));
}

}  // namespace

TEST_CASE("rng streams are reproducible and uniform enough") {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    CHECK(x == b.next());
    (void)c.next();
  }
  CHECK(Rng(43).next() != Rng(42).next());

  Rng r(5);
  std::array<int, 6> hist{};
  for (int i = 0; i < 60000; ++i) {
    const auto v = r.below(6);
    REQUIRE(v < 6);
    ++hist[v];
  }
  for (int h : hist) CHECK(std::abs(h - 10000) < 500);

  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }

  std::vector<int> v(20);
  std::iota(v.begin(), v.end(), 0);
  auto w = v;
  r.shuffle(std::span(w));
  std::sort(w.begin(), w.end());
  CHECK(w == v);
  CHECK(mix_seed({1, 2}) == mix_seed({1, 2}));
  CHECK(mix_seed({1, 2}) != mix_seed({2, 1}));
}

TEST_CASE("bundled card set covers every keyword and card kind") {
  const CardSet& set = *default_card_set();
  std::set<Keyword> keywords;
  std::set<CardKind> kinds;
  std::map<PatronId, int> starters;
  auto note = [&](const EffectLeaf& l) { keywords.insert(l.keyword); };
  for (const auto& c : set.cards()) {
    kinds.insert(c.kind);
    if (c.kind == CardKind::Starter) ++starters[c.deck];
    if (c.is_agent()) CHECK(c.health > 0);
    for (const auto& e : c.effects) {
      if (!e) continue;
      note(e->left);
      if (e->op != EffectOp::Single) note(e->right);
    }
  }
  CHECK(keywords.size() == static_cast<std::size_t>(kKeywordCount));
  CHECK(kinds.size() == 5u);
  for (PatronId p : kDraftablePatrons) {
    CHECK(starters[p] == 1);
    CHECK(!set.tavern_cards(p).empty());
  }
  CHECK(set[set.gold()].name == "Gold");
  CHECK(set[set.writ_of_coin()].deck == PatronId::Treasury);
  CHECK(set[set.bewilderment()].deck == PatronId::Treasury);
}

TEST_CASE("card set loader validates documents") {
  SUBCASE("agent without health is rejected, naming card and field") {
    json bad = agent("brute", "Ansei", 3, 2, {{"1", leaf("POWER", 2)}});
    bad.erase("health");
    try {
      make_set({bad});
      FAIL("accepted an agent without health");
    } catch (const CardSetError& e) {
      const std::string what = e.what();
      CHECK(what.find("brute") != std::string::npos);
      CHECK(what.find("health") != std::string::npos);
    }
  }
  SUBCASE("gold as a cost-0 Treasury starter with COIN 1 is accepted") {
    auto set = make_set();
    const CardSpec& g = (*set)[set->gold()];
    CHECK(g.kind == CardKind::Starter);
    CHECK(g.cost == 0);
    REQUIRE(g.effects[0]);
    CHECK(*g.effects[0] == Effect::single(Keyword::Coin, 1));
  }
  SUBCASE("duplicate ids, unknown keywords and combo levels above four fail") {
    const json dup = card("starter_Ansei", "Ansei", "action", 1, json::object(), 3, 1);
    CHECK_THROWS_AS(make_set({dup}), CardSetError);
    CHECK_THROWS_AS(make_set({card("x", "Ansei", "action", 1, {{"1", leaf("TELEPORT", 1)}})}), CardSetError);
    CHECK_THROWS_AS(make_set({card("x", "Ansei", "action", 1, {{"5", leaf("COIN", 1)}})}), CardSetError);
    CHECK_THROWS_AS(load_card_set("not json"), CardSetError);
  }
}

TEST_CASE("new_match deals the opening position") {
  auto cards = default_card_set();
  for (std::uint64_t seed : {1ull, 2ull, 99ull}) {
    MatchState s = new_match(cards, kPatrons, seed);
    for (const auto& p : s.players) {
      CHECK(p.hand.size() == 5u);
      CHECK(p.draw_pile.size() == 5u);
      std::map<CardId, int> deck;
      for (const auto* z : {&p.hand, &p.draw_pile})
        for (const auto& c : *z) ++deck[c.card];
      CHECK(deck[cards->gold()] == 6);
      for (PatronId patron : kPatrons) CHECK(deck[cards->starter(patron)] == 1);
    }
    CHECK(s.tavern.size() == 5u);
    for (const auto& ps : s.patrons) CHECK(ps.favor == kNeutral);
    CHECK(s.players[0].patron_calls == 1);
    CHECK(s.players[0].coins == 0);
    CHECK(new_match(cards, kPatrons, seed) == s);

    // Opening moves: five plays and END_TURN, no patron affordable.
    const auto moves = legal_moves(s);
    CHECK(moves.size() == 6u);
    CHECK(count_type(moves, MoveType::PlayCard) == 5);
    CHECK(moves.back() == Move::end_turn());

    apply(s, Move::end_turn());
    CHECK(s.current == 1);
    CHECK(s.players[1].coins == 1);
  }
  CHECK_THROWS_AS(new_match(cards, {PatronId::Ansei, PatronId::Ansei, PatronId::Crows, PatronId::Pelin}, 1),
                  SetupError);
  CHECK_THROWS_AS(new_match(cards, {PatronId::Treasury, PatronId::Ansei, PatronId::Crows, PatronId::Pelin}, 1),
                  SetupError);
}

TEST_CASE("buying pays the cost, files the card and refills the tavern") {
  auto cards = make_set({card("shield", "Ansei", "action", 4, {{"1", leaf("POWER", 1)}}),
                         card("filler", "Crows", "action", 1, {{"1", leaf("COIN", 1)}})});
  MatchState s = blank(cards);
  const Uid target = put(s, s.tavern, "shield");
  for (int i = 0; i < 4; ++i) put(s, s.tavern, "filler");
  const Uid next = put(s, s.tavern_pile, "filler");
  s.players[0].coins = 6;
  EventLog log;
  apply(s, Move::buy_card(target), &log);
  CHECK(s.players[0].coins == 2);
  CHECK(find(s.players[0].cooldown, target));
  CHECK(s.tavern.size() == 5u);
  CHECK(find(s.tavern, next));
  CHECK(s.tavern_pile.empty());
  CHECK(check_step(s, s, {}) == "");

  s.players[0].coins = 0;
  CHECK_FALSE(is_legal(s, Move::buy_card(next)));
}

TEST_CASE("contracts resolve on purchase") {
  auto cards = make_set({card("bribe", "Treasury", "contract_action", 2, {{"1", leaf("POWER", 3)}}),
                         agent("sellsword", "Treasury", 3, 2, {{"1", leaf("COIN", 2)}}, false, true)});
  MatchState s = blank(cards);
  const Uid bribe = put(s, s.tavern, "bribe");
  const Uid sword = put(s, s.tavern, "sellsword");
  s.players[0].coins = 5;
  apply(s, Move::buy_card(bribe));
  CHECK(s.players[0].power == 3);
  CHECK(find(s.players[0].played, bribe));
  apply(s, Move::buy_card(sword));
  CHECK(find(s.players[0].board, sword));
  CHECK(s.players[0].coins == 2);  // 5 - 2 - 3 + 2

  EventLog log;
  apply(s, Move::end_turn(), &log);
  CHECK(find(s.removed, bribe));
  CHECK(find(s.players[0].board, sword));
  CHECK(count_tag(log, EventTag::Remove) == 1);
}

TEST_CASE("attacks spend min(power, health)") {
  auto cards = make_set({agent("ogre", "Crows", 4, 5, {{"1", leaf("POWER", 1)}}),
                         agent("merc", "Treasury", 4, 5, {{"1", leaf("POWER", 1)}}, false, true)});
  MatchState s = blank(cards);
  const Uid ogre = put(s, s.players[1].board, "ogre");

  SUBCASE("power 3 vs health 5") {
    s.players[0].power = 3;
    apply(s, Move::attack_agent(ogre));
    CHECK(s.players[0].power == 0);
    REQUIRE(find(s.players[1].board, ogre));
    CHECK(find(s.players[1].board, ogre)->health == 2);
  }
  SUBCASE("power 6 vs health 5 knocks out a regular agent") {
    s.players[0].power = 6;
    apply(s, Move::attack_agent(ogre));
    CHECK(s.players[0].power == 1);
    CHECK(s.players[1].board.empty());
    CHECK(find(s.players[1].cooldown, ogre));
  }
  SUBCASE("defeated contract agents leave the match") {
    const Uid merc = put(s, s.players[1].board, "merc");
    s.players[0].power = 5;
    apply(s, Move::attack_agent(merc));
    CHECK(find(s.removed, merc));
  }
  SUBCASE("no power, no attack") {
    CHECK(count_type(legal_moves(s), MoveType::AttackAgent) == 0);
  }
}

TEST_CASE("agents take a board slot and activate once per turn") {
  auto cards = make_set({agent("scout", "Pelin", 2, 3, {{"1", leaf("COIN", 1)}})});
  MatchState s = blank(cards);
  std::vector<Uid> scouts;
  for (int i = 0; i < 8; ++i) scouts.push_back(put(s, s.players[0].hand, "scout"));
  for (Uid u : scouts) apply(s, Move::play_card(u));
  CHECK(s.players[0].board.size() == 7u);
  CHECK(find(s.players[0].played, scouts.back()));
  CHECK(count_type(legal_moves(s), MoveType::ActivateAgent) == 0);
  apply(s, Move::end_turn());
  apply(s, Move::end_turn());
  CHECK(count_type(legal_moves(s), MoveType::ActivateAgent) == 7);
  apply(s, Move::activate_agent(scouts[0]));
  CHECK_FALSE(is_legal(s, Move::activate_agent(scouts[0])));
}

TEST_CASE("combo levels fire as cards of one deck accumulate") {
  auto cards = make_set({
      card("a1", "Ansei", "action", 1, {{"1", leaf("COIN", 1)}, {"3", leaf("POWER", 5)}}),
      card("a2", "Ansei", "action", 1, {{"1", leaf("COIN", 1)}, {"3", leaf("POWER", 7)}}),
      card("a3", "Ansei", "action", 1, {{"1", leaf("COIN", 1)}, {"2", leaf("COIN", 10)}, {"3", leaf("POWER", 90)}}),
      card("b1", "Crows", "action", 1, {{"1", leaf("PATRON", 1)}}),
      card("c1", "Hlaalu", "action", 1, {{"1", leaf("COIN", 1)}, {"2", leaf("POWER", 9)}}),
      card("c2", "Hlaalu", "action", 1, {{"1", leaf("COIN", 2)}}),
  });

  SUBCASE("third card: both earlier level-3 slots plus its own 1..3") {
    MatchState s = blank(cards);
    for (const char* id : {"a1", "b1", "a2", "a3"}) put(s, s.players[0].hand, id);
    while (!s.players[0].hand.empty()) apply(s, Move::play_card(s.players[0].hand.front().uid));
    CHECK(s.players[0].coins == 13);
    CHECK(s.players[0].power == 102);
  }
  SUBCASE("first card fires only its play effect") {
    MatchState s = blank(cards);
    put(s, s.players[0].hand, "c1");
    apply(s, Move::play_card(s.players[0].hand.front().uid));
    CHECK(s.players[0].coins == 1);
    CHECK(s.players[0].power == 0);
  }
  SUBCASE("second card without a level-2 slot still fires the first card's") {
    MatchState s = blank(cards);
    put(s, s.players[0].hand, "c1");
    put(s, s.players[0].hand, "c2");
    while (!s.players[0].hand.empty()) apply(s, Move::play_card(s.players[0].hand.front().uid));
    CHECK(s.players[0].coins == 3);
    CHECK(s.players[0].power == 9);
  }
}

TEST_CASE("combo property: every defined slot up to the counter fires once, in any play order") {
  // Slot (card i, level l) gives POWER 10 * (i + 1) + l, so each firing is identifiable.
  std::vector<json> extra;
  const std::vector<std::string> decks = {"Ansei", "Ansei", "Ansei", "Ansei", "Ansei", "Crows", "Crows", "Crows"};
  Rng pattern(3);
  std::vector<std::array<bool, 4>> defined(decks.size());
  for (std::size_t i = 0; i < decks.size(); ++i) {
    json effects = json::object();
    for (int l = 1; l <= 4; ++l) {
      defined[i][l - 1] = l == 1 || pattern.below(2) == 1;
      if (defined[i][l - 1]) effects[std::to_string(l)] = leaf("POWER", 10 * static_cast<int>(i + 1) + l);
    }
    extra.push_back(card("k" + std::to_string(i), decks[i], "action", 1, effects));
  }
  auto cards = make_set(extra);

  Rng order_rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    MatchState s = blank(cards);
    std::vector<std::size_t> order(decks.size());
    std::iota(order.begin(), order.end(), 0);
    order_rng.shuffle(std::span(order));
    const std::size_t n = 1 + order_rng.below(decks.size());
    order.resize(n);
    std::map<Uid, std::size_t> card_of;
    for (std::size_t i : order) card_of[put(s, s.players[0].hand, "k" + std::to_string(i))] = i;

    EventLog log;
    for (std::size_t i : order) {
      const Uid uid = std::find_if(card_of.begin(), card_of.end(), [i](auto& kv) { return kv.second == i; })->first;
      apply(s, Move::play_card(uid), &log);
    }

    std::map<std::string, int> counter;
    for (std::size_t i : order) ++counter[decks[i]];
    std::multiset<std::pair<Uid, int>> expected, fired;
    for (auto [uid, i] : card_of)
      for (int l = 1; l <= std::min(counter[decks[i]], 4); ++l)
        if (defined[i][l - 1]) expected.insert({uid, 10 * static_cast<int>(i + 1) + l});
    for (const auto& e : log)
      if (e.tag == EventTag::Effect) fired.insert({e.uid, e.amount});
    REQUIRE(fired == expected);
  }
}

TEST_CASE("patron powers") {
  auto cards = make_set({card("relic", "Pelin", "action", 6, {{"1", leaf("COIN", 1)}}),
                         card("trinket", "Crows", "action", 2, {{"1", leaf("COIN", 1)}}),
                         agent("guard", "Pelin", 3, 2, {{"1", leaf("POWER", 1)}})});

  SUBCASE("Crows turns coins into coins - 1 power") {
    MatchState s = blank(cards);
    s.players[0].coins = 5;
    apply(s, Move::activate_patron(PatronId::Crows));
    CHECK(s.players[0].coins == 0);
    CHECK(s.players[0].power == 4);
    CHECK(s.patrons[1].favor == 0);
    CHECK(s.players[0].patron_calls == 0);
    CHECK(count_type(legal_moves(s), MoveType::ActivatePatron) == 0);
  }
  SUBCASE("Hlaalu sacrifices for cost - 1 prestige") {
    MatchState s = blank(cards);
    const Uid relic = put(s, s.players[0].hand, "relic");
    put(s, s.players[0].hand, "gold");
    apply(s, Move::activate_patron(PatronId::Hlaalu));
    CHECK_FALSE(s.choice);  // gold costs nothing, so the relic is the only option
    CHECK(s.players[0].prestige == 5);
    CHECK(find(s.removed, relic));
  }
  SUBCASE("Hlaalu with several candidates asks") {
    MatchState s = blank(cards);
    put(s, s.players[0].hand, "relic");
    const Uid trinket = put(s, s.players[0].hand, "trinket");
    apply(s, Move::activate_patron(PatronId::Hlaalu));
    REQUIRE(s.choice);
    CHECK(s.choice->kind == ChoiceKind::HlaaluSacrifice);
    const auto moves = legal_moves(s);
    CHECK(moves.size() == 2u);
    apply(s, Move::make_choice({1}));
    CHECK(s.players[0].prestige == 1);
    CHECK(find(s.removed, trinket));
  }
  SUBCASE("Treasury needs two coins and creates a Writ of Coin") {
    MatchState s = blank(cards);
    const Uid gold = put(s, s.players[0].hand, "gold");
    s.players[0].coins = 1;
    const MatchState before = s;
    CHECK_FALSE(is_legal(s, Move::activate_patron(PatronId::Treasury)));
    CHECK_THROWS_AS(apply(s, Move::activate_patron(PatronId::Treasury)), IllegalMoveError);
    CHECK(s == before);
    s.players[0].coins = 2;
    EventLog log;
    apply(s, Move::activate_patron(PatronId::Treasury), &log);
    CHECK(find(s.removed, gold));
    REQUIRE(s.players[0].cooldown.size() == 1u);
    CHECK(s.players[0].cooldown[0].card == cards->writ_of_coin());
    CHECK(count_tag(log, EventTag::Create) == 1);
    for (const auto& ps : s.patrons) CHECK(ps.favor == kNeutral);
  }
  SUBCASE("Pelin returns an agent from cooldown to the top of the draw pile") {
    MatchState s = blank(cards);
    const Uid guard = put(s, s.players[0].cooldown, "guard");
    put(s, s.players[0].cooldown, "gold");
    s.players[0].power = 3;
    apply(s, Move::activate_patron(PatronId::Pelin));
    CHECK(s.players[0].power == 1);
    REQUIRE(!s.players[0].draw_pile.empty());
    CHECK(s.players[0].draw_pile.back().uid == guard);
  }
  SUBCASE("Ansei favour pays a coin at turn start; a favouring patron is not offered") {
    MatchState s = blank(cards);
    s.players[0].power = 2;
    apply(s, Move::activate_patron(PatronId::Ansei));
    CHECK(s.patrons[0].favor == 0);
    apply(s, Move::end_turn());
    CHECK(s.players[1].coins == 1);  // only the second-player coin
    apply(s, Move::end_turn());
    CHECK(s.players[0].coins == 1);
    s.players[0].power = 2;
    CHECK_FALSE(is_legal(s, Move::activate_patron(PatronId::Ansei)));
  }
  SUBCASE("opponent favour shifts to neutral first") {
    MatchState s = blank(cards);
    s.patrons[1].favor = 1;
    s.players[0].coins = 1;
    apply(s, Move::activate_patron(PatronId::Crows));
    CHECK(s.patrons[1].favor == kNeutral);
  }
  SUBCASE("Rajhin and Red Eagle") {
    MatchState s = blank(cards, {PatronId::Rajhin, PatronId::RedEagle, PatronId::Hlaalu, PatronId::Pelin});
    s.players[0].coins = 3;
    apply(s, Move::activate_patron(PatronId::Rajhin));
    REQUIRE(s.players[1].cooldown.size() == 1u);
    CHECK(s.players[1].cooldown[0].card == cards->bewilderment());
    apply(s, Move::end_turn());
    apply(s, Move::end_turn());
    const Uid top = put(s, s.players[0].draw_pile, "gold");
    s.players[0].power = 2;
    apply(s, Move::activate_patron(PatronId::RedEagle));
    CHECK(find(s.players[0].hand, top));
  }
}

TEST_CASE("end of turn") {
  auto cards = make_set({agent("wall", "Pelin", 3, 2, {{"1", leaf("POWER", 1)}}, true),
                         card("curse", "Rajhin", "action", 1, {{"1", leaf("DISCARD", 1)}})});
  SUBCASE("leftover power becomes prestige") {
    MatchState s = blank(cards);
    s.players[0].power = 3;
    s.players[0].coins = 4;
    apply(s, Move::end_turn());
    CHECK(s.players[0].prestige == 3);
    CHECK(s.players[0].power == 0);
    CHECK(s.players[0].coins == 0);
  }
  SUBCASE("taunt agents absorb power first") {
    MatchState s = blank(cards);
    const Uid wall = put(s, s.players[1].board, "wall");
    s.players[0].power = 3;
    apply(s, Move::end_turn());
    CHECK(s.players[0].prestige == 1);
    CHECK(find(s.players[1].cooldown, wall));
  }
  SUBCASE("hand and played cards go to cooldown, then five are drawn") {
    MatchState s = blank(cards);
    for (int i = 0; i < 3; ++i) put(s, s.players[0].hand, "gold");
    for (int i = 0; i < 4; ++i) put(s, s.players[0].draw_pile, "gold");
    apply(s, Move::play_card(s.players[0].hand[0].uid));
    EventLog log;
    apply(s, Move::end_turn(), &log);
    CHECK(s.players[0].hand.size() == 5u);
    CHECK(s.players[0].played.empty());
    CHECK(s.players[0].draw_pile.size() + s.players[0].cooldown.size() == 2u);
    CHECK(count_tag(log, EventTag::Shuffle) == 1);
  }
  SUBCASE("owed discards open the incoming player's turn") {
    MatchState s = blank(cards);
    put(s, s.players[0].hand, "curse");
    for (int i = 0; i < 3; ++i) put(s, s.players[1].hand, "gold");
    apply(s, Move::play_card(s.players[0].hand[0].uid));
    CHECK(s.players[1].discard_owed == 1);
    apply(s, Move::end_turn());
    REQUIRE(s.choice);
    CHECK(s.choice->kind == ChoiceKind::Discard);
    CHECK(s.choice->seat == 1);
    const auto moves = legal_moves(s);
    CHECK(moves.size() == 3u);
    CHECK(count_type(moves, MoveType::MakeChoice) == 3);
    apply(s, moves[0]);
    CHECK(s.players[1].hand.size() == 2u);
    CHECK(s.players[1].cooldown.size() == 1u);
  }
}

TEST_CASE("terminal conditions") {
  auto cards = make_set({card("relic", "Pelin", "action", 6, {{"1", leaf("COIN", 1)}})});
  SUBCASE("fourth patron mid-turn wins at once") {
    MatchState s = blank(cards);
    put(s, s.players[0].hand, "relic");
    put(s, s.players[0].hand, "relic");
    s.patrons[0].favor = 0;
    s.patrons[1].favor = 0;
    s.patrons[3].favor = 0;
    apply(s, Move::activate_patron(PatronId::Hlaalu));
    REQUIRE(s.outcome);
    CHECK(*s.outcome == Outcome{0, EndReason::PatronFavor});
    CHECK(legal_moves(s).empty());
    CHECK(check_terminal(s) == s.outcome);
  }
  SUBCASE("45 then 44 ends in sudden death for the leader") {
    MatchState s = blank(cards);
    s.players[0].power = 45;
    apply(s, Move::end_turn());
    CHECK(s.mode == EndgameMode::SuddenDeath);
    CHECK_FALSE(s.outcome);
    s.players[1].power = 44;
    apply(s, Move::end_turn());
    REQUIRE(s.outcome);
    CHECK(*s.outcome == Outcome{0, EndReason::SuddenDeath});
  }
  SUBCASE("overtaking in sudden death passes the lead") {
    MatchState s = blank(cards);
    s.players[0].power = 45;
    apply(s, Move::end_turn());
    s.players[1].power = 46;
    apply(s, Move::end_turn());
    CHECK_FALSE(s.outcome);
    CHECK(s.leader == 1);
    apply(s, Move::end_turn());
    REQUIRE(s.outcome);
    CHECK(s.outcome->winner == 1);
  }
  SUBCASE("80 prestige wins outright") {
    MatchState s = blank(cards);
    s.players[0].prestige = 70;
    s.players[0].power = 10;
    apply(s, Move::end_turn());
    REQUIRE(s.outcome);
    CHECK(*s.outcome == Outcome{0, EndReason::Prestige80});
  }
  SUBCASE("turn 501 is a draw") {
    MatchState s = blank(cards);
    s.turn = 500;
    apply(s, Move::end_turn());
    REQUIRE(s.outcome);
    CHECK(*s.outcome == Outcome{kDraw, EndReason::TurnLimitDraw});
  }
}

TEST_CASE("keyword effects") {
  auto cards = make_set({card("cheap1", "Crows", "action", 1, json::object()),
                         card("cheap2", "Crows", "action", 2, json::object()),
                         card("cheap3", "Crows", "action", 3, json::object()),
                         card("dear", "Crows", "action", 5, json::object()),
                         agent("medic", "Pelin", 2, 4, {{"1", leaf("HEAL", 2)}})});

  SUBCASE("DRAW reshuffles mid-draw") {
    MatchState s = blank(cards);
    put(s, s.players[0].draw_pile, "gold");
    for (int i = 0; i < 4; ++i) put(s, s.players[0].cooldown, "gold");
    EventLog log;
    rules::keyword_effect(s, Keyword::Draw, 2, 0, &log);
    CHECK(s.players[0].hand.size() == 2u);
    CHECK(s.players[0].draw_pile.size() == 3u);
    CHECK(s.players[0].cooldown.empty());
    CHECK(count_tag(log, EventTag::Shuffle) == 1);
  }
  SUBCASE("OPPLOSEPR floors at zero") {
    MatchState s = blank(cards);
    s.players[1].prestige = 2;
    rules::keyword_effect(s, Keyword::OppLosePrestige, 3, 0);
    CHECK(s.players[1].prestige == 0);
  }
  SUBCASE("KNOCKOUT without targets does nothing") {
    MatchState s = blank(cards);
    const MatchState before = s;
    rules::keyword_effect(s, Keyword::Knockout, 1, 0);
    CHECK_FALSE(s.choice);
    CHECK(s == before);
  }
  SUBCASE("ACQUIRE offers the affordable tavern cards") {
    MatchState s = blank(cards);
    const Uid c1 = put(s, s.tavern, "cheap1");
    put(s, s.tavern, "dear");
    put(s, s.tavern, "cheap2");
    put(s, s.tavern, "cheap3");
    put(s, s.tavern, "dear");
    rules::keyword_effect(s, Keyword::Acquire, 3, 0);
    REQUIRE(s.choice);
    CHECK(s.choice->options.size() == 3u);
    const auto moves = legal_moves(s);
    CHECK(moves.size() == 3u);
    for (const auto& m : moves) {
      CHECK(m.type == MoveType::MakeChoice);
      CHECK(m.pick_count == 1);
    }
    apply(s, moves[0]);
    CHECK(find(s.players[0].cooldown, c1));
    CHECK(s.players[0].coins == 0);
    CHECK(s.tavern.size() == 4u);
  }
  SUBCASE("HEAL caps at max health") {
    MatchState s = blank(cards);
    const Uid medic = put(s, s.players[0].board, "medic");
    s.players[0].board[0].health = 1;
    rules::keyword_effect(s, Keyword::Heal, 2, medic);
    CHECK(s.players[0].board[0].health == 3);
    rules::keyword_effect(s, Keyword::Heal, 5, medic);
    CHECK(s.players[0].board[0].health == 4);
  }
  SUBCASE("PATRON adds a call") {
    MatchState s = blank(cards);
    rules::keyword_effect(s, Keyword::Patron, 1, 0);
    CHECK(s.players[0].patron_calls == 2);
  }
  SUBCASE("DESTROY may pick none; RETURN fixes the order") {
    MatchState s = blank(cards);
    put(s, s.players[0].played, "gold");
    put(s, s.players[0].played, "gold");
    rules::keyword_effect(s, Keyword::Destroy, 1, 0);
    REQUIRE(s.choice);
    const auto moves = legal_moves(s);
    CHECK(moves.size() == 3u);  // none, first, second
    CHECK(moves[0].pick_count == 0);
    apply(s, moves[0]);
    CHECK(s.players[0].played.size() == 2u);

    const Uid a = put(s, s.players[0].cooldown, "cheap1");
    const Uid b = put(s, s.players[0].cooldown, "cheap2");
    rules::keyword_effect(s, Keyword::Return, 2, 0);
    REQUIRE(s.choice);
    CHECK(legal_moves(s).size() == 2u);  // two orders
    apply(s, Move::make_choice({1, 0}));
    REQUIRE(s.players[0].draw_pile.size() == 2u);
    CHECK(s.players[0].draw_pile.back().uid == b);
    CHECK(s.players[0].draw_pile.front().uid == a);
  }
  SUBCASE("OR composites ask which branch") {
    auto set = make_set({card("fork", "Crows", "action", 1, {{"1", either(leaf("COIN", 3), leaf("POWER", 2))}}),
                         card("pair", "Crows", "action", 1, {{"1", both(leaf("COIN", 1), leaf("POWER", 1))}})});
    MatchState s = blank(set);
    put(s, s.players[0].hand, "fork");
    put(s, s.players[0].hand, "pair");
    apply(s, Move::play_card(s.players[0].hand[0].uid));
    REQUIRE(s.choice);
    CHECK(s.choice->kind == ChoiceKind::EffectBranch);
    CHECK(legal_moves(s).size() == 2u);
    apply(s, Move::make_choice({1}));
    CHECK(s.players[0].power == 2);
    apply(s, Move::play_card(s.players[0].hand[0].uid));
    CHECK(s.players[0].coins == 1);
    CHECK(s.players[0].power == 3);
  }
}

TEST_CASE("player views hide ordering only") {
  auto cards = make_set({card("ambush", "Rajhin", "action", 1, json::object())});
  MatchState s = blank(cards);
  put(s, s.players[0].draw_pile, "gold");
  put(s, s.players[0].draw_pile, "writ_of_coin");
  put(s, s.players[0].draw_pile, "ambush");
  for (int i = 0; i < 5; ++i) put(s, s.players[1].hand, i % 2 ? "gold" : "ambush");
  for (int i = 0; i < 3; ++i) put(s, s.players[1].draw_pile, "writ_of_coin");
  put(s, s.tavern, "ambush");

  const PlayerView v0 = to_player_view(s, 0);
  const PlayerView v1 = to_player_view(s, 1);
  std::vector<std::string> names;
  for (const auto& c : v0.self().draw_pile) names.push_back(cards->cards()[c.card].name);
  CHECK(names == std::vector<std::string>{"ambush", "gold", "writ_of_coin"});
  CHECK(v0.opponent_pool().size() == 8u);
  CHECK(v0.opponent().hand.empty());
  CHECK(v0.opponent_hand_size == 5);
  CHECK(v0.state.tavern == v1.state.tavern);

  // Reordering hidden cards leaves the view unchanged.
  MatchState t = s;
  std::reverse(t.players[0].draw_pile.begin(), t.players[0].draw_pile.end());
  std::swap(t.players[1].hand[0], t.players[1].draw_pile[0]);
  CHECK(to_player_view(t, 0) == v0);
}

TEST_CASE("seed_view fabricates a consistent full state") {
  auto cards = default_card_set();
  Rng rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    MatchState s = new_match(cards, kPatrons, rng.next());
    const int steps = static_cast<int>(rng.below(80));
    for (int i = 0; i < steps && !s.outcome; ++i) {
      const auto moves = legal_moves(s);
      apply(s, moves[rng.below(moves.size())]);
    }
    if (s.outcome) continue;
    const int seat = static_cast<int>(rng.below(2));
    const PlayerView view = to_player_view(s, seat);
    const std::uint64_t seed = rng.next();
    const SeededGameState a = seed_view(view, seed);
    CHECK(a == seed_view(view, seed));

    const PlayerBoard& opp = a.state().players[1 - seat];
    CHECK(opp.hand.size() == static_cast<std::size_t>(view.opponent_hand_size));
    std::multiset<CardId> pool, fabricated, truth;
    for (const auto& c : view.opponent_pool()) pool.insert(c.card);
    for (const auto* z : {&opp.hand, &opp.draw_pile})
      for (const auto& c : *z) fabricated.insert(c.card);
    for (const auto* z : {&s.players[1 - seat].hand, &s.players[1 - seat].draw_pile})
      for (const auto& c : *z) truth.insert(c.card);
    CHECK(pool == fabricated);
    CHECK(pool == truth);
    CHECK(to_player_view(a.state(), seat) == view);

    // The fabricated state plays out like any other.
    MatchState f = a.state();
    for (int i = 0; i < 30 && !f.outcome; ++i) {
      const auto moves = legal_moves(f);
      MatchState before = f;
      EventLog log;
      apply(f, moves[rng.below(moves.size())], &log);
      REQUIRE(check_step(before, f, log) == "");
    }
  }
}

TEST_CASE("small fuzz: random playthroughs keep every invariant") {
  auto cards = default_card_set();
  Rng rng(2024);
  std::vector<Move> moves;
  for (int game = 0; game < 300; ++game) {
    std::array<PatronId, 4> patrons{};
    auto pool = std::vector<PatronId>(kDraftablePatrons.begin(), kDraftablePatrons.end());
    rng.shuffle(std::span(pool));
    std::copy_n(pool.begin(), 4, patrons.begin());
    MatchState s = new_match(cards, patrons, rng.next());
    while (!s.outcome) {
      legal_moves(s, moves);
      const Move m = moves[rng.below(moves.size())];
      MatchState before = s;
      EventLog log;
      apply(s, m, &log);
      const std::string err = check_step(before, s, log);
      if (!err.empty()) FAIL_CHECK(err << " after " << to_string(m) << " in game " << game);
      if (!err.empty()) break;
    }
  }
}
