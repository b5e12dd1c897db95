#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "json.hpp"
#include "tribute/agents.hpp"

namespace tribute {

SearchConfig SearchConfig::parse(std::string_view json_text) {
  using nlohmann::json;
  json doc = json::parse(json_text);
  if (!doc.is_object()) throw std::invalid_argument("search config must be a JSON object");
  SearchConfig c;
  for (const auto& [key, value] : doc.items()) {
    auto number = [&]() {
      if (!value.is_number()) throw std::invalid_argument("search config '" + key + "' must be a number");
      return value.get<double>();
    };
    auto integer = [&](int lo) {
      if (!value.is_number_integer() || value.get<long long>() < lo)
        throw std::invalid_argument("search config '" + key + "' must be an integer >= " + std::to_string(lo));
      return value.get<int>();
    };
    if (key == "beam_width") c.beam_width = integer(1);
    else if (key == "max_depth") c.max_depth = integer(1);
    else if (key == "annealing_start") c.annealing_start = number();
    else if (key == "annealing_decay") c.annealing_decay = number();
    else if (key == "exploration") c.exploration = number();
    else if (key == "end_turn_probability") c.end_turn_probability = number();
    else if (key == "iterations") c.iterations = integer(1);
    else if (key == "reuse_plan") {
      if (!value.is_boolean()) throw std::invalid_argument("search config 'reuse_plan' must be a boolean");
      c.reuse_plan = value.get<bool>();
    } else {
      throw std::invalid_argument("unknown search config key '" + key + "'");
    }
  }
  if (c.end_turn_probability < 0 || c.end_turn_probability > 1)
    throw std::invalid_argument("search config 'end_turn_probability' must be in [0, 1]");
  return c;
}

namespace policy {

Move random_move(std::span<const Move> legal, Rng& rng) {
  if (legal.empty()) throw std::invalid_argument("random_move: no legal moves");
  std::size_t alternatives = 0;
  for (const auto& m : legal) alternatives += m.type != MoveType::EndTurn;
  if (alternatives == 0) return legal.front();
  auto k = rng.below(alternatives);
  for (const auto& m : legal) {
    if (m.type == MoveType::EndTurn) continue;
    if (k-- == 0) return m;
  }
  return legal.front();
}

Move damped_random_move(std::span<const Move> legal, Rng& rng, double end_turn_probability) {
  if (legal.empty()) throw std::invalid_argument("damped_random_move: no legal moves");
  const Move* end = nullptr;
  for (const auto& m : legal)
    if (m.type == MoveType::EndTurn) end = &m;
  if (end && legal.size() > 1 && rng.uniform() < end_turn_probability) return *end;
  return random_move(legal, rng);
}

namespace {

// Equivalence key for a move: moves with equal keys lead to states that differ
// only in card uids.
struct MoveKey {
  MoveType type;
  std::uint16_t a = 0;
  std::int16_t b = 0;
  std::uint8_t c = 0;
  std::array<CardId, kMaxPicks> picks{};
  friend bool operator==(const MoveKey&, const MoveKey&) = default;
};

const CardInstance* find_uid(const std::vector<CardInstance>& zone, Uid uid) {
  for (const auto& c : zone)
    if (c.uid == uid) return &c;
  return nullptr;
}

CardId card_of(const MatchState& s, Uid uid) {
  for (const auto& p : s.players)
    for (const auto* zone : {&p.hand, &p.played, &p.board, &p.cooldown, &p.draw_pile})
      if (const auto* c = find_uid(*zone, uid)) return c->card;
  for (const auto* zone : {&s.tavern, &s.tavern_pile, &s.removed})
    if (const auto* c = find_uid(*zone, uid)) return c->card;
  return kNoCard;
}

MoveKey key_of(const MatchState& s, const Move& m) {
  MoveKey k{m.type};
  switch (m.type) {
    case MoveType::PlayCard:
    case MoveType::BuyCard:
      k.a = card_of(s, m.target);
      break;
    case MoveType::ActivateAgent:
    case MoveType::AttackAgent: {
      const auto& board = m.type == MoveType::ActivateAgent ? s.me().board : s.opponent().board;
      const CardInstance* c = find_uid(board, m.target);
      k.a = c ? c->card : kNoCard;
      k.b = c ? c->health : 0;
      break;
    }
    case MoveType::ActivatePatron:
    case MoveType::EndTurn:
      k.a = m.target;
      break;
    case MoveType::MakeChoice: {
      const PendingChoice& ch = *s.choice;
      k.c = m.pick_count;
      if (ch.kind == ChoiceKind::EffectBranch) {
        for (int i = 0; i < m.pick_count; ++i) k.picks[i] = m.picks[i];
        break;
      }
      for (int i = 0; i < m.pick_count; ++i) k.picks[i] = card_of(s, ch.options[m.picks[i]]);
      if (!ch.ordered) std::sort(k.picks.begin(), k.picks.begin() + m.pick_count);
      break;
    }
  }
  return k;
}

}  // namespace

std::vector<Move> distinct_moves(const MatchState& state, std::span<const Move> legal) {
  std::vector<Move> out;
  std::vector<MoveKey> seen;
  out.reserve(legal.size());
  seen.reserve(legal.size());
  for (const auto& m : legal) {
    MoveKey k = key_of(state, m);
    if (std::find(seen.begin(), seen.end(), k) != seen.end()) continue;
    seen.push_back(k);
    out.push_back(m);
  }
  return out;
}

double uct_score(double child_max, double child_visits, double parent_visits, double exploration) {
  if (child_visits <= 0) return std::numeric_limits<double>::infinity();
  return child_max + exploration * std::sqrt(std::log(std::max(parent_visits, 1.0)) / child_visits);
}

namespace {

int own_seat(const MatchState& s) { return s.choice ? s.choice->seat : s.current; }

// True once the searching seat's turn is over.
bool turn_over(const MatchState& s, int seat, int turn) { return s.finished() || s.turn != turn || s.current != seat; }

// Index of each distinct move within `candidates`.
std::vector<std::size_t> distinct_indices(const MatchState& state, std::span<const Move> candidates) {
  std::vector<std::size_t> idx;
  std::vector<MoveKey> seen;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    MoveKey k = key_of(state, candidates[i]);
    if (std::find(seen.begin(), seen.end(), k) != seen.end()) continue;
    seen.push_back(k);
    idx.push_back(i);
  }
  return idx;
}

struct Exhaustive {
  const Evaluator& eval;
  int seat;
  int turn;
  std::size_t node_limit;
  std::size_t nodes = 0;

  double best_after(const MatchState& s) {
    if (turn_over(s, seat, turn)) return eval(s, seat);
    if (++nodes > node_limit) throw std::runtime_error("exhaustive_turn_search: node limit exceeded");
    std::vector<Move> moves = legal_moves(s);
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& m : moves) {
      MatchState next = s;
      apply(next, m);
      best = std::max(best, best_after(next));
    }
    return best;
  }
};

}  // namespace

TurnSearchResult exhaustive_turn_search(const MatchState& state, std::span<const Move> candidates,
                                        const Evaluator& eval, std::size_t node_limit) {
  TurnSearchResult r;
  Exhaustive ex{eval, own_seat(state), state.turn, node_limit};
  r.values.resize(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    MatchState next = state;
    apply(next, candidates[i]);
    r.values[i] = ex.best_after(next);
    if (r.values[i] > r.values[r.best_index]) r.best_index = i;
  }
  r.nodes = ex.nodes;
  return r;
}

// -- MCTS ---------------------------------------------------------------------

namespace {

struct Node {
  MatchState state;
  std::vector<Move> moves;  // distinct legal moves
  std::vector<int> children;
  std::size_t next_untried = 0;
  MaxStat stat;
  bool terminal = false;
  bool exhausted = false;
  int parent = -1;
  Move move;  // from parent
};

// Greedy own-turn playout: at each step take the move with the best immediate
// evaluation (lowest index on ties) until the turn ends.
double greedy_playout(MatchState s, int seat, int turn, const Evaluator& eval, int max_steps,
                      std::vector<Move>* line) {
  std::vector<Move> legal;
  for (int step = 0; !turn_over(s, seat, turn); ++step) {
    legal_moves(s, legal);
    Move chosen = Move::end_turn();
    if (step < max_steps) {
      auto moves = distinct_moves(s, legal);
      double best = -std::numeric_limits<double>::infinity();
      MatchState best_state;
      bool have = false;
      for (const auto& m : moves) {
        MatchState next = s;
        apply(next, m);
        const double v = eval(next, seat);
        if (!have || v > best) {
          best = v;
          chosen = m;
          best_state = std::move(next);
          have = true;
        }
      }
      if (line) line->push_back(chosen);
      s = std::move(best_state);
      continue;
    }
    if (s.choice) chosen = legal.front();
    if (line) line->push_back(chosen);
    apply(s, chosen);
  }
  return eval(s, seat);
}

double normalise(double v, double lo, double hi) {
  if (v == std::numeric_limits<double>::infinity()) return 1.0;
  if (v == -std::numeric_limits<double>::infinity()) return 0.0;
  if (!(hi > lo)) return 0.5;
  return (v - lo) / (hi - lo);
}

}  // namespace

TurnSearchResult mcts_search(const MatchState& state, std::span<const Move> candidates, const Evaluator& eval,
                             const SearchConfig& config, Rng& /*rng*/, Clock::time_point deadline,
                             std::vector<Move>* best_line) {
  TurnSearchResult result;
  result.values.assign(candidates.size(), -std::numeric_limits<double>::infinity());
  if (candidates.size() <= 1) {
    if (best_line) best_line->assign(candidates.begin(), candidates.end());
    return result;
  }
  const int seat = own_seat(state);
  const int turn = state.turn;
  const auto root_idx = distinct_indices(state, candidates);

  std::vector<Node> tree;
  tree.reserve(static_cast<std::size_t>(std::min(config.iterations, 4096)) + 1);
  tree.emplace_back();
  tree[0].state = state;
  for (auto i : root_idx) tree[0].moves.push_back(candidates[i]);

  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  double best_value = -std::numeric_limits<double>::infinity();
  std::size_t best_root_move = root_idx.size();
  std::vector<Move> line, best;

  for (int it = 0; it < config.iterations && !tree[0].exhausted; ++it) {
    if (it > 0 && Clock::now() > deadline) break;
    line.clear();
    int node = 0;
    // Selection.
    while (tree[node].next_untried >= tree[node].moves.size() && !tree[node].terminal) {
      const Node& n = tree[node];
      int pick = -1;
      double pick_score = -std::numeric_limits<double>::infinity();
      for (int c : n.children) {
        const Node& ch = tree[c];
        if (ch.exhausted) continue;
        const double score = uct_score(normalise(ch.stat.max_value, lo, hi), ch.stat.visits, n.stat.visits,
                                       config.exploration);
        if (pick < 0 || score > pick_score) {
          pick = c;
          pick_score = score;
        }
      }
      if (pick < 0) break;  // cannot happen: exhausted nodes are never entered
      node = pick;
      line.push_back(tree[node].move);
    }

    double value;
    int leaf = node;
    if (tree[node].terminal) {
      value = eval(tree[node].state, seat);
    } else {
      // Expansion.
      Node child;
      child.move = tree[node].moves[tree[node].next_untried++];
      child.parent = node;
      child.state = tree[node].state;
      apply(child.state, child.move);
      line.push_back(child.move);
      if (turn_over(child.state, seat, turn)) {
        child.terminal = true;
        value = eval(child.state, seat);
      } else {
        legal_moves(child.state, child.moves);
        child.moves = distinct_moves(child.state, child.moves);
        value = greedy_playout(child.state, seat, turn, eval, config.max_depth, &line);
      }
      leaf = static_cast<int>(tree.size());
      tree[node].children.push_back(leaf);
      tree.push_back(std::move(child));
    }
    ++result.nodes;

    if (std::isfinite(value)) {
      lo = std::min(lo, value);
      hi = std::max(hi, value);
    }
    // Root move of this line, for tie-breaking on the lowest candidate index.
    const std::size_t root_move = static_cast<std::size_t>(
        std::find_if(tree[0].moves.begin(), tree[0].moves.end(), [&](const Move& m) { return m == line.front(); }) -
        tree[0].moves.begin());
    if (value > best_value || (value == best_value && root_move < best_root_move) || best.empty()) {
      best_value = value;
      best_root_move = root_move;
      best = line;
    }

    // Backup and exhaustion.
    if (tree[leaf].terminal) tree[leaf].exhausted = true;
    for (int n = leaf; n >= 0; n = tree[n].parent) {
      Node& nd = tree[n];
      nd.stat.backup(value);
      if (!nd.exhausted && nd.next_untried >= nd.moves.size() && !nd.terminal) {
        bool all = true;
        for (int c : nd.children) all = all && tree[c].exhausted;
        nd.exhausted = all;
      }
    }
  }

  for (std::size_t k = 0; k < tree[0].children.size(); ++k) {
    const Node& ch = tree[tree[0].children[k]];
    result.values[root_idx[k]] = ch.stat.max_value;
  }
  // Highest max among root children; ties to the lowest candidate index.
  result.best_index = root_idx.front();
  for (std::size_t k = 0; k < tree[0].children.size(); ++k) {
    const std::size_t ci = root_idx[k];
    if (result.values[ci] > result.values[result.best_index]) result.best_index = ci;
  }
  if (best_line) {
    if (!best.empty() && best.front() == candidates[result.best_index])
      *best_line = best;
    else
      best_line->assign(1, candidates[result.best_index]);
  }
  return result;
}

// -- Beam search --------------------------------------------------------------

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  std::uint64_t x = h ^ (v + 0x9e3779b97f4a7c15ull);
  return splitmix64(x);
}

// Signature of a state up to card uids; transposed lines collapse onto one entry.
std::uint64_t signature(const MatchState& s) {
  std::uint64_t h = mix(0, static_cast<std::uint64_t>(s.current) << 32 | static_cast<std::uint32_t>(s.turn));
  auto card = [](std::uint64_t zone, const CardInstance& c) {
    std::uint64_t x = zone << 48 | std::uint64_t(c.card) << 24 | std::uint64_t(std::uint16_t(c.health)) << 1 | c.activated;
    return splitmix64(x);
  };
  auto unordered = [&](std::uint64_t zone, const std::vector<CardInstance>& cards) {
    std::uint64_t sum = 0;
    for (const auto& c : cards) sum += card(zone, c);
    h = mix(h, sum);
  };
  auto ordered = [&](std::uint64_t zone, const std::vector<CardInstance>& cards) {
    for (const auto& c : cards) h = mix(h, card(zone, c));
    h = mix(h, cards.size());
  };
  for (std::size_t p = 0; p < 2; ++p) {
    const PlayerBoard& b = s.players[p];
    h = mix(h, std::uint64_t(std::uint32_t(b.coins)) << 32 | std::uint32_t(b.power));
    h = mix(h, std::uint64_t(std::uint32_t(b.prestige)) << 32 | std::uint32_t(b.patron_calls));
    h = mix(h, std::uint64_t(b.discard_owed));
    const std::uint64_t z = p * 8;
    unordered(z + 1, b.hand);
    ordered(z + 2, b.draw_pile);
    unordered(z + 3, b.cooldown);
    unordered(z + 4, b.played);
    unordered(z + 5, b.board);
  }
  ordered(20, s.tavern);
  ordered(21, s.tavern_pile);
  for (const auto& p : s.patrons) h = mix(h, std::uint64_t(std::uint8_t(p.favor)));
  for (auto c : s.combo) h = mix(h, c);
  std::uint64_t used = 0;
  for (const auto& u : s.used_this_turn) {
    std::uint64_t x = u.card;
    used += splitmix64(x);
  }
  h = mix(h, used);
  if (s.choice) h = mix(h, 1000 + static_cast<std::uint64_t>(s.choice->kind));
  h = mix(h, s.effect_queue.size());
  h = mix(h, s.rng.state()[0]);
  return h;
}

struct BeamEntry {
  MatchState state;
  std::size_t first = 0;  // candidate index of the first move
  std::vector<Move> line;
  double value = 0;
};

}  // namespace

TurnSearchResult beam_search(const MatchState& state, std::span<const Move> candidates, const Evaluator& eval,
                             const SearchConfig& config, Rng& rng, Clock::time_point deadline,
                             std::vector<Move>* best_line) {
  TurnSearchResult result;
  result.values.assign(candidates.size(), -std::numeric_limits<double>::infinity());
  if (candidates.size() <= 1) {
    if (best_line) best_line->assign(candidates.begin(), candidates.end());
    return result;
  }
  const int seat = own_seat(state);
  const int turn = state.turn;
  const std::size_t width = static_cast<std::size_t>(std::max(config.beam_width, 1));

  double best_value = -std::numeric_limits<double>::infinity();
  std::size_t best_first = candidates.size();
  std::vector<Move> best;

  auto complete = [&](BeamEntry& e) {
    e.value = eval(e.state, seat);
    result.values[e.first] = std::max(result.values[e.first], e.value);
    if (best_first == candidates.size() || e.value > best_value || (e.value == best_value && e.first < best_first)) {
      best_value = e.value;
      best_first = e.first;
      best = e.line;
    }
  };

  std::vector<BeamEntry> layer;
  for (auto i : distinct_indices(state, candidates)) {
    BeamEntry e{state, i, {candidates[i]}};
    apply(e.state, candidates[i]);
    ++result.nodes;
    if (turn_over(e.state, seat, turn))
      complete(e);
    else
      layer.push_back(std::move(e));
  }

  std::vector<Move> legal;
  for (int depth = 1; !layer.empty(); ++depth) {
    const bool force_end = depth >= config.max_depth || (Clock::now() > deadline);
    for (auto& e : layer) e.value = eval(e.state, seat);
    std::stable_sort(layer.begin(), layer.end(),
                     [](const BeamEntry& a, const BeamEntry& b) { return a.value > b.value; });
    if (layer.size() > width) {
      const double p = config.annealing_start * std::pow(config.annealing_decay, depth - 1);
      if (p > 0) {
        for (std::size_t k = 0; k < width; ++k) {
          if (rng.uniform() < p) {
            const std::size_t j = width + static_cast<std::size_t>(rng.below(layer.size() - width));
            std::swap(layer[k], layer[j]);
          }
        }
      }
      layer.resize(width);
    }
    std::vector<BeamEntry> next;
    std::unordered_map<std::uint64_t, std::size_t> seen;
    for (auto& e : layer) {
      if (force_end) {
        // Close the line: resolve any open choice with its first option, then end the turn.
        while (!turn_over(e.state, seat, turn)) {
          legal_moves(e.state, legal);
          const Move m = e.state.choice ? legal.front() : Move::end_turn();
          e.line.push_back(m);
          apply(e.state, m);
        }
        complete(e);
        continue;
      }
      legal_moves(e.state, legal);
      for (const auto& m : distinct_moves(e.state, legal)) {
        BeamEntry child{e.state, e.first, e.line};
        apply(child.state, m);
        child.line.push_back(m);
        ++result.nodes;
        if (turn_over(child.state, seat, turn))
          complete(child);
        else if (auto [it, fresh] = seen.try_emplace(signature(child.state), next.size()); fresh)
          next.push_back(std::move(child));
        else if (child.first < next[it->second].first)
          next[it->second] = std::move(child);  // keep the lowest first move among transpositions
      }
    }
    layer = std::move(next);
  }

  result.best_index = best_first < candidates.size() ? best_first : 0;
  if (best_line) *best_line = best;
  return result;
}

}  // namespace policy

}  // namespace tribute
