#include <algorithm>

#include "agent_util.hpp"

namespace tribute {

namespace {

// Shared plan handling: a search produces a line of moves for the current
// turn; the agent replays it while nothing random has happened since.
class PlanningAgent : public Agent {
 public:
  explicit PlanningAgent(const AgentOptions& o) : config_(o.search), eval_{o.weights, o.tiers, std::nullopt} {}

  // Hlaalu and Red Eagle turn spare cards and power into prestige and draws.
  PatronId select_patron(std::span<const PatronId> available, int round) override {
    for (PatronId p : {PatronId::Hlaalu, PatronId::RedEagle})
      if (std::find(available.begin(), available.end(), p) != available.end()) return p;
    return Agent::select_patron(available, round);
  }

  Move play(const PlayerView& view, std::span<const Move> legal, Duration remaining) override {
    if (legal.size() == 1) {
      plan_.clear();
      return legal.front();
    }
    if (config_.reuse_plan && pos_ < valid_ && plan_turn_ == view.state.turn && plan_seat_ == view.seat &&
        detail::is_member(legal, plan_[pos_]))
      return plan_[pos_++];

    const SeededGameState root = seed_view(view, next_seed());
    const auto deadline = Clock::now() + remaining;
    plan_.clear();
    turn_eval_ = eval_.rooted(root.state(), view.seat);
    const Move chosen = search(root.state(), legal, deadline, plan_);
    if (plan_.empty() || !(plan_.front() == chosen)) plan_.assign(1, chosen);

    // Keep the prefix up to and including the first move that reveals information.
    MatchState s = root.state();
    valid_ = 0;
    for (const auto& m : plan_) {
      if (!is_legal(s, m)) break;
      ++valid_;
      const StepFlags f = apply(s, m);
      if ((f & (kRandomEventFlags | kStepTurnEnded | kStepGameOver)) != 0) break;
    }
    pos_ = 1;
    if (logging())
      log(name() + ": turn " + std::to_string(view.state.turn) + ", chose " + to_string(chosen) + ", plan of " +
          std::to_string(valid_) + " move(s)");
    plan_turn_ = view.state.turn;
    plan_seat_ = view.seat;
    ++searches_;
    return chosen;
  }

  std::size_t searches() const { return searches_; }

 protected:
  void on_match_start() override {
    plan_.clear();
    pos_ = valid_ = 0;
  }
  virtual Move search(const MatchState& root, std::span<const Move> legal, Clock::time_point deadline,
                      std::vector<Move>& line) = 0;

  SearchConfig config_;
  Evaluator eval_;
  Evaluator turn_eval_;  // eval_ rooted at the current decision

 private:
  std::vector<Move> plan_;
  std::size_t pos_ = 0;
  std::size_t valid_ = 0;
  int plan_turn_ = -1;
  int plan_seat_ = -1;
  std::size_t searches_ = 0;
};

// Random own-turn playouts that stop at the first random event.
class FlatMcAgent final : public PlanningAgent {
 public:
  using PlanningAgent::PlanningAgent;
  std::string name() const override { return "flat-mc"; }

 protected:
  Move search(const MatchState& root, std::span<const Move> legal, Clock::time_point deadline,
              std::vector<Move>& line) override {
    const int me = root.choice ? root.choice->seat : root.current;
    double best = -std::numeric_limits<double>::infinity();
    std::vector<Move> moves, current;
    for (int it = 0; it < config_.iterations; ++it) {
      if (it > 0 && Clock::now() > deadline) break;
      MatchState s = root;
      current.clear();
      for (int step = 0; step < config_.max_depth; ++step) {
        if (step == 0)
          moves.assign(legal.begin(), legal.end());
        else
          legal_moves(s, moves);
        const Move m = policy::damped_random_move(moves, rng(), config_.end_turn_probability);
        current.push_back(m);
        const StepFlags f = apply(s, m);
        if ((f & (kRandomEventFlags | kStepTurnEnded | kStepGameOver)) != 0) break;
      }
      const double v = turn_eval_(s, me);
      if (line.empty() || v > best) {
        best = v;
        line = current;
      }
    }
    return line.front();
  }
};

class MctsAgent final : public PlanningAgent {
 public:
  using PlanningAgent::PlanningAgent;
  std::string name() const override { return "mcts"; }

 protected:
  Move search(const MatchState& root, std::span<const Move> legal, Clock::time_point deadline,
              std::vector<Move>& line) override {
    auto r = policy::mcts_search(root, legal, turn_eval_, config_, rng(), deadline, &line);
    return legal[r.best_index];
  }
};

class BeamSearchAgent final : public PlanningAgent {
 public:
  using PlanningAgent::PlanningAgent;
  std::string name() const override { return "beam-search"; }

 protected:
  Move search(const MatchState& root, std::span<const Move> legal, Clock::time_point deadline,
              std::vector<Move>& line) override {
    auto r = policy::beam_search(root, legal, turn_eval_, config_, rng(), deadline, &line);
    return legal[r.best_index];
  }
};

}  // namespace

AgentPtr make_flat_mc_agent(const AgentOptions& options) { return std::make_unique<FlatMcAgent>(options); }
AgentPtr make_mcts_agent(const AgentOptions& options) { return std::make_unique<MctsAgent>(options); }
AgentPtr make_beam_search_agent(const AgentOptions& options) { return std::make_unique<BeamSearchAgent>(options); }

const std::vector<std::string>& agent_names() {
  static const std::vector<std::string> names = {"random",       "uniform-random", "max-prestige",
                                                 "patron-favors", "max-agent",      "decision-tree",
                                                 "flat-mc",      "mcts",           "beam-search"};
  return names;
}

AgentPtr make_agent(std::string_view name, const AgentOptions& options) {
  if (name == "random") return make_random_agent();
  if (name == "uniform-random") return make_uniform_random_agent();
  if (name == "max-prestige") return make_max_prestige_agent(options);
  if (name == "patron-favors") return make_patron_favors_agent();
  if (name == "max-agent") return make_max_agent_agent(options);
  if (name == "decision-tree") return make_decision_tree_agent(options);
  if (name == "flat-mc") return make_flat_mc_agent(options);
  if (name == "mcts") return make_mcts_agent(options);
  if (name == "beam-search") return make_beam_search_agent(options);
  throw UnknownAgentError("unknown agent '" + std::string(name) + "'");
}

}  // namespace tribute
