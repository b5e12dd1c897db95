#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tribute/agent.hpp"
#include "tribute/heuristic.hpp"

namespace tribute {

/// Knobs for the search agents. Iteration counts, not wall time, bound the
/// search so that matches replay identically; the time budget is a cap.
struct SearchConfig {
  int beam_width = 32;
  int max_depth = 48;                 // beam layers / playout steps before forcing END_TURN
  double annealing_start = 0.05;      // chance to keep a lower-ranked state at depth 1
  double annealing_decay = 0.8;       // geometric decay per depth
  double exploration = std::sqrt(2.0);
  double end_turn_probability = 0.001;
  int iterations = 150;               // MCTS iterations / Flat MC playouts per search
  bool reuse_plan = true;             // replay the best line until a random event

  // Key-value JSON; unknown keys are rejected.
  static SearchConfig parse(std::string_view json_text);
};

struct AgentOptions {
  SearchConfig search;
  WeightSet weights = WeightSet::defaults();
  std::optional<TierList> tiers;  // defaults to the card set's tiers
};

class UnknownAgentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

AgentPtr make_random_agent();
AgentPtr make_uniform_random_agent();
AgentPtr make_max_prestige_agent(const AgentOptions& options = {});
AgentPtr make_patron_favors_agent();
AgentPtr make_max_agent_agent(const AgentOptions& options = {});
AgentPtr make_decision_tree_agent(const AgentOptions& options = {});
AgentPtr make_flat_mc_agent(const AgentOptions& options = {});
AgentPtr make_mcts_agent(const AgentOptions& options = {});
AgentPtr make_beam_search_agent(const AgentOptions& options = {});

// Registry of compiled-in agents, selected by name.
const std::vector<std::string>& agent_names();
AgentPtr make_agent(std::string_view name, const AgentOptions& options = {});

namespace policy {

// Uniform over legal minus END_TURN; END_TURN only when it is the sole move.
Move random_move(std::span<const Move> legal, Rng& rng);
// Flat MC playout step: END_TURN with probability p when alternatives exist.
Move damped_random_move(std::span<const Move> legal, Rng& rng, double end_turn_probability);

// Keeps the first move of each class of interchangeable moves (same card
// type and health for card moves, same picked card types for choices).
std::vector<Move> distinct_moves(const MatchState& state, std::span<const Move> legal);

struct TurnSearchResult {
  std::size_t best_index = 0;   // index into the candidate moves
  std::vector<double> values;   // best reachable end-of-turn value per candidate
  std::size_t nodes = 0;
};

// Exhaustive own-turn search: every line until END_TURN (or game end) is
// scored by heuristic_evaluate after the line. Ties go to the lowest index.
TurnSearchResult exhaustive_turn_search(const MatchState& state, std::span<const Move> candidates,
                                        const Evaluator& eval, std::size_t node_limit = 5'000'000);

TurnSearchResult mcts_search(const MatchState& state, std::span<const Move> candidates, const Evaluator& eval,
                             const SearchConfig& config, Rng& rng, Clock::time_point deadline,
                             std::vector<Move>* best_line = nullptr);

TurnSearchResult beam_search(const MatchState& state, std::span<const Move> candidates, const Evaluator& eval,
                             const SearchConfig& config, Rng& rng, Clock::time_point deadline,
                             std::vector<Move>* best_line = nullptr);

// Node statistics with max backup: the node keeps the best value seen below it.
struct MaxStat {
  double max_value = -std::numeric_limits<double>::infinity();
  int visits = 0;
  void backup(double value) {
    ++visits;
    if (value > max_value) max_value = value;
  }
};

// UCT with the child's (normalised) maximum in place of its mean.
double uct_score(double child_max, double child_visits, double parent_visits, double exploration);

}  // namespace policy

}  // namespace tribute
