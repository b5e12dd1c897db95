#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "tribute/agents.hpp"

namespace tribute {

struct MatchConfig {
  std::array<std::string, 2> agents = {"random", "random"};
  std::uint64_t seed = 0;
  Duration turn_budget = kDefaultTurnBudget;
  std::array<AgentOptions, 2> options{};
  CardSetPtr cards;           // defaults to the bundled card set
  bool record_events = true;
  // Receives agent log lines, prefixed with the seat.
  std::function<void(int seat, std::string_view text)> agent_log;
};

struct AgentTiming {
  Duration total{};
  Duration max_turn{};
  int decisions = 0;
};

struct MatchResult {
  Outcome outcome;
  std::array<std::string, 2> agents;
  std::uint64_t seed = 0;
  int turns = 0;
  double wall_seconds = 0;
  std::array<AgentTiming, 2> timing{};
  std::array<PatronId, 4> patrons{};
  EventLog events;
  std::string error;  // crash / illegal move detail
};

// Seeds derived from the match seed: one for the deal, one per seat's agent.
std::uint64_t game_seed(std::uint64_t match_seed);
std::uint64_t agent_seed(std::uint64_t match_seed, int seat);

// Plays one match between already constructed agents.
MatchResult run_match(Agent& first, Agent& second, std::uint64_t seed, const MatchConfig& config);
// Resolves the agents by name first (UnknownAgentError when unknown).
MatchResult run_match(const MatchConfig& config);

// 95% normal-approximation half-width, in percentage points. Throws
// std::invalid_argument when n < 1.
double ci_half_width(double p, int n);

struct PairStats {
  int wins = 0;
  int losses = 0;
  int draws = 0;
  int games() const { return wins + losses + draws; }
  // Draws count half.
  double win_rate() const { return games() ? (wins + 0.5 * draws) / games() : 0.0; }
  double ci() const { return games() ? ci_half_width(win_rate(), games()) : 0.0; }
};

class Crosstable {
 public:
  explicit Crosstable(std::vector<std::string> agents);

  void record(const MatchResult& r);
  const std::vector<std::string>& agents() const { return agents_; }
  const PairStats& pair(std::size_t a, std::size_t b) const { return cells_[a * agents_.size() + b]; }
  // Per-seat results of `a` against `b`: seat 0 = a moved first.
  const PairStats& seat(std::size_t a, std::size_t b, int seat) const {
    return seat_cells_[(a * agents_.size() + b) * 2 + static_cast<std::size_t>(seat)];
  }
  PairStats total(std::size_t a) const;
  // Mean of the pairwise win rates against every opponent.
  double average(std::size_t a) const;
  double average_ci(std::size_t a) const;

  std::string to_text() const;
  std::string to_csv() const;

 private:
  std::size_t index(const std::string& name) const;
  std::vector<std::string> agents_;
  std::vector<PairStats> cells_;
  std::vector<PairStats> seat_cells_;
};

struct TournamentConfig {
  std::vector<std::string> agents;
  int games_per_pair = 200;  // rounded up to mirrored pairs
  std::uint64_t seed = 1;
  Duration turn_budget = kDefaultTurnBudget;
  AgentOptions options;
  CardSetPtr cards;
  int threads = 1;
  bool record_events = false;
  // When set, each match writes its agent log lines and event log to
  // <log_dir>/match-<schedule index>.log.
  std::filesystem::path log_dir;
  std::function<void(const MatchResult&)> on_result;  // called serially, in completion order
};

// Seed of the k-th mirrored pair between agents i and j.
std::uint64_t pair_seed(std::uint64_t base, std::size_t i, std::size_t j, int k);

struct TournamentResult {
  Crosstable table;
  std::vector<MatchResult> matches;  // schedule order
};

// Round robin: every unordered pair plays games_per_pair games as mirrored
// pairs (same deal, seats swapped).
TournamentResult run_tournament(const TournamentConfig& config);

// Matches of `a` vs `b` as mirrored pairs, results in schedule order.
std::vector<MatchResult> run_mirrored(const std::string& a, const std::string& b, int games, std::uint64_t seed,
                                      const TournamentConfig& config);
// `games` matches with `a` always seated first; seeds as for run_mirrored.
std::vector<MatchResult> run_series(const std::string& a, const std::string& b, int games, std::uint64_t seed,
                                    const TournamentConfig& config);

}  // namespace tribute
