#include "tribute/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace tribute {

std::uint64_t game_seed(std::uint64_t match_seed) { return mix_seed({match_seed, 0}); }
std::uint64_t agent_seed(std::uint64_t match_seed, int seat) {
  return mix_seed({match_seed, 1 + static_cast<std::uint64_t>(seat)});
}

namespace {

void end_by_runner(MatchState& s, MatchResult& r, int loser, EndReason reason, std::string error) {
  s.outcome = Outcome{1 - loser, reason};
  s.mode = EndgameMode::Finished;
  r.error = std::move(error);
  Event e;
  e.tag = EventTag::GameEnd;
  e.seat = static_cast<std::uint8_t>(1 - loser);
  e.turn = static_cast<std::uint16_t>(s.turn);
  e.detail = static_cast<std::uint8_t>(reason);
  r.events.push_back(e);
}

}  // namespace

MatchResult run_match(Agent& first, Agent& second, std::uint64_t seed, const MatchConfig& config) {
  const auto wall_start = Clock::now();
  MatchResult r;
  r.seed = seed;
  r.agents = {first.name(), second.name()};
  CardSetPtr cards = config.cards ? config.cards : default_card_set();
  std::array<Agent*, 2> agents = {&first, &second};

  for (int seat = 0; seat < 2; ++seat) {
    MatchContext ctx;
    ctx.cards = cards;
    ctx.seat = seat;
    ctx.seed = agent_seed(seed, seat);
    if (config.agent_log) ctx.log_sink = [&config, seat](std::string_view t) { config.agent_log(seat, t); };
    agents[static_cast<std::size_t>(seat)]->begin_match(ctx);
  }

  MatchState s;
  std::optional<Outcome> early;
  try {
    r.patrons = draft_patrons(first, second);
  } catch (const DraftError& e) {
    early = Outcome{1 - e.seat(), EndReason::IllegalMove};
    r.error = e.what();
  }
  if (early) {
    r.outcome = *early;
    Event e;
    e.tag = EventTag::GameEnd;
    e.seat = static_cast<std::uint8_t>(early->winner);
    e.detail = static_cast<std::uint8_t>(early->reason);
    r.events.push_back(e);
    r.wall_seconds = std::chrono::duration<double>(Clock::now() - wall_start).count();
    return r;
  }

  s = new_match(cards, r.patrons, game_seed(seed));
  EventLog* log = config.record_events ? &r.events : nullptr;
  std::array<TimeBudget, 2> budgets = {TimeBudget(config.turn_budget), TimeBudget(config.turn_budget)};
  std::array<int, 2> budget_turn = {-1, -1};
  std::vector<Move> legal;

  while (!s.finished()) {
    const int seat = s.choice ? s.choice->seat : s.current;
    const auto si = static_cast<std::size_t>(seat);
    if (budget_turn[si] != s.turn) {
      budgets[si].reset();
      budget_turn[si] = s.turn;
    }
    legal_moves(s, legal);
    const PlayerView view = to_player_view(s, seat);
    Move m;
    const auto t0 = Clock::now();
    try {
      m = agents[si]->play(view, legal, budgets[si].remaining());
    } catch (const std::exception& e) {
      end_by_runner(s, r, seat, EndReason::AgentCrash, e.what());
      break;
    } catch (...) {
      end_by_runner(s, r, seat, EndReason::AgentCrash, "unknown exception");
      break;
    }
    const Duration spent = Clock::now() - t0;
    budgets[si].charge(spent);
    AgentTiming& t = r.timing[si];
    t.total += spent;
    t.max_turn = std::max(t.max_turn, budgets[si].consumed());
    ++t.decisions;
    if (budgets[si].overdrawn()) {
      end_by_runner(s, r, seat, EndReason::Timeout, "turn budget exceeded");
      break;
    }
    if (!is_legal(s, m)) {
      end_by_runner(s, r, seat, EndReason::IllegalMove, "illegal move " + to_string(m));
      break;
    }
    apply(s, m, log);
  }
  if (!config.record_events) r.events.clear();

  r.outcome = *s.outcome;
  r.turns = std::min(s.turn, kTurnLimit);
  r.wall_seconds = std::chrono::duration<double>(Clock::now() - wall_start).count();

  EndGameState end;
  end.outcome = r.outcome;
  end.final_views = {to_player_view(s, 0), to_player_view(s, 1)};
  end.turns = r.turns;
  end.match_seed = seed;
  end.patrons = r.patrons;
  if (config.record_events) end.events = r.events;
  for (Agent* a : agents) {
    try {
      a->game_end(end);
    } catch (...) {
      // Result is final; a failing callback does not change it.
    }
  }
  return r;
}

MatchResult run_match(const MatchConfig& config) {
  AgentPtr a = make_agent(config.agents[0], config.options[0]);
  AgentPtr b = make_agent(config.agents[1], config.options[1]);
  MatchResult r = run_match(*a, *b, config.seed, config);
  r.agents = config.agents;
  return r;
}

double ci_half_width(double p, int n) {
  if (n <= 0) throw std::invalid_argument("ci_half_width: no games");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("ci_half_width: rate outside [0, 1]");
  return 100.0 * 1.96 * std::sqrt(p * (1.0 - p) / n);
}

Crosstable::Crosstable(std::vector<std::string> agents)
    : agents_(std::move(agents)),
      cells_(agents_.size() * agents_.size()),
      seat_cells_(agents_.size() * agents_.size() * 2) {}

std::size_t Crosstable::index(const std::string& name) const {
  for (std::size_t i = 0; i < agents_.size(); ++i)
    if (agents_[i] == name) return i;
  throw std::invalid_argument("crosstable: unknown agent '" + name + "'");
}

void Crosstable::record(const MatchResult& r) {
  const std::size_t a = index(r.agents[0]);
  const std::size_t b = index(r.agents[1]);
  const std::size_t n = agents_.size();
  auto add = [&](PairStats& p, int seat) {
    if (r.outcome.winner == kDraw)
      ++p.draws;
    else if (r.outcome.winner == seat)
      ++p.wins;
    else
      ++p.losses;
  };
  add(cells_[a * n + b], 0);
  add(seat_cells_[(a * n + b) * 2 + 0], 0);
  if (a != b) {
    add(cells_[b * n + a], 1);
    add(seat_cells_[(b * n + a) * 2 + 1], 1);
  }
}

PairStats Crosstable::total(std::size_t a) const {
  PairStats t;
  for (std::size_t b = 0; b < agents_.size(); ++b) {
    if (b == a) continue;
    const PairStats& p = pair(a, b);
    t.wins += p.wins;
    t.losses += p.losses;
    t.draws += p.draws;
  }
  return t;
}

double Crosstable::average(std::size_t a) const {
  double sum = 0;
  int count = 0;
  for (std::size_t b = 0; b < agents_.size(); ++b) {
    if (b == a || pair(a, b).games() == 0) continue;
    sum += pair(a, b).win_rate();
    ++count;
  }
  return count ? sum / count : 0.0;
}

double Crosstable::average_ci(std::size_t a) const {
  const int n = total(a).games();
  return n ? ci_half_width(average(a), n) : 0.0;
}

std::string Crosstable::to_text() const {
  std::ostringstream os;
  char buf[128];
  std::size_t w = 8;
  for (const auto& n : agents_) w = std::max(w, n.size());
  const int iw = static_cast<int>(w);
  std::snprintf(buf, sizeof buf, "%-*s", iw, "");
  os << buf;
  for (const auto& n : agents_) {
    std::snprintf(buf, sizeof buf, " %*s", iw + 4, n.c_str());
    os << buf;
  }
  std::snprintf(buf, sizeof buf, " %*s\n", iw + 4, "average");
  os << buf;
  for (std::size_t a = 0; a < agents_.size(); ++a) {
    std::snprintf(buf, sizeof buf, "%-*s", iw, agents_[a].c_str());
    os << buf;
    for (std::size_t b = 0; b < agents_.size(); ++b) {
      if (a == b || pair(a, b).games() == 0)
        std::snprintf(buf, sizeof buf, " %*s", iw + 4, "-");
      else
        std::snprintf(buf, sizeof buf, " %*.1f±%4.1f", iw - 2, 100.0 * pair(a, b).win_rate(), pair(a, b).ci());
      os << buf;
    }
    std::snprintf(buf, sizeof buf, " %*.1f±%4.1f\n", iw - 2, 100.0 * average(a), average_ci(a));
    os << buf;
  }
  return os.str();
}

std::string Crosstable::to_csv() const {
  std::ostringstream os;
  os << "agent,opponent,games,wins,losses,draws,win_rate,ci95\n";
  char buf[64];
  for (std::size_t a = 0; a < agents_.size(); ++a)
    for (std::size_t b = 0; b < agents_.size(); ++b) {
      const PairStats& p = pair(a, b);
      if (a == b || p.games() == 0) continue;
      std::snprintf(buf, sizeof buf, "%.4f,%.2f", p.win_rate(), p.ci());
      os << agents_[a] << ',' << agents_[b] << ',' << p.games() << ',' << p.wins << ',' << p.losses << ','
         << p.draws << ',' << buf << '\n';
    }
  return os.str();
}

std::uint64_t pair_seed(std::uint64_t base, std::size_t i, std::size_t j, int k) {
  return mix_seed({base, i, j, static_cast<std::uint64_t>(k)});
}

namespace {

struct Job {
  std::string a, b;
  std::uint64_t seed;
};

std::vector<MatchResult> run_jobs(const std::vector<Job>& jobs, const TournamentConfig& config) {
  std::vector<MatchResult> results(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex report;
  std::exception_ptr failure;
  if (!config.log_dir.empty()) std::filesystem::create_directories(config.log_dir);
  auto worker = [&]() {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        MatchConfig mc;
        mc.agents = {jobs[i].a, jobs[i].b};
        mc.seed = jobs[i].seed;
        mc.turn_budget = config.turn_budget;
        mc.options = {config.options, config.options};
        mc.cards = config.cards;
        mc.record_events = config.record_events || !config.log_dir.empty();
        std::ofstream log;
        if (!config.log_dir.empty()) {
          char name[32];
          std::snprintf(name, sizeof name, "match-%05zu.log", i);
          log.open(config.log_dir / name);
          if (!log) throw std::runtime_error("cannot write " + (config.log_dir / name).string());
          log << jobs[i].a << " vs " << jobs[i].b << " seed " << jobs[i].seed << '\n';
          mc.agent_log = [&log](int seat, std::string_view text) { log << "[seat " << seat << "] " << text << '\n'; };
        }
        results[i] = run_match(mc);
        if (log.is_open()) {
          const CardSetPtr& cards = config.cards ? config.cards : default_card_set();
          log << format_events(results[i].events, *cards);
          log << "result: " << (results[i].outcome.winner == kDraw ? "draw" : "seat " + std::to_string(results[i].outcome.winner))
              << ' ' << to_string(results[i].outcome.reason) << " after " << results[i].turns << " turns\n";
          if (!config.record_events) results[i].events.clear();
        }
        if (config.on_result) {
          std::lock_guard lock(report);
          config.on_result(results[i]);
        }
      } catch (...) {
        std::lock_guard lock(report);
        if (!failure) failure = std::current_exception();
        next = jobs.size();
      }
    }
  };
  const int threads = std::max(1, config.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

void mirrored_jobs(std::vector<Job>& jobs, const std::string& a, const std::string& b, int games,
                   std::uint64_t base, std::size_t i, std::size_t j) {
  const int pairs = (games + 1) / 2;
  for (int k = 0; k < pairs; ++k) {
    const std::uint64_t seed = pair_seed(base, i, j, k);
    jobs.push_back({a, b, seed});
    jobs.push_back({b, a, seed});
  }
}

}  // namespace

std::vector<MatchResult> run_mirrored(const std::string& a, const std::string& b, int games, std::uint64_t seed,
                                      const TournamentConfig& config) {
  std::vector<Job> jobs;
  mirrored_jobs(jobs, a, b, games, seed, 0, 1);
  return run_jobs(jobs, config);
}

std::vector<MatchResult> run_series(const std::string& a, const std::string& b, int games, std::uint64_t seed,
                                    const TournamentConfig& config) {
  std::vector<Job> jobs;
  for (int k = 0; k < games; ++k) jobs.push_back({a, b, pair_seed(seed, 0, 1, k)});
  return run_jobs(jobs, config);
}

TournamentResult run_tournament(const TournamentConfig& config) {
  if (config.agents.size() < 2) throw std::invalid_argument("a tournament needs at least two agents");
  if (config.games_per_pair < 1) throw std::invalid_argument("games_per_pair must be positive");
  for (const auto& n : config.agents) make_agent(n);  // fail fast on unknown names
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < config.agents.size(); ++i)
    for (std::size_t j = i + 1; j < config.agents.size(); ++j)
      mirrored_jobs(jobs, config.agents[i], config.agents[j], config.games_per_pair, config.seed, i, j);
  TournamentResult out{Crosstable(config.agents), run_jobs(jobs, config)};
  for (const auto& r : out.matches) out.table.record(r);
  return out;
}

}  // namespace tribute
