// Command-line front end: single matches, round robins, throughput bench and
// the match service.

#include <chrono>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "tribute/http_server.hpp"
#include "tribute/runner.hpp"

using namespace tribute;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Options shared by `run` and `tournament`.
struct Common {
  std::uint64_t seed = 1;
  int turn_limit_ms = 30000;
  std::string log_dir;
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::string card_set;
  std::string weights;
  std::string search;
  std::string csv;

  void add(CLI::App* app) {
    app->add_option("--seed", seed, "Base seed");
    app->add_option("--turn-limit-ms", turn_limit_ms, "Per-turn thinking budget in milliseconds")->check(CLI::PositiveNumber);
    app->add_option("--log-dir", log_dir, "Write one log file per match here");
    app->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    app->add_option("--card-set", card_set, "Card definition file (JSON)")->check(CLI::ExistingFile);
    app->add_option("--weights", weights, "Heuristic weight file (JSON)")->check(CLI::ExistingFile);
    app->add_option("--search", search, "Search settings: a JSON file or inline JSON object");
    app->add_option("--csv", csv, "Also write the crosstable as CSV to this file");
  }

  TournamentConfig config() const {
    TournamentConfig c;
    c.seed = seed;
    c.turn_budget = std::chrono::milliseconds(turn_limit_ms);
    c.threads = threads;
    c.log_dir = log_dir;
    if (!card_set.empty()) c.cards = load_card_set_file(card_set);
    if (!weights.empty()) c.options.weights = WeightSet::parse(read_file(weights));
    if (!search.empty())
      c.options.search = SearchConfig::parse(search.front() == '{' ? search : read_file(search));
    return c;
  }

  void write_csv(const Crosstable& table) const {
    if (csv.empty()) return;
    std::ofstream out(csv);
    if (!out) throw std::runtime_error("cannot write " + csv);
    out << table.to_csv();
  }
};

void print_seat_report(const Crosstable& t) {
  const auto& names = t.agents();
  std::printf("per-seat win rates (row agent, by the seat it held):\n");
  for (std::size_t a = 0; a < names.size(); ++a)
    for (std::size_t b = 0; b < names.size(); ++b) {
      if (a == b || t.pair(a, b).games() == 0) continue;
      const PairStats& first = t.seat(a, b, 0);
      const PairStats& second = t.seat(a, b, 1);
      std::printf("  %-14s vs %-14s first %5.1f%% (%d games)  second %5.1f%% (%d games)\n", names[a].c_str(),
                  names[b].c_str(), 100 * first.win_rate(), first.games(), 100 * second.win_rate(), second.games());
    }
}

void print_summary(const std::vector<MatchResult>& results) {
  std::array<int, 7> reasons{};
  long turns = 0;
  for (const auto& r : results) {
    ++reasons[static_cast<std::size_t>(r.outcome.reason)];
    turns += r.turns;
  }
  std::printf("%zu games, mean %.1f turns; endings:", results.size(),
              results.empty() ? 0.0 : static_cast<double>(turns) / static_cast<double>(results.size()));
  for (std::size_t i = 0; i < reasons.size(); ++i)
    if (reasons[i]) std::printf(" %s=%d", std::string(to_string(static_cast<EndReason>(i))).c_str(), reasons[i]);
  std::printf("\n");
}

service::HttpServer* g_server = nullptr;
extern "C" void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tales of Tribute simulator"};
  app.require_subcommand(1);

  Common run_opts;
  std::string a1, a2;
  int games = 1;
  bool mirror = false;
  bool print_events = false;
  auto* run = app.add_subcommand("run", "Play matches between two agents");
  run->add_option("--a1", a1, "First-seat agent")->required();
  run->add_option("--a2", a2, "Second-seat agent")->required();
  run->add_option("--games", games, "Number of games")->check(CLI::PositiveNumber);
  run->add_flag("--mirror", mirror, "Play mirrored pairs: same seed, seats swapped");
  run->add_flag("--events", print_events, "Print the event log of every game");
  run_opts.add(run);

  Common tour_opts;
  std::vector<std::string> agents;
  int iterations = 400;
  bool seat_report = false;
  auto* tour = app.add_subcommand("tournament", "Round robin over several agents");
  tour->add_option("--agents", agents, "Comma-separated agent names")->required()->delimiter(',');
  tour->add_option("--iterations", iterations, "Games per pair (mirrored)")->check(CLI::PositiveNumber);
  tour->add_flag("--seat-report", seat_report, "Also print per-seat win rates");
  tour_opts.add(tour);

  int bench_games = 1000;
  std::uint64_t bench_seed = 1;
  auto* bench = app.add_subcommand("bench", "Random vs Random throughput on one thread");
  bench->add_option("--games", bench_games, "Number of games")->check(CLI::NonNegativeNumber);
  bench->add_option("--seed", bench_seed, "Base seed");

  std::string host = "127.0.0.1";
  int port = 8080;
  int idle_minutes = 60;
  auto* serve = app.add_subcommand("serve", "Run the HTTP match service");
  serve->add_option("--host", host, "Bind address")->envname("TRIBUTE_HOST");
  serve->add_option("--port", port, "Port (0 = any free port)")->envname("TRIBUTE_PORT")->check(CLI::Range(0, 65535));
  serve->add_option("--idle-minutes", idle_minutes, "Drop sessions idle this long")->check(CLI::PositiveNumber);

  app.add_subcommand("agents", "List agent names");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      TournamentConfig c = run_opts.config();
      c.agents = {a1, a2};
      c.record_events = print_events;
      make_agent(a1);
      make_agent(a2);
      const auto results = mirror ? run_mirrored(a1, a2, games, c.seed, c) : run_series(a1, a2, games, c.seed, c);
      std::vector<std::string> names = {a1};
      if (a2 != a1) names.push_back(a2);
      Crosstable table(names);
      for (const auto& r : results) {
        if (print_events) std::printf("%s", format_events(r.events, c.cards ? *c.cards : *default_card_set()).c_str());
        if (results.size() <= 10 || print_events)
          std::printf("seed %llu: %s vs %s -> %s (%s, %d turns)%s%s\n", static_cast<unsigned long long>(r.seed),
                      r.agents[0].c_str(), r.agents[1].c_str(),
                      r.outcome.winner == kDraw ? "draw" : r.agents[static_cast<std::size_t>(r.outcome.winner)].c_str(),
                      std::string(to_string(r.outcome.reason)).c_str(), r.turns, r.error.empty() ? "" : ": ",
                      r.error.c_str());
        table.record(r);
      }
      if (names.size() == 2) {
        std::printf("%s", table.to_text().c_str());
        print_seat_report(table);
      }
      print_summary(results);
      run_opts.write_csv(table);
    } else if (*tour) {
      TournamentConfig c = tour_opts.config();
      c.agents = agents;
      c.games_per_pair = iterations;
      const auto t0 = Clock::now();
      const auto result = run_tournament(c);
      std::printf("%s", result.table.to_text().c_str());
      if (seat_report) print_seat_report(result.table);
      print_summary(result.matches);
      std::printf("wall %.1f s on %d threads\n", std::chrono::duration<double>(Clock::now() - t0).count(), c.threads);
      tour_opts.write_csv(result.table);
    } else if (*bench) {
      TournamentConfig c;
      c.threads = 1;
      const auto t0 = Clock::now();
      const auto results = run_series("random", "random", bench_games, bench_seed, c);
      const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
      std::printf("%d Random vs Random matches in %.3f s (%.1f matches/s, one thread)\n", bench_games, secs,
                  secs > 0 ? bench_games / secs : 0.0);
      print_summary(results);
    } else if (*serve) {
      service::SessionManager sessions{std::chrono::minutes(idle_minutes)};
      service::HttpServer server(sessions);
      const int bound = server.bind(host, port);
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::printf("serving on http://%s:%d/api\n", host.c_str(), bound);
      std::fflush(stdout);
      server.serve();
      g_server = nullptr;
    } else {
      for (const auto& n : agent_names()) std::printf("%s\n", n.c_str());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
