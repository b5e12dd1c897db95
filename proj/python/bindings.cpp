// Python bindings. Structured values cross the boundary as JSON text; the
// package's __init__ decodes them.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tribute/runner.hpp"
#include "tribute/service.hpp"

namespace py = pybind11;
using namespace tribute;
using service::json;

namespace {

std::array<PatronId, 4> patrons_from(const std::vector<std::string>& names) {
  if (names.size() != 4) throw std::invalid_argument("exactly four patrons are needed");
  std::array<PatronId, 4> out{};
  for (std::size_t i = 0; i < 4; ++i) {
    const auto p = parse_patron(names[i]);
    if (!p) throw std::invalid_argument("unknown patron '" + names[i] + "'");
    out[i] = *p;
  }
  return out;
}

AgentOptions options_from(const std::string& search_json) {
  AgentOptions o;
  if (!search_json.empty()) o.search = SearchConfig::parse(search_json);
  return o;
}

json result_json(const MatchResult& r, bool events) {
  json j = {{"agents", r.agents},
            {"seed", std::to_string(r.seed)},
            {"winner", r.outcome.winner == kDraw ? json(nullptr) : json(r.outcome.winner)},
            {"reason", to_string(r.outcome.reason)},
            {"turns", r.turns},
            {"wall_seconds", r.wall_seconds},
            {"error", r.error}};
  json patrons = json::array();
  for (PatronId p : r.patrons) patrons.push_back(to_string(p));
  j["patrons"] = patrons;
  if (events) {
    json ev = json::array();
    const auto cards = default_card_set();
    for (const auto& e : r.events) ev.push_back(format_event(e, *cards));
    j["events"] = ev;
  }
  return j;
}

// A bare rules engine over the full state, for scripting and tests.
class Game {
 public:
  Game(std::uint64_t seed, const std::vector<std::string>& patrons)
      : state_(new_match(default_card_set(), patrons_from(patrons), seed)) {}

  std::string legal_moves() const {
    json out = json::array();
    for (const auto& m : tribute::legal_moves(state_)) out.push_back(service::move_json(state_, m));
    return out.dump();
  }
  void play_index(std::size_t index) {
    const auto moves = tribute::legal_moves(state_);
    if (index >= moves.size()) throw py::index_error("move index out of range");
    apply(state_, moves[index]);
  }
  void play(const std::string& move_json) {
    const Move m = service::move_from_json(json::parse(move_json));
    if (!is_legal(state_, m)) throw std::invalid_argument("illegal move " + to_string(m));
    apply(state_, m);
  }
  std::string state() const { return service::state_json(state_).dump(); }
  bool finished() const { return state_.finished(); }
  int turn() const { return state_.turn; }
  int current() const { return state_.current; }

 private:
  MatchState state_;
};

std::string wrap_service(const std::function<json()>& f) {
  try {
    return f().dump();
  } catch (const service::ServiceError& e) {
    json payload = e.to_json();
    payload["status"] = e.status();
    throw py::value_error(payload.dump());
  }
}

class Sessions {
 public:
  std::string create(const std::string& options) {
    return wrap_service([&] { return m_.create(service::SessionOptions::from_json(json::parse(options))); });
  }
  std::string snapshot(const std::string& id) {
    return wrap_service([&] { return m_.snapshot(id); });
  }
  std::string draft(const std::string& id, const std::string& patron) {
    return wrap_service([&] {
      const auto p = parse_patron(patron);
      if (!p) throw service::ServiceError(400, "bad_request", "unknown patron '" + patron + "'");
      return m_.draft(id, *p);
    });
  }
  std::string move(const std::string& id, const std::string& move) {
    return wrap_service([&] { return m_.submit_move(id, service::move_from_json(json::parse(move))); });
  }
  std::string move_index(const std::string& id, std::size_t index) {
    return wrap_service([&] { return m_.submit_move_index(id, index); });
  }
  std::string ai_step(const std::string& id) {
    return wrap_service([&] { return m_.ai_step(id); });
  }
  std::string ai_turn(const std::string& id) {
    return wrap_service([&] { return m_.ai_turn(id); });
  }
  std::string history(const std::string& id) {
    return wrap_service([&] { return m_.history(id); });
  }
  void remove(const std::string& id) {
    wrap_service([&] {
      m_.remove(id);
      return json();
    });
  }

 private:
  service::SessionManager m_;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Tales of Tribute simulator core";

  m.def("agent_names", [] { return agent_names(); });
  m.def("ci_half_width", &ci_half_width, py::arg("p"), py::arg("n"));

  m.def(
      "run_match",
      [](const std::string& first, const std::string& second, std::uint64_t seed, const std::string& search,
         bool events) {
        MatchConfig c;
        c.agents = {first, second};
        c.seed = seed;
        c.options = {options_from(search), options_from(search)};
        c.record_events = events;
        MatchResult r;
        {
          py::gil_scoped_release release;
          r = run_match(c);
        }
        return result_json(r, events).dump();
      },
      py::arg("first"), py::arg("second"), py::arg("seed") = 0, py::arg("search") = "", py::arg("events") = false);

  m.def(
      "tournament",
      [](const std::vector<std::string>& agents, int games_per_pair, std::uint64_t seed, int threads,
         const std::string& search) {
        TournamentConfig c;
        c.agents = agents;
        c.games_per_pair = games_per_pair;
        c.seed = seed;
        c.threads = threads;
        c.options = options_from(search);
        TournamentResult r{Crosstable(agents), {}};
        {
          py::gil_scoped_release release;
          r = run_tournament(c);
        }
        json rates = json::array();
        for (std::size_t a = 0; a < agents.size(); ++a) {
          json row = json::array();
          for (std::size_t b = 0; b < agents.size(); ++b)
            row.push_back(a == b ? json(nullptr) : json(r.table.pair(a, b).win_rate()));
          rates.push_back(row);
        }
        return json{{"agents", agents}, {"win_rate", rates}, {"csv", r.table.to_csv()}, {"text", r.table.to_text()}}
            .dump();
      },
      py::arg("agents"), py::arg("games_per_pair") = 200, py::arg("seed") = 1, py::arg("threads") = 1,
      py::arg("search") = "");

  py::class_<Game>(m, "Game")
      .def(py::init<std::uint64_t, const std::vector<std::string>&>(), py::arg("seed"), py::arg("patrons"))
      .def("legal_moves_json", &Game::legal_moves)
      .def("play_index", &Game::play_index)
      .def("play_json", &Game::play)
      .def("state_json", &Game::state)
      .def_property_readonly("finished", &Game::finished)
      .def_property_readonly("turn", &Game::turn)
      .def_property_readonly("current", &Game::current);

  py::class_<Sessions>(m, "Sessions")
      .def(py::init<>())
      .def("create", &Sessions::create)
      .def("snapshot", &Sessions::snapshot)
      .def("draft", &Sessions::draft)
      .def("move", &Sessions::move)
      .def("move_index", &Sessions::move_index)
      .def("ai_step", &Sessions::ai_step, py::call_guard<py::gil_scoped_release>())
      .def("ai_turn", &Sessions::ai_turn, py::call_guard<py::gil_scoped_release>())
      .def("history", &Sessions::history)
      .def("remove", &Sessions::remove);
}
