#include <algorithm>
#include <array>
#include <atomic>
#include <condition_variable>
#include <cstdio>
#include <random>

#include "tribute/runner.hpp"
#include "tribute/service.hpp"

namespace tribute::service {

namespace {

constexpr std::array<int, 4> kDraftOrder = {0, 1, 1, 0};

std::uint64_t random_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::uint64_t parse_seed(const json& j) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    std::size_t used = 0;
    try {
      const unsigned long long v = std::stoull(s, &used, 10);
      if (used == s.size() && !s.empty() && s[0] != '-') return v;
    } catch (const std::exception&) {
    }
  }
  throw ServiceError(400, "bad_request", "seed must be a non-negative integer or a decimal string");
}

struct Entry {
  enum class Kind { Draft, Move, Forfeit };
  Kind kind = Kind::Move;
  int seat = 0;
  bool by_ai = false;
  PatronId patron = PatronId::Treasury;
  Move move;
  Outcome outcome;
  json move_detail;
  EventLog events;
};

void forfeit(MatchState& s, const Outcome& o, EventLog* log) {
  s.outcome = o;
  s.mode = EndgameMode::Finished;
  if (log) {
    Event e;
    e.tag = EventTag::GameEnd;
    e.seat = static_cast<std::uint8_t>(o.winner);
    e.turn = static_cast<std::uint16_t>(s.turn);
    e.detail = static_cast<std::uint8_t>(o.reason);
    log->push_back(e);
  }
}

}  // namespace

SessionOptions SessionOptions::from_json(const json& j) {
  if (!j.is_object()) throw ServiceError(400, "bad_request", "session request must be a JSON object");
  SessionOptions o;
  for (const auto& [key, value] : j.items()) {
    if (key == "agent") {
      if (!value.is_string()) throw ServiceError(400, "bad_request", "'agent' must be a string");
      o.agent = value.get<std::string>();
    } else if (key == "human_seat") {
      if (!value.is_number_integer() || (value.get<int>() != 0 && value.get<int>() != 1))
        throw ServiceError(400, "bad_request", "'human_seat' must be 0 or 1");
      o.human_seat = value.get<int>();
    } else if (key == "seed") {
      if (!value.is_null()) o.seed = parse_seed(value);
    } else if (key == "turn_budget_ms") {
      if (!value.is_number_integer() || value.get<std::int64_t>() < 1)
        throw ServiceError(400, "bad_request", "'turn_budget_ms' must be a positive integer");
      o.ai_turn_budget = std::chrono::milliseconds(value.get<std::int64_t>());
    } else {
      throw ServiceError(400, "bad_request", "unknown field '" + key + "'");
    }
  }
  return o;
}

struct SessionManager::Session {
  std::mutex mutex;
  std::condition_variable changed;
  std::string id;
  SessionOptions options;
  std::uint64_t seed = 0;
  int human = 0;
  int ai = 1;
  AgentPtr agent;
  CardSetPtr cards;
  std::vector<PatronId> pool;
  std::vector<PatronId> picks;
  bool started = false;
  std::optional<Outcome> draft_outcome;  // AI forfeited during the draft
  MatchState state;
  std::vector<Entry> history;
  std::vector<json> logs;
  std::uint64_t version = 1;
  TimeBudget budget;
  int budget_turn = -1;
  bool ended_notified = false;
  bool closed = false;
  std::atomic<Clock::rep> touched{0};

  bool finished() const { return draft_outcome.has_value() || (started && state.finished()); }
  std::optional<Outcome> outcome() const {
    if (draft_outcome) return draft_outcome;
    if (started && state.outcome) return state.outcome;
    return std::nullopt;
  }
  int to_move() const {
    if (finished()) return -1;
    if (!started) return kDraftOrder[picks.size()];
    return state.choice ? state.choice->seat : state.current;
  }
  int turn() const { return started ? state.turn : 0; }

  void bump() {
    ++version;
    changed.notify_all();
  }

  json snapshot() const {
    json j = {{"protocol", kProtocolVersion},
              {"session", id},
              {"version", version},
              {"seed", std::to_string(seed)},
              {"agent", options.agent},
              {"human_seat", human},
              {"ai_seat", ai},
              {"turn_budget_ms", std::chrono::duration_cast<std::chrono::milliseconds>(options.ai_turn_budget).count()},
              {"history_length", history.size()},
              {"log_length", logs.size()}};
    j["phase"] = finished() ? "finished" : started ? "play" : "draft";
    const int mover = to_move();
    j["to_move"] = mover < 0 ? json(nullptr) : json(mover);
    j["human_to_move"] = mover == human;

    json drafted = json::array();
    for (std::size_t i = 0; i < picks.size(); ++i)
      drafted.push_back({{"patron", to_string(picks[i])}, {"seat", kDraftOrder[i]}});
    json available = json::array();
    for (PatronId p : pool) available.push_back(to_string(p));
    j["draft"] = {{"picks", std::move(drafted)}, {"pool", std::move(available)}};

    json legal = json::array();
    if (started) {
      j["state"] = state_json(state);
      if (!finished()) {
        const auto moves = legal_moves(state);
        for (std::size_t i = 0; i < moves.size(); ++i) {
          json m = move_json(state, moves[i]);
          m["index"] = i;
          legal.push_back(std::move(m));
        }
      }
    } else {
      j["state"] = nullptr;
    }
    j["legal_moves"] = std::move(legal);
    if (auto o = outcome())
      j["outcome"] = {{"winner", o->winner}, {"reason", to_string(o->reason)}};
    else
      j["outcome"] = nullptr;
    return j;
  }

  void log_line(std::string_view text) {
    logs.push_back({{"turn", turn()}, {"seat", ai}, {"text", std::string(text)}});
  }

  void start_if_drafted() {
    if (picks.size() < kDraftOrder.size() || started) return;
    std::array<PatronId, 4> p{};
    std::copy(picks.begin(), picks.end(), p.begin());
    state = new_match(cards, p, game_seed(seed));
    started = true;
  }

  void run_ai_draft() {
    while (!finished() && !started && to_move() == ai) {
      int round = 1;
      for (std::size_t i = 0; i < picks.size(); ++i) round += kDraftOrder[i] == ai;
      PatronId pick;
      try {
        pick = agent->select_patron(pool, round);
      } catch (const std::exception& e) {
        end_draft(EndReason::AgentCrash, e.what());
        return;
      }
      auto it = std::find(pool.begin(), pool.end(), pick);
      if (it == pool.end()) {
        end_draft(EndReason::IllegalMove, "unavailable patron");
        return;
      }
      pool.erase(it);
      picks.push_back(pick);
      Entry e;
      e.kind = Entry::Kind::Draft;
      e.seat = ai;
      e.by_ai = true;
      e.patron = pick;
      history.push_back(std::move(e));
    }
    start_if_drafted();
  }

  void end_draft(EndReason reason, const std::string& why) {
    draft_outcome = Outcome{human, reason};
    Entry e;
    e.kind = Entry::Kind::Forfeit;
    e.seat = ai;
    e.by_ai = true;
    e.outcome = *draft_outcome;
    history.push_back(std::move(e));
    log_line("forfeit: " + why);
  }

  void ai_forfeit(EndReason reason, const std::string& why) {
    Entry e;
    e.kind = Entry::Kind::Forfeit;
    e.seat = ai;
    e.by_ai = true;
    e.outcome = Outcome{human, reason};
    forfeit(state, e.outcome, &e.events);
    history.push_back(std::move(e));
    log_line("forfeit: " + why);
  }

  void record_move(const Move& m, bool by_ai) {
    Entry e;
    e.kind = Entry::Kind::Move;
    e.seat = to_move();
    e.by_ai = by_ai;
    e.move = m;
    e.move_detail = move_json(state, m);
    apply(state, m, &e.events);
    history.push_back(std::move(e));
  }

  void notify_end() {
    if (ended_notified || !started || !state.finished()) return;
    ended_notified = true;
    EndGameState end;
    end.outcome = *state.outcome;
    end.final_views = {to_player_view(state, 0), to_player_view(state, 1)};
    end.turns = state.turn;
    end.match_seed = seed;
    std::copy(picks.begin(), picks.end(), end.patrons.begin());
    for (const auto& h : history) end.events.insert(end.events.end(), h.events.begin(), h.events.end());
    try {
      agent->game_end(end);
    } catch (...) {
      // The result stands either way.
    }
  }

  // One AI decision. Caller checked that the AI is to move.
  void ai_decide() {
    if (budget_turn != state.turn) {
      budget.reset();
      budget_turn = state.turn;
    }
    const auto legal = legal_moves(state);
    const PlayerView view = to_player_view(state, ai);
    Move m;
    const auto t0 = Clock::now();
    try {
      m = agent->play(view, legal, budget.remaining());
    } catch (const std::exception& e) {
      ai_forfeit(EndReason::AgentCrash, e.what());
      return;
    } catch (...) {
      ai_forfeit(EndReason::AgentCrash, "unknown exception");
      return;
    }
    budget.charge(Clock::now() - t0);
    if (budget.overdrawn()) {
      ai_forfeit(EndReason::Timeout, "turn budget exceeded");
      return;
    }
    if (!is_legal(state, m)) {
      ai_forfeit(EndReason::IllegalMove, "illegal move " + to_string(m));
      return;
    }
    record_move(m, true);
  }
};

SessionManager::SessionManager(std::chrono::seconds idle_timeout, TimeSource now)
    : idle_timeout_(idle_timeout), now_(std::move(now)), ids_(random_seed()) {}

SessionManager::~SessionManager() {
  std::lock_guard lock(mutex_);
  for (auto& [id, s] : sessions_) {
    std::lock_guard slock(s->mutex);
    s->closed = true;
    s->changed.notify_all();
  }
}

std::string SessionManager::new_id() {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(ids_.next()));
  return buf;
}

std::shared_ptr<SessionManager::Session> SessionManager::find(const std::string& id) {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw ServiceError(404, "unknown_session", "no session '" + id + "'");
  it->second->touched = now_().time_since_epoch().count();
  return it->second;
}

json SessionManager::create(const SessionOptions& options) {
  if (options.human_seat != 0 && options.human_seat != 1)
    throw ServiceError(400, "bad_request", "human_seat must be 0 or 1");
  auto s = std::make_shared<Session>();
  s->options = options;
  s->seed = options.seed.value_or(random_seed());
  s->human = options.human_seat;
  s->ai = 1 - options.human_seat;
  try {
    s->agent = make_agent(options.agent, options.agent_options);
  } catch (const UnknownAgentError& e) {
    throw ServiceError(400, "unknown_agent", e.what(), {{"agents", list_agents()}});
  }
  s->cards = default_card_set();
  s->pool.assign(kDraftablePatrons.begin(), kDraftablePatrons.end());
  s->budget = TimeBudget(options.ai_turn_budget);
  s->touched = now_().time_since_epoch().count();

  MatchContext ctx;
  ctx.cards = s->cards;
  ctx.seat = s->ai;
  ctx.seed = agent_seed(s->seed, s->ai);
  Session* raw = s.get();
  ctx.log_sink = [raw](std::string_view text) { raw->log_line(text); };

  expire_idle();
  std::lock_guard lock(mutex_);
  do s->id = new_id();
  while (sessions_.count(s->id));
  std::lock_guard slock(s->mutex);
  s->agent->begin_match(ctx);
  s->run_ai_draft();
  sessions_.emplace(s->id, s);
  return s->snapshot();
}

json SessionManager::snapshot(const std::string& id) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  return s->snapshot();
}

json SessionManager::draft(const std::string& id, PatronId patron) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  if (s->started || s->finished()) throw ServiceError(409, "draft_over", "the patron draft is over");
  if (s->to_move() != s->human) throw ServiceError(409, "not_your_turn", "the AI is picking");
  auto it = std::find(s->pool.begin(), s->pool.end(), patron);
  if (it == s->pool.end()) {
    json pool = json::array();
    for (PatronId p : s->pool) pool.push_back(to_string(p));
    throw ServiceError(422, "illegal_pick", "patron " + std::string(to_string(patron)) + " is not available",
                       {{"available", pool}});
  }
  s->pool.erase(it);
  s->picks.push_back(patron);
  Entry e;
  e.kind = Entry::Kind::Draft;
  e.seat = s->human;
  e.patron = patron;
  s->history.push_back(std::move(e));
  s->run_ai_draft();
  s->start_if_drafted();
  s->bump();
  return s->snapshot();
}

json SessionManager::submit_move(const std::string& id, const Move& move) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  if (s->finished()) throw ServiceError(409, "game_over", "the match is over");
  if (!s->started) throw ServiceError(409, "drafting", "patrons are still being drafted");
  if (s->to_move() != s->human) throw ServiceError(409, "not_your_turn", "it is the AI's move");
  if (!is_legal(s->state, move)) {
    json legal = json::array();
    const auto moves = legal_moves(s->state);
    for (std::size_t i = 0; i < moves.size(); ++i) {
      json m = move_json(s->state, moves[i]);
      m["index"] = i;
      legal.push_back(std::move(m));
    }
    throw ServiceError(422, "illegal_move", "illegal move " + to_string(move), {{"legal_moves", legal}});
  }
  s->record_move(move, false);
  s->notify_end();
  s->bump();
  return s->snapshot();
}

json SessionManager::submit_move_index(const std::string& id, std::size_t legal_index) {
  Move m;
  {
    auto s = find(id);
    std::lock_guard lock(s->mutex);
    if (s->started && !s->finished()) {
      const auto moves = legal_moves(s->state);
      if (legal_index >= moves.size())
        throw ServiceError(422, "illegal_move", "move index out of range",
                           {{"legal_count", moves.size()}});
      m = moves[legal_index];
    }
  }
  return submit_move(id, m);
}

json SessionManager::ai_step(const std::string& id) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  if (s->finished()) throw ServiceError(409, "game_over", "the match is over");
  if (!s->started) throw ServiceError(409, "drafting", "patrons are still being drafted");
  if (s->to_move() != s->ai) throw ServiceError(409, "not_ai_turn", "it is the human's move");
  s->ai_decide();
  s->notify_end();
  s->bump();
  json j = s->snapshot();
  j["steps"] = 1;
  return j;
}

json SessionManager::ai_turn(const std::string& id) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  if (s->finished()) throw ServiceError(409, "game_over", "the match is over");
  if (!s->started) throw ServiceError(409, "drafting", "patrons are still being drafted");
  if (s->to_move() != s->ai) throw ServiceError(409, "not_ai_turn", "it is the human's move");
  const int turn = s->state.turn;
  int steps = 0;
  while (!s->finished() && s->to_move() == s->ai && s->state.turn == turn) {
    s->ai_decide();
    ++steps;
  }
  s->notify_end();
  s->bump();
  json j = s->snapshot();
  j["steps"] = steps;
  return j;
}

json SessionManager::history(const std::string& id) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  json entries = json::array();
  for (std::size_t i = 0; i < s->history.size(); ++i) {
    const Entry& e = s->history[i];
    json j = {{"index", i}, {"seat", e.seat}, {"actor", e.by_ai ? "ai" : "human"}};
    switch (e.kind) {
      case Entry::Kind::Draft:
        j["kind"] = "draft";
        j["patron"] = to_string(e.patron);
        break;
      case Entry::Kind::Move:
        j["kind"] = "move";
        j["move"] = e.move_detail;
        break;
      case Entry::Kind::Forfeit:
        j["kind"] = "forfeit";
        j["outcome"] = {{"winner", e.outcome.winner}, {"reason", to_string(e.outcome.reason)}};
        break;
    }
    json events = json::array();
    for (const auto& ev : e.events) events.push_back(event_json(ev, *s->cards));
    j["events"] = std::move(events);
    entries.push_back(std::move(j));
  }
  return {{"protocol", kProtocolVersion}, {"session", id}, {"seed", std::to_string(s->seed)}, {"entries", entries}};
}

json SessionManager::logs(const std::string& id, std::size_t since) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  json lines = json::array();
  for (std::size_t i = std::min(since, s->logs.size()); i < s->logs.size(); ++i) {
    json l = s->logs[i];
    l["index"] = i;
    lines.push_back(std::move(l));
  }
  return {{"protocol", kProtocolVersion}, {"session", id}, {"lines", lines}, {"next", s->logs.size()}};
}

json SessionManager::list_agents() {
  json out = json::array();
  for (const auto& n : agent_names()) out.push_back(n);
  return out;
}

void SessionManager::remove(const std::string& id) {
  std::shared_ptr<Session> s;
  {
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw ServiceError(404, "unknown_session", "no session '" + id + "'");
    s = it->second;
    sessions_.erase(it);
  }
  std::lock_guard slock(s->mutex);
  s->closed = true;
  s->changed.notify_all();
}

std::size_t SessionManager::expire_idle() {
  std::vector<std::shared_ptr<Session>> dropped;
  {
    std::lock_guard lock(mutex_);
    const auto cutoff = (now_() - idle_timeout_).time_since_epoch().count();
    for (auto it = sessions_.begin(); it != sessions_.end();) {
      if (it->second->touched.load() < cutoff) {
        dropped.push_back(it->second);
        it = sessions_.erase(it);
      } else {
        ++it;
      }
    }
  }
  for (auto& s : dropped) {
    std::lock_guard slock(s->mutex);
    s->closed = true;
    s->changed.notify_all();
  }
  return dropped.size();
}

std::size_t SessionManager::size() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

std::optional<json> SessionManager::wait_for_update(const std::string& id, std::uint64_t known_version,
                                                    Duration timeout) {
  std::shared_ptr<Session> s;
  {
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw ServiceError(404, "unknown_session", "no session '" + id + "'");
    s = it->second;
  }
  std::unique_lock lock(s->mutex);
  s->changed.wait_for(lock, timeout, [&] { return s->closed || s->version > known_version; });
  if (s->closed) throw ServiceError(404, "unknown_session", "session '" + id + "' is closed");
  if (s->version > known_version) return s->snapshot();
  return std::nullopt;
}

MatchState SessionManager::replay(const std::string& id) {
  std::vector<Entry> history;
  std::uint64_t seed;
  CardSetPtr cards;
  {
    auto s = find(id);
    std::lock_guard lock(s->mutex);
    history = s->history;
    seed = s->seed;
    cards = s->cards;
  }
  std::vector<PatronId> picks;
  MatchState state;
  bool started = false;
  for (const Entry& e : history) {
    switch (e.kind) {
      case Entry::Kind::Draft:
        picks.push_back(e.patron);
        if (picks.size() == kDraftOrder.size()) {
          std::array<PatronId, 4> p{};
          std::copy(picks.begin(), picks.end(), p.begin());
          state = new_match(cards, p, game_seed(seed));
          started = true;
        }
        break;
      case Entry::Kind::Move:
        apply(state, e.move);
        break;
      case Entry::Kind::Forfeit:
        if (started) forfeit(state, e.outcome, nullptr);
        break;
    }
  }
  return state;
}

MatchState SessionManager::state(const std::string& id) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  return s->state;
}

}  // namespace tribute::service
