"""Tales of Tribute simulator: rules engine, agents, tournaments and sessions."""

import json as _json

from . import _core

__all__ = ["agent_names", "ci_half_width", "run_match", "tournament", "Game", "Sessions", "ServiceError"]

agent_names = _core.agent_names
ci_half_width = _core.ci_half_width


def _search_text(search):
    return "" if not search else _json.dumps(search)


def run_match(first, second, seed=0, search=None, events=False):
    """Play one match between two registered agents; returns a dict."""
    return _json.loads(_core.run_match(first, second, seed, _search_text(search), events))


def tournament(agents, games_per_pair=200, seed=1, threads=1, search=None):
    """Round robin in mirrored pairs; win_rate[a][b] is a's score against b."""
    return _json.loads(_core.tournament(list(agents), games_per_pair, seed, threads, _search_text(search)))


class ServiceError(Exception):
    """A rejected session request; carries the HTTP-style status and code."""

    def __init__(self, payload):
        super().__init__(payload.get("message", payload.get("error")))
        self.status = payload.get("status")
        self.code = payload.get("error")
        self.details = payload


class Game:
    """Full-information rules engine for one match."""

    def __init__(self, seed, patrons=("Ansei", "Crows", "Hlaalu", "Pelin")):
        self._g = _core.Game(seed, list(patrons))

    def legal_moves(self):
        return _json.loads(self._g.legal_moves_json())

    def play(self, move):
        if isinstance(move, int):
            self._g.play_index(move)
        else:
            self._g.play_json(_json.dumps(move))

    def state(self):
        return _json.loads(self._g.state_json())

    finished = property(lambda self: self._g.finished)
    turn = property(lambda self: self._g.turn)
    current = property(lambda self: self._g.current)


class Sessions:
    """In-process human-vs-AI sessions with the same contract as the HTTP service."""

    def __init__(self):
        self._s = _core.Sessions()

    def _call(self, fn, *args):
        try:
            return _json.loads(fn(*args))
        except ValueError as e:
            try:
                payload = _json.loads(str(e))
            except ValueError:
                raise e from None
            raise ServiceError(payload) from None

    def create(self, **options):
        return self._call(self._s.create, _json.dumps(options))

    def snapshot(self, sid):
        return self._call(self._s.snapshot, sid)

    def draft(self, sid, patron):
        return self._call(self._s.draft, sid, patron)

    def move(self, sid, move):
        if isinstance(move, int):
            return self._call(self._s.move_index, sid, move)
        return self._call(self._s.move, sid, _json.dumps(move))

    def ai_step(self, sid):
        return self._call(self._s.ai_step, sid)

    def ai_turn(self, sid):
        return self._call(self._s.ai_turn, sid)

    def history(self, sid):
        return self._call(self._s.history, sid)

    def remove(self, sid):
        self._s.remove(sid)
