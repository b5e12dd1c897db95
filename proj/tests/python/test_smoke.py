import pytest

import tribute


def test_agents_registered():
    names = tribute.agent_names()
    for n in ["random", "uniform-random", "max-prestige", "patron-favors", "max-agent",
              "decision-tree", "flat-mc", "mcts", "beam-search"]:
        assert n in names


def test_ci_half_width():
    assert abs(tribute.ci_half_width(0.627, 400) - 4.7) <= 0.05
    with pytest.raises(ValueError):
        tribute.ci_half_width(0.5, 0)


def test_match_is_reproducible():
    a = tribute.run_match("random", "decision-tree", seed=11, events=True)
    b = tribute.run_match("random", "decision-tree", seed=11, events=True)
    assert a == {**b, "wall_seconds": a["wall_seconds"]}
    assert a["events"][-1].startswith("GAME_END")
    assert len(a["patrons"]) == 4


def test_search_options_pass_through():
    r = tribute.run_match("mcts", "random", seed=2, search={"iterations": 10})
    assert r["reason"] in {"patron_favor", "sudden_death", "prestige_80", "turn_limit_draw"}
    with pytest.raises(Exception):
        tribute.run_match("mcts", "random", search={"depth_charge": 1})


def test_tournament_table():
    t = tribute.tournament(["random", "max-agent"], games_per_pair=4, seed=3)
    assert t["win_rate"][0][1] + t["win_rate"][1][0] == pytest.approx(1.0)
    assert t["csv"].startswith("agent,opponent,games,wins,losses,draws,win_rate,ci95")


def test_game_plays_to_the_end():
    g = tribute.Game(5)
    steps = 0
    while not g.finished:
        moves = g.legal_moves()
        assert moves
        g.play(len(moves) - 1 if steps % 7 == 0 else 0)
        steps += 1
        assert steps < 100000
    assert g.legal_moves() == []
    st = g.state()
    assert len(st["players"]) == 2


def test_game_rejects_illegal_moves():
    g = tribute.Game(5)
    with pytest.raises(ValueError):
        g.play({"type": "BUY_CARD", "uid": 60000})
    with pytest.raises(IndexError):
        g.play(10**6)


def test_session_round_trip():
    s = tribute.Sessions()
    snap = s.create(agent="random", human_seat=0, seed="42")
    sid = snap["session"]
    assert snap["seed"] == "42"
    while snap["phase"] == "draft":
        snap = s.draft(sid, snap["draft"]["pool"][0])
    with pytest.raises(tribute.ServiceError) as err:
        s.ai_step(sid)
    assert err.value.status == 409
    with pytest.raises(tribute.ServiceError) as err:
        s.move(sid, {"type": "BUY_CARD", "uid": 60000})
    assert err.value.status == 422 and err.value.code == "illegal_move"
    while snap["phase"] == "play":
        snap = s.move(sid, 0) if snap["human_to_move"] else s.ai_turn(sid)
    assert snap["phase"] == "finished"
    assert s.history(sid)["entries"]
    s.remove(sid)
    with pytest.raises(tribute.ServiceError) as err:
        s.snapshot(sid)
    assert err.value.status == 404
