import os
from fractions import Fraction
from pathlib import Path

import pytest

import tpta

FIXTURES = Path(os.environ.get("TPTA_FIXTURES", Path(__file__).resolve().parents[1] / "fixtures"))


@pytest.fixture(scope="module")
def rooms():
    return tpta.Problem.load(str(FIXTURES / "rooms.json"))


def plan(problem, name):
    return tpta.parse_plan(problem, (FIXTURES / name).read_text())


def test_problem_round_trip(rooms):
    again = tpta.Problem.from_json(rooms.to_json())
    assert again.to_json() == rooms.to_json()
    assert len(rooms.actions) == 24
    assert len(rooms.props) == 16


def test_validate(rooms):
    good = tpta.validate(plan(rooms, "rooms_valid.plan"))
    assert good["valid"] and good["no_self_overlap"] and good["diagnostics"] == []
    bad = tpta.validate(plan(rooms, "rooms_a3_at_t3.plan"), epsilon=Fraction(0))
    assert not bad["valid"]
    assert any(d["clause"] == 8 and d["time"] == Fraction(3) for d in bad["diagnostics"])


def test_encode_sizes(rooms):
    net = tpta.encode(rooms, epsilon="1/2")
    n = len(rooms.actions)
    assert net.sizes == {
        "automata": n + 1,
        "vars": 2 * len(rooms.props) + 2,
        "clocks": 2 * n,
        "locations": 3 + 4 * n,
        "transitions": 3 + 5 * n,
    }
    assert net.export() == tpta.encode(rooms, epsilon="1/2").export()
    assert "E<> L[0] == goal_M" in net.export("checker-compat")


@pytest.mark.parametrize("order", ["proof", "figure"])
def test_witness(rooms, order):
    net = tpta.encode(rooms)
    run = tpta.build_witness(net, plan(rooms, "rooms_valid.plan"), order=order)
    assert tpta.run_check(run)["accepted"]
    assert tpta.ef_goal(run)
    assert run.labels[0] == "e1M" and run.labels[-1] == "e2M"
    back = tpta.load_run(net, run.to_json())
    assert tpta.run_check(back)["accepted"]


def test_witness_rejects_invalid_plan(rooms):
    with pytest.raises(tpta.WitnessError):
        tpta.build_witness(tpta.encode(rooms), plan(rooms, "rooms_a3_at_t3.plan"))


def test_explore():
    tiny = tpta.Problem.load(str(FIXTURES / "tiny.json"))
    r = tpta.explore(tpta.encode(tiny))
    assert r["status"] == "found"
    assert tpta.run_check(r["run"])["accepted"] and tpta.ef_goal(r["run"])
    none = tpta.explore(tpta.encode(tpta.Problem.load(str(FIXTURES / "unreachable.json"))))
    assert none["status"] == "not found" and none["run"] is None
    assert tpta.explore(tpta.encode(tiny), max_configs=2)["status"] == "budget exhausted"


def test_errors():
    tiny = tpta.Problem.load(str(FIXTURES / "tiny.json"))
    with pytest.raises(tpta.ParseError, match="1:4"):
        tpta.parse_plan(tiny, "0: a [1]")
    with pytest.raises(tpta.ResolutionError):
        tpta.parse_plan(tiny, "0: (zz) [1]")
    with pytest.raises(tpta.ParseError):
        tpta.Problem.from_json('{"props": [')
