import pytest

from egverify import oracle
from egverify.detect import ForbiddenCycleSpec
from egverify.explorer import (
    Outcome,
    SearchConfig,
    explore,
    explore_python,
    run_verification,
    special_search,
)
from egverify.graph import fingerprint, new_path

from .conftest import petersen

POW2 = ForbiddenCycleSpec.powers_of_two()
FOUR_EIGHT = ForbiddenCycleSpec.explicit([4, 8])
ONLY_FOUR = ForbiddenCycleSpec.explicit([4])

# (nodes, safe sets, max depth, max n, budget hits) from the first correct serial run
PINNED = {
    ("pow2", 3): (2, 3, 2, 4, 0),
    ("pow2", 4): (2, 3, 2, 5, 0),
    ("pow2", 5): (3, 8, 2, 6, 0),
    ("pow2", 6): (21, 57, 5, 10, 0),
    ("pow2", 7): (69, 217, 7, 13, 0),
    ("pow2", 8): (124, 425, 8, 15, 0),
    ("pow2", 9): (511, 1930, 12, 20, 0),
    ("pow2", 10): (3007, 10422, 18, 27, 0),
    ("pow2", 11): (22338, 69453, 25, 35, 0),
    ("4,8", 9): (511, 2024, 12, 20, 0),
    ("4,8", 10): (3012, 14104, 18, 27, 0),
    ("4,8", 11): (22821, 198678, 25, 35, 0),
}


def _spec(name):
    return ForbiddenCycleSpec.parse(name)


@pytest.mark.parametrize("engine", ["python", "native"])
def test_p3_start_is_verified(engine):
    out = explore(new_path(3), SearchConfig(k=3, engine=engine))
    assert out.kind is Outcome.VERIFIED
    assert out.certificates == []


@pytest.mark.parametrize("forbid, k", sorted(PINNED))
def test_pinned_statistics_native(forbid, k):
    out = run_verification(k, SearchConfig(k=k, cycle_spec=_spec(forbid), engine="native"))
    assert out.kind is Outcome.VERIFIED
    assert out.stats.counts() == PINNED[forbid, k]


@pytest.mark.parametrize("forbid", ["pow2", "4,8"])
@pytest.mark.parametrize("k", range(3, 10))
def test_engines_agree(forbid, k):
    py = run_verification(k, SearchConfig(k=k, cycle_spec=_spec(forbid), engine="python"))
    nat = run_verification(k, SearchConfig(k=k, cycle_spec=_spec(forbid), engine="native"))
    assert py.kind is nat.kind is Outcome.VERIFIED
    assert py.stats.counts() == nat.stats.counts()
    if (forbid, k) in PINNED:
        assert py.stats.counts() == PINNED[forbid, k]


@pytest.mark.parametrize("forbid", ["pow2", "4,8", "4"])
@pytest.mark.parametrize("k", range(3, 8))
def test_invariants_hold_throughout(forbid, k):
    """Undo restores every frame, entry graphs are clean, and post-check graphs are P_k-free."""
    g = new_path(k)
    before = fingerprint(g)
    out = explore_python(g, SearchConfig(k=k, cycle_spec=_spec(forbid), collect_all=True, check_invariants=True))
    assert fingerprint(g) == before
    assert g.log is None
    for cert in out.certificates:
        assert cert.properties(k, _spec(forbid))["is_counterexample"]


def test_serial_runs_are_deterministic():
    def trace(k):
        events = []
        out = run_verification(k, SearchConfig(k=k, engine="python"), sink=events.append)
        return out.stats.counts(), events

    assert trace(7) == trace(7)


def test_trace_events_shape():
    events = []
    run_verification(4, SearchConfig(k=4, engine="python"), sink=events.append)
    assert events[0] == {"event": "start", "k": 4, "forbid": "pow2"}
    assert events[1]["event"] == "enter" and events[1]["n"] == 4 and events[1]["anchor"] == 3
    assert {e["result"] for e in events if e["event"] == "branch"} <= {"induced-path", "grow", "budget", "counterexample"}


@pytest.mark.parametrize("engine", ["python", "native"])
@pytest.mark.parametrize("k", range(3, 11))
def test_serial_parallel_agree(engine, k):
    if engine == "python" and k > 9:
        pytest.skip("reference engine is slow above k=9")
    serial = run_verification(k, SearchConfig(k=k, engine=engine))
    par = run_verification(k, SearchConfig(k=k, engine=engine, threads=2, spawn_depth=2))
    assert serial.kind is par.kind
    assert serial.stats.counts() == par.stats.counts()


def test_parallel_spawn_depths_agree():
    counts = {
        d: run_verification(10, SearchConfig(k=10, threads=2, spawn_depth=d, engine="native")).stats.counts()
        for d in (1, 2, 4)
    }
    assert len(set(counts.values())) == 1


def test_budget_is_never_verified():
    out = run_verification(5, SearchConfig(k=5, max_vertices=4))
    assert out.kind is Outcome.BUDGET_EXHAUSTED
    for engine in ("python", "native"):
        out = run_verification(9, SearchConfig(k=9, max_vertices=14, engine=engine))
        assert out.kind is Outcome.BUDGET_EXHAUSTED
        assert out.stats.budget_hits > 0
        assert out.stats.max_n <= 14


def test_budget_at_max_size_still_verifies():
    # k=9 never grows beyond 20 vertices
    out = run_verification(9, SearchConfig(k=9, max_vertices=20))
    assert out.kind is Outcome.VERIFIED


@pytest.mark.parametrize("engine", ["python", "native"])
def test_only_four_forbidden_finds_counterexample(engine):
    out = run_verification(6, SearchConfig(k=6, cycle_spec=ONLY_FOUR, engine=engine))
    assert out.kind is Outcome.COUNTEREXAMPLE
    assert len(out.certificates) == 1
    cert = out.certificates[0]
    props = cert.properties(6, ONLY_FOUR)
    assert props["is_counterexample"]
    assert props["min_degree"] >= 3
    assert 8 in props["cycle_spectrum"]
    assert oracle.are_isomorphic(cert.graph(), petersen())


def test_collect_all_keeps_searching():
    first = run_verification(8, SearchConfig(k=8, cycle_spec=ONLY_FOUR))
    every = run_verification(8, SearchConfig(k=8, cycle_spec=ONLY_FOUR, collect_all=True))
    assert first.kind is every.kind is Outcome.COUNTEREXAMPLE
    assert len(every.certificates) > len(first.certificates) == 1
    assert every.stats.nodes > first.stats.nodes
    for cert in every.certificates[:20]:
        assert oracle.is_counterexample(cert.graph(), 8, ONLY_FOUR)


def test_parallel_collects_valid_certificates():
    out = run_verification(8, SearchConfig(k=8, cycle_spec=ONLY_FOUR, threads=2))
    assert out.kind is Outcome.COUNTEREXAMPLE
    for cert in out.certificates:
        assert oracle.is_counterexample(cert.graph(), 8, ONLY_FOUR)


def test_degree_cap_certificates_are_cubic():
    out = run_verification(8, SearchConfig(k=8, cycle_spec=ONLY_FOUR, degree_cap=3, collect_all=True, max_vertices=16))
    assert out.certificates
    for cert in out.certificates:
        g = cert.graph()
        assert set(g.deg) == {3}


def test_special_search_below_minimum_order():
    out = special_search(18, max_vertices=20)
    assert out.certificates == []
    assert out.kind is Outcome.BUDGET_EXHAUSTED


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(k=2)
    with pytest.raises(ValueError):
        SearchConfig(k=5, max_vertices=65)
    with pytest.raises(ValueError):
        SearchConfig(k=5, engine="gpu")
