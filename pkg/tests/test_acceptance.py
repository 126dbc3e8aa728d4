"""Exit criteria.  Each test is one criterion; the terminal summary prints a PASS/FAIL line per test.

Extended criteria (k=13, the full special-graph enumeration) are marked slow
and run with ``pytest --run-slow``.
"""

import itertools
import json
import os
import random
import re
import time

import pytest

from egverify import _kernel, oracle
from egverify.cli import main
from egverify.detect import (
    ForbiddenCycleSpec,
    creates_forbidden_cycle_through,
    enumerate_safe_sets,
    has_induced_path,
)
from egverify.explorer import Outcome, SearchConfig, explore_python, run_verification
from egverify.graph import Graph, cycle_graph, fingerprint, new_path, relabel
from egverify.graph_io import cubic24_fixture, emit_edge_list, emit_graph6, parse_edge_list, parse_graph6

from .conftest import petersen

POW2 = ForbiddenCycleSpec.powers_of_two()
FOUR_EIGHT = ForbiddenCycleSpec.explicit([4, 8])
ONLY_FOUR = ForbiddenCycleSpec.explicit([4])
ROW = re.compile(r"^k=(\d+)\s+forbid=\S+ verdict=(\w+)")
THREADS = max(2, os.cpu_count() or 1)


def _verify_cli(capsys, *argv):
    started = time.perf_counter()
    code = main(["verify", *argv])
    elapsed = time.perf_counter() - started
    out = capsys.readouterr().out
    verdicts = {int(m.group(1)): m.group(2) for m in map(ROW.match, out.splitlines()) if m}
    return code, verdicts, elapsed


@pytest.mark.acceptance("1  k=3..11 pow2 VERIFIED in < 10 min")
def test_pow2_desk_scale(capsys):
    code, verdicts, elapsed = _verify_cli(capsys, "--k", "3..11", "--forbid", "pow2", "--stats")
    assert code == 0
    assert verdicts == {k: "VERIFIED" for k in range(3, 12)}
    assert elapsed < 600


@pytest.mark.acceptance("1x k=12 pow2 VERIFIED")
def test_pow2_k12():
    out = run_verification(12, SearchConfig(k=12))
    assert out.kind is Outcome.VERIFIED


@pytest.mark.acceptance("1x k=12 pow2 VERIFIED by the parallel driver in < 15 min")
def test_pow2_k12_parallel():
    out = run_verification(12, SearchConfig(k=12, threads=THREADS))
    assert out.kind is Outcome.VERIFIED
    assert out.stats.wall_time < 900


@pytest.mark.slow
@pytest.mark.acceptance("1x k=13 pow2 VERIFIED")
def test_pow2_k13():
    out = run_verification(13, SearchConfig(k=13, threads=THREADS))
    assert out.kind is Outcome.VERIFIED


@pytest.mark.acceptance("2  k=3..11 {4,8} VERIFIED in < 15 min")
def test_four_eight_desk_scale(capsys):
    code, verdicts, elapsed = _verify_cli(capsys, "--k", "3..11", "--forbid", "4,8", "--stats")
    assert code == 0
    assert verdicts == {k: "VERIFIED" for k in range(3, 12)}
    assert elapsed < 900


@pytest.mark.acceptance("2x k=12 {4,8} VERIFIED")
def test_four_eight_k12():
    out = run_verification(12, SearchConfig(k=12, cycle_spec=FOUR_EIGHT))
    assert out.kind is Outcome.VERIFIED


@pytest.mark.acceptance("3  bundled fixture: 24 vertices, 36 edges, cubic, no C4/C8, has C16, longest induced path 17, < 2 min")
def test_fixture_validation():
    started = time.perf_counter()
    g = cubic24_fixture()
    assert g.n == 24
    assert g.edge_count == 36
    assert set(g.deg) == {3}
    spectrum = oracle.all_cycle_lengths(g)
    assert 4 not in spectrum and 8 not in spectrum
    assert 16 in spectrum
    assert oracle.longest_induced_path(g) == 17
    assert time.perf_counter() - started < 120


@pytest.mark.slow
@pytest.mark.acceptance("4  special --k 18: exactly 4 classes at minimum order 24, each with C16, one is the fixture")
def test_special_graphs(tmp_path, capsys):
    code = main(["special", "--forbid", "4,8", "--max-degree", "3", "--k", "18",
                 "--max-vertices", "24", "--threads", str(THREADS), "--out", str(tmp_path)])
    capsys.readouterr()
    assert code == 0
    classes = json.loads((tmp_path / "report.json").read_text())["classes"]
    minimum = min(c["order"] for c in classes)
    assert minimum == 24
    smallest = [c for c in classes if c["order"] == minimum]
    assert len(smallest) == 4
    assert all(c["has_16_cycle"] and not c["forbidden_present"] for c in smallest)
    assert sum(c["fixture"] for c in smallest) == 1
    graphs = [parse_graph6(c["graph6"]) for c in smallest]
    assert all(not oracle.are_isomorphic(a, b) for a, b in itertools.combinations(graphs, 2))


@pytest.mark.acceptance("4f special-graph fallback: fixture is a {4,8} counterexample at k=18; relabelings dedup to one class")
def test_special_graphs_fallback():
    g = cubic24_fixture()
    assert oracle.is_counterexample(g, 18, FOUR_EIGHT)
    rnd = random.Random(2024)
    copies = [g] + [relabel(g, rnd.sample(range(24), 24)) for _ in range(2)]
    assert oracle.isomorphism_classes(copies) == [[0, 1, 2]]


def _random_graph(rnd: random.Random, n: int, p: float) -> Graph:
    return Graph.from_edges(n, [e for e in itertools.combinations(range(n), 2) if rnd.random() < p])


@pytest.mark.acceptance("5  property suite: detector/oracle equivalence, restoration, certificates, serial/parallel, round-trips, < 5 min")
def test_property_suite():
    started = time.perf_counter()
    rnd = random.Random(5)
    specs = [POW2, FOUR_EIGHT, ONLY_FOUR]

    for _ in range(150):
        g = _random_graph(rnd, rnd.randint(3, 12), rnd.choice([0.2, 0.35, 0.5]))
        v = rnd.randrange(g.n)
        spec = rnd.choice(specs)
        expected = any(spec.is_forbidden(x) for x in oracle.cycle_lengths_through(g, v))
        assert creates_forbidden_cycle_through(g, v, spec) == expected

    for _ in range(200):
        g = _random_graph(rnd, rnd.randint(3, 10), rnd.choice([0.2, 0.35, 0.5]))
        k = rnd.randint(3, g.n)
        assert has_induced_path(g, k) == (oracle.longest_induced_path(g) >= k)

    for _ in range(100):
        spec = rnd.choice(specs)
        g = _random_graph(rnd, rnd.randint(2, 8), 0.3)
        while any(spec.is_forbidden(x) for x in oracle.all_cycle_lengths(g)):
            g.remove_edge(*rnd.choice(g.edges()))
        w = g.add_vertex()
        g.add_edge(rnd.randrange(w), w)
        cand = [u for u in range(w) if not g.has_edge(u, w)]
        brute = set()
        for r in range(len(cand) + 1):
            for sub in itertools.combinations(cand, r):
                h = g.copy()
                for u in sub:
                    h.add_edge(u, w)
                if not any(spec.is_forbidden(x) for x in oracle.all_cycle_lengths(h)):
                    brute.add(sub)
        got = list(enumerate_safe_sets(g, spec))
        assert set(got) == brute and len(got) == len(brute)
        assert _kernel.native_safe_sets(g, spec) == got

    for spec in specs:
        for k in range(3, 8):
            g = new_path(k)
            before = fingerprint(g)
            out = explore_python(g, SearchConfig(k=k, cycle_spec=spec, collect_all=True, check_invariants=True))
            assert fingerprint(g) == before
            for cert in out.certificates:
                assert oracle.is_counterexample(cert.graph(), k, spec)

    for k in range(3, 11):
        serial = run_verification(k, SearchConfig(k=k))
        parallel = run_verification(k, SearchConfig(k=k, threads=2))
        assert serial.kind is parallel.kind is Outcome.VERIFIED

    for _ in range(300):
        g = _random_graph(rnd, rnd.randint(0, 40), 0.2)
        assert parse_edge_list(emit_edge_list(g)) == g
        h = _random_graph(rnd, rnd.randint(0, 62), 0.2)
        assert parse_graph6(emit_graph6(h)) == h

    assert time.perf_counter() - started < 300


@pytest.mark.acceptance("6  negative control: forbidding only {4} changes verdicts on C8-containing probes")
def test_negative_control():
    c8 = cycle_graph(8)
    pet = petersen()
    assert oracle.all_cycle_lengths(c8) == {8}
    assert 8 in oracle.all_cycle_lengths(pet) and 4 not in oracle.all_cycle_lengths(pet)

    # the fixture is counterexample-shaped under both regimes
    fixture = cubic24_fixture()
    assert oracle.is_counterexample(fixture, 18, FOUR_EIGHT)
    assert oracle.is_counterexample(fixture, 18, ONLY_FOUR)

    # probes that contain an 8-cycle classify differently
    assert creates_forbidden_cycle_through(c8, 0, FOUR_EIGHT)
    assert not creates_forbidden_cycle_through(c8, 0, ONLY_FOUR)
    assert not oracle.is_counterexample(pet, 7, FOUR_EIGHT)
    assert oracle.is_counterexample(pet, 7, ONLY_FOUR)

    # and the engine itself diverges
    strict = run_verification(6, SearchConfig(k=6, cycle_spec=FOUR_EIGHT))
    loose = run_verification(6, SearchConfig(k=6, cycle_spec=ONLY_FOUR))
    assert strict.kind is Outcome.VERIFIED
    assert loose.kind is Outcome.COUNTEREXAMPLE
    assert oracle.are_isomorphic(loose.certificates[0].graph(), pet)
