from __future__ import annotations

import itertools
import os

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from egverify.graph import Graph

settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")


@st.composite
def graphs(draw, min_n: int = 0, max_n: int = 10, density: float | None = None) -> Graph:
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    if density is None:
        density = draw(st.sampled_from([0.15, 0.3, 0.5, 0.8]))
    flags = draw(st.lists(st.floats(0, 1), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [p for p, f in zip(pairs, flags) if f < density])


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


# -- slow tests and the acceptance summary ----------------------------------

_ACCEPTANCE: list[tuple[str, str, str]] = []


def pytest_addoption(parser):
    parser.addoption("--run-slow", action="store_true", default=False, help="run extended (slow) criteria")


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(label): acceptance criterion reported in the summary")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-slow") or os.environ.get("EGVERIFY_RUN_SLOW") == "1":
        return
    skip = pytest.mark.skip(reason="extended criterion; use --run-slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    label = marker.args[0]
    if report.when == "setup" and report.skipped:
        _ACCEPTANCE.append((label, "SKIP", item.name))
    elif report.when == "call":
        _ACCEPTANCE.append((label, "PASS" if report.passed else "FAIL", item.name))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, status, name in _ACCEPTANCE:
        terminalreporter.write_line(f"{status:4s}  {label}  ({name})")
