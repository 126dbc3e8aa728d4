"""Backtracking search for P_k-free counterexamples.

A search state is a graph whose newest vertex ``v_{n-1}`` is the growth
frontier.  For every safe neighbor set ``S`` of the frontier the edges
``S x {v_{n-1}}`` are added; branches with an induced ``P_k`` are dropped,
graphs of minimum degree 3 are counterexamples, and otherwise a pendant
vertex is hung on the largest-index vertex of degree below 3 and the search
recurses on it.

Two engines implement the same traversal: a pure-Python one built on
:class:`~egverify.graph.Graph` with an undo log (used for tracing and
invariant checking) and a compiled one in :mod:`egverify._kernel`.  Both
visit the same tree in the same order and report identical statistics.
"""

from __future__ import annotations

import enum
import logging
import time
from dataclasses import dataclass, field
from typing import Callable

from . import oracle
from .detect import ForbiddenCycleSpec, enumerate_safe_sets, has_induced_path_through
from .graph import DEFAULT_CAPACITY, Graph, fingerprint, get_largest_low_degree_vertex, new_path

log = logging.getLogger(__name__)

EventSink = Callable[[dict], None]


class Outcome(enum.Enum):
    VERIFIED = "VERIFIED"
    COUNTEREXAMPLE = "COUNTEREXAMPLE"
    BUDGET_EXHAUSTED = "BUDGET_EXHAUSTED"


@dataclass
class SearchConfig:
    k: int
    cycle_spec: ForbiddenCycleSpec = field(default_factory=ForbiddenCycleSpec.powers_of_two)
    degree_cap: int | None = None
    max_vertices: int | None = None
    threads: int = 1
    spawn_depth: int = 2
    collect_all: bool = False
    engine: str = "auto"
    # python engine only: check restoration and loop invariants (via the oracle) at every node
    check_invariants: bool = False

    def __post_init__(self) -> None:
        if self.k < 3:
            raise ValueError(f"k must be at least 3, got {self.k}")
        if self.max_vertices is not None and not 0 < self.max_vertices <= DEFAULT_CAPACITY:
            raise ValueError(f"max_vertices must be in 1..{DEFAULT_CAPACITY}")
        if self.degree_cap is not None and self.degree_cap < 3:
            raise ValueError("degree cap below 3 leaves no counterexample to find")
        if self.threads < 1:
            raise ValueError("threads must be positive")
        if self.engine not in ("auto", "python", "native"):
            raise ValueError(f"unknown engine {self.engine!r}")

    @property
    def vertex_limit(self) -> int:
        return self.max_vertices if self.max_vertices is not None else DEFAULT_CAPACITY


@dataclass
class SearchStats:
    nodes: int = 0
    safe_sets: int = 0
    max_depth: int = 0
    max_n: int = 0
    budget_hits: int = 0
    wall_time: float = 0.0

    def merge(self, other: SearchStats) -> None:
        self.nodes += other.nodes
        self.safe_sets += other.safe_sets
        self.max_depth = max(self.max_depth, other.max_depth)
        self.max_n = max(self.max_n, other.max_n)
        self.budget_hits += other.budget_hits

    def counts(self) -> tuple[int, int, int, int, int]:
        return (self.nodes, self.safe_sets, self.max_depth, self.max_n, self.budget_hits)


@dataclass(frozen=True)
class CertificateGraph:
    """Immutable snapshot of a graph the search reported as a counterexample."""

    n: int
    edges: tuple[tuple[int, int], ...]

    @classmethod
    def from_graph(cls, g: Graph) -> CertificateGraph:
        return cls(g.n, tuple(g.edges()))

    def graph(self) -> Graph:
        return Graph.from_edges(self.n, self.edges)

    def properties(self, k: int, spec: ForbiddenCycleSpec) -> dict:
        """Oracle-computed properties: degrees, induced-path bound, cycle spectrum."""
        g = self.graph()
        spectrum = oracle.all_cycle_lengths(g)
        lip = oracle.longest_induced_path(g)
        return {
            "n": g.n,
            "edges": g.edge_count,
            "min_degree": g.min_degree(),
            "max_degree": g.max_degree(),
            "longest_induced_path": lip,
            "cycle_spectrum": sorted(spectrum),
            "forbidden_present": sorted(x for x in spectrum if spec.is_forbidden(x)),
            "is_counterexample": g.min_degree() >= 3 and lip < k and not any(spec.is_forbidden(x) for x in spectrum),
        }


@dataclass
class SearchOutcome:
    kind: Outcome
    certificates: list[CertificateGraph] = field(default_factory=list)
    stats: SearchStats = field(default_factory=SearchStats)

    @property
    def verified(self) -> bool:
        return self.kind is Outcome.VERIFIED


def _combine(found: bool, budget_hit: bool) -> Outcome:
    if found:
        return Outcome.COUNTEREXAMPLE
    if budget_hit:
        return Outcome.BUDGET_EXHAUSTED
    return Outcome.VERIFIED


class InvariantError(AssertionError):
    pass


def explore_python(g: Graph, config: SearchConfig, sink: EventSink | None = None) -> SearchOutcome:
    """Reference engine: explicit-stack traversal over ``g`` with an undo log.

    ``g`` is restored to its initial state on return.  The frames on the
    stack correspond one-to-one with recursive calls; each frame remembers the
    log position at its entry and rolls back to it before trying the next
    safe set.
    """
    return _explore_python(g, config, sink)[0]


def _explore_python(
    g: Graph,
    config: SearchConfig,
    sink: EventSink | None = None,
    split_depth: int = 0,
    depth_offset: int = 0,
) -> tuple[SearchOutcome, list[Graph]]:
    """With ``split_depth > 0`` children entering that depth are returned, not searched."""
    if g.n < 1:
        raise ValueError("search needs a frontier vertex")
    if g.n > config.vertex_limit:
        raise ValueError(f"start graph has {g.n} vertices, above the limit {config.vertex_limit}")
    spec = config.cycle_spec
    k = config.k
    cap = config.degree_cap
    threshold = 3
    checks = config.check_invariants
    limit = config.vertex_limit

    stats = SearchStats()
    certificates: list[CertificateGraph] = []
    frontier: list[Graph] = []
    found = False
    budget_hit = False
    started = time.perf_counter()

    saved_log = g.log
    undo = g.start_log()

    def enter() -> tuple:
        stats.nodes += 1
        depth = len(frames) + 1 + depth_offset
        stats.max_depth = max(stats.max_depth, depth)
        stats.max_n = max(stats.max_n, g.n)
        if checks and any(spec.is_forbidden(x) for x in oracle.all_cycle_lengths(g)):
            raise InvariantError(f"forbidden cycle on entry at depth {depth}")
        if sink:
            sink({"event": "enter", "depth": depth, "n": g.n, "anchor": _anchor_of(g)})
        return (enumerate_safe_sets(g, spec, cap), undo.mark(), fingerprint(g) if checks else None)

    frames: list[tuple] = []
    frames.append(enter())
    try:
        while frames:
            gen, mark, fp = frames[-1]
            g.rollback(mark)
            if checks and fingerprint(g) != fp:
                raise InvariantError(f"graph not restored at depth {len(frames)}")
            safe = next(gen, None)
            if safe is None:
                frames.pop()
                continue
            stats.safe_sets += 1
            v = g.n - 1
            for u in safe:
                g.add_edge(u, v)
            if has_induced_path_through(g, v, k):
                if sink:
                    sink({"event": "branch", "depth": depth_offset + len(frames), "n": g.n, "S": safe, "result": "induced-path"})
                continue
            if checks and oracle.longest_induced_path(g) >= k:
                raise InvariantError("induced path missed by the anchored check")
            anchor = get_largest_low_degree_vertex(g, threshold)
            if anchor is None:
                certificates.append(CertificateGraph.from_graph(g))
                found = True
                if sink:
                    sink({"event": "branch", "depth": depth_offset + len(frames), "n": g.n, "S": safe, "result": "counterexample"})
                if not config.collect_all:
                    break
                continue
            if g.n + 1 > limit:
                budget_hit = True
                stats.budget_hits += 1
                if sink:
                    sink({"event": "branch", "depth": depth_offset + len(frames), "n": g.n, "S": safe, "result": "budget"})
                continue
            if sink:
                sink({"event": "branch", "depth": depth_offset + len(frames), "n": g.n, "S": safe, "result": "grow", "anchor": anchor})
            w = g.add_vertex()
            g.add_edge(anchor, w)
            if split_depth and len(frames) + 1 == split_depth:
                frontier.append(g.copy())
                continue
            frames.append(enter())
    finally:
        g.rollback(0)
        g.log = saved_log

    stats.wall_time = time.perf_counter() - started
    return SearchOutcome(_combine(found, budget_hit), certificates, stats), frontier


def _anchor_of(g: Graph) -> int:
    a = get_largest_low_degree_vertex(g)
    return -1 if a is None else a


def _use_native(config: SearchConfig) -> bool:
    if config.engine == "python" or config.check_invariants:
        return False
    if config.engine == "native":
        return True
    from . import _kernel

    return _kernel.available()


def explore(g: Graph, config: SearchConfig, sink: EventSink | None = None) -> SearchOutcome:
    """Search all extensions of ``g`` for a counterexample.

    VERIFIED means no branch found one; BUDGET_EXHAUSTED means some branch was
    cut off by ``max_vertices`` (never reported as VERIFIED); COUNTEREXAMPLE
    carries the certificates.
    """
    if g.n > config.vertex_limit:
        # the start graph alone is over budget: nothing was searched
        return SearchOutcome(Outcome.BUDGET_EXHAUSTED, stats=SearchStats(budget_hits=1))
    if config.threads > 1:
        from .parallel import explore_parallel

        return explore_parallel(g, config, sink)
    if _use_native(config):
        from . import _kernel

        return _kernel.explore_native(g, config)
    return explore_python(g, config, sink)


def run_verification(k: int, config: SearchConfig | None = None, sink: EventSink | None = None) -> SearchOutcome:
    """Search from the path ``v_0 ... v_{k-1}``."""
    if config is None:
        config = SearchConfig(k=k)
    elif config.k != k:
        raise ValueError(f"config.k={config.k} does not match k={k}")
    if sink:
        sink({"event": "start", "k": k, "forbid": str(config.cycle_spec)})
    return explore(new_path(k), config, sink)


def special_search(
    k: int,
    max_vertices: int = 24,
    cycle_spec: ForbiddenCycleSpec | None = None,
    degree_cap: int = 3,
    threads: int = 1,
    engine: str = "auto",
) -> SearchOutcome:
    """Collect every degree-capped counterexample reachable from ``P_k`` within the budget."""
    config = SearchConfig(
        k=k,
        cycle_spec=cycle_spec or ForbiddenCycleSpec.explicit([4, 8]),
        degree_cap=degree_cap,
        max_vertices=max_vertices,
        collect_all=True,
        threads=threads,
        engine=engine,
    )
    return run_verification(k, config)
