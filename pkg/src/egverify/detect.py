"""Forbidden-cycle and induced-path detectors, and the safe-neighbor-set enumerator.

The detectors are incremental: they look only at structure through one
vertex (or one new edge) and rely on the caller's guarantee that the rest of
the graph is already clean.  The whole-graph forms are provided for
validators.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator

from .graph import Graph, iter_bits

POWERS_OF_TWO = "pow2"
EXPLICIT = "explicit"


@dataclass(frozen=True)
class ForbiddenCycleSpec:
    mode: str = POWERS_OF_TWO
    explicit_lengths: frozenset[int] = frozenset()

    def __post_init__(self) -> None:
        if self.mode not in (POWERS_OF_TWO, EXPLICIT):
            raise ValueError(f"unknown cycle spec mode {self.mode!r}")
        if self.mode == EXPLICIT:
            if not self.explicit_lengths:
                raise ValueError("explicit cycle spec needs at least one length")
            bad = [x for x in self.explicit_lengths if x < 3]
            if bad:
                raise ValueError(f"cycle lengths must be >= 3, got {sorted(bad)}")

    @classmethod
    def powers_of_two(cls) -> ForbiddenCycleSpec:
        return cls(POWERS_OF_TWO)

    @classmethod
    def explicit(cls, lengths) -> ForbiddenCycleSpec:
        return cls(EXPLICIT, frozenset(int(x) for x in lengths))

    @classmethod
    def parse(cls, text: str) -> ForbiddenCycleSpec:
        """``"pow2"`` or a comma-separated length list such as ``"4,8"``."""
        text = text.strip().lower()
        if text in ("pow2", "powers-of-two", "powers_of_two"):
            return cls.powers_of_two()
        if not re.fullmatch(r"\d+(\s*,\s*\d+)*", text):
            raise ValueError(f"bad forbidden-cycle spec {text!r}")
        return cls.explicit(int(x) for x in text.split(","))

    def is_forbidden(self, length: int) -> bool:
        if self.mode == POWERS_OF_TWO:
            return length >= 4 and length & (length - 1) == 0
        return length in self.explicit_lengths

    def lengths_up_to(self, n: int) -> tuple[int, ...]:
        return tuple(x for x in range(3, n + 1) if self.is_forbidden(x))

    def mask(self, n: int = 64) -> int:
        """Bitmask with bit ``l`` set for every forbidden length ``l <= n``."""
        m = 0
        for x in self.lengths_up_to(n):
            m |= 1 << x
        return m

    def __str__(self) -> str:
        if self.mode == POWERS_OF_TWO:
            return "pow2"
        return ",".join(str(x) for x in sorted(self.explicit_lengths))


def _distances_to(g: Graph, target: int, extra: int = 0, skip: tuple[int, int] | None = None) -> list[int]:
    """BFS distances to ``target``; ``extra`` adds neighbors of ``target``, ``skip`` drops one edge."""
    n = g.n
    adj = g.adj
    inf = n + 1
    dist = [inf] * n
    dist[target] = 0
    start = adj[target] | extra
    if skip is not None:
        start &= ~(1 << skip[1])
    frontier = start
    seen = start | 1 << target
    d = 1
    while frontier:
        nxt = 0
        for x in iter_bits(frontier):
            dist[x] = d
            nxt |= adj[x]
        frontier = nxt & ~seen
        seen |= frontier
        d += 1
    return dist


def closes_forbidden_cycle(
    g: Graph, v: int, c: int, spec: ForbiddenCycleSpec, extra: int = 0
) -> bool:
    """Would the edge ``{v, c}`` lie on a forbidden cycle?

    ``extra`` is a mask of further vertices to treat as neighbors of ``v``
    (edges already chosen but not yet applied).  The edge ``{v, c}`` itself
    may or may not be present in ``g``.
    """
    lengths = spec.mask(g.n)
    if not lengths:
        return False
    lmax = lengths.bit_length() - 1
    adj = g.adj
    vnbrs = (adj[v] | extra) & ~(1 << c)
    dist = _distances_to(g, v, extra, skip=(v, c))
    # depth-first walk of simple paths c -> ... -> x; cycle length = depth + 2
    stack = [(c, 0, 1 << v | 1 << c)]
    while stack:
        x, d, used = stack.pop()
        if d and vnbrs >> x & 1 and lengths >> (d + 2) & 1:
            return True
        if d + 3 > lmax:
            continue
        for y in iter_bits(adj[x] & ~used):
            if 1 + (d + 1) + dist[y] <= lmax:
                stack.append((y, d + 1, used | 1 << y))
    return False


def creates_forbidden_cycle_through(g: Graph, v: int, spec: ForbiddenCycleSpec) -> bool:
    """True iff some cycle through ``v`` has a forbidden length."""
    return any(closes_forbidden_cycle(g, v, c, spec) for c in iter_bits(g.adj[v]))


def has_forbidden_cycle(g: Graph, spec: ForbiddenCycleSpec) -> bool:
    return any(creates_forbidden_cycle_through(g, v, spec) for v in range(g.n))


def has_induced_path_through(g: Graph, v: int, k: int) -> bool:
    """True iff ``g`` has an induced path on ``k`` vertices that contains ``v``.

    Paths are grown to the right from ``v`` first and then to the left, so
    each path is reached at most once per orientation.
    """
    if k <= 1:
        return g.n > 0
    adj = g.adj
    # state: left end, right end, length, path mask, blocked mask (path plus
    # neighbors of interior vertices), growing-left flag
    stack = [(v, v, 1, 1 << v, 1 << v, False)]
    while stack:
        left, right, size, path, blocked, leftward = stack.pop()
        if size == k:
            return True
        if size == 1:
            # a path ending at v is found reversed, so v only starts on the left
            for w in iter_bits(adj[v]):
                both = 1 << v | 1 << w
                stack.append((v, w, 2, both, both, False))
            continue
        if not leftward:
            # switching direction keeps the state; it only forbids further right growth
            stack.append((left, right, size, path, blocked, True))
            cand = adj[right] & ~blocked & ~adj[left]
            grown = blocked | adj[right]
            for w in iter_bits(cand):
                stack.append((left, w, size + 1, path | 1 << w, grown | 1 << w, False))
        else:
            cand = adj[left] & ~blocked & ~adj[right]
            grown = blocked | adj[left]
            for w in iter_bits(cand):
                stack.append((w, right, size + 1, path | 1 << w, grown | 1 << w, True))
    return False


def has_induced_path(g: Graph, k: int) -> bool:
    return any(has_induced_path_through(g, v, k) for v in range(g.n))


def enumerate_safe_sets(
    g: Graph, spec: ForbiddenCycleSpec, degree_cap: int | None = None
) -> Iterator[tuple[int, ...]]:
    """Yield every safe neighbor set of the newest vertex, empty set first.

    Sets come in pre-order of the subset lattice with ascending candidates:
    ``()``, ``(a,)``, ``(a, b)``, ..., ``(b,)``, ...  A candidate that closes a
    forbidden cycle together with the current set is dropped from every
    extension of that set as well.  ``g`` is not mutated; consumers may mutate
    it between items provided they restore it before resuming.
    """
    if g.n == 0:
        return
    v = g.n - 1
    room = None
    if degree_cap is not None:
        room = degree_cap - g.deg[v]
        if room <= 0:
            yield ()
            return
    cand = ((1 << v) - 1) & ~g.adj[v]
    if degree_cap is not None:
        for u in iter_bits(cand):
            if g.deg[u] >= degree_cap:
                cand &= ~(1 << u)

    def extend(chosen: int, pool: int, size: int) -> Iterator[tuple[int, ...]]:
        yield tuple(iter_bits(chosen))
        if room is not None and size >= room:
            return
        ok = 0
        for c in iter_bits(pool):
            if not closes_forbidden_cycle(g, v, c, spec, extra=chosen):
                ok |= 1 << c
        for c in iter_bits(ok):
            yield from extend(chosen | 1 << c, ok & ~((2 << c) - 1), size + 1)

    yield from extend(0, cand, 0)
