"""Mutable simple graph on vertices ``0..n-1`` with bitset rows and an undo log.

Each adjacency row is a Python ``int`` used as a bitset: bit ``j`` of
``adj[i]`` is set iff ``{i, j}`` is an edge.  Rows never carry bits at or
above ``n``.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Iterable, Iterator

DEFAULT_CAPACITY = 64

# log entries
EDGE_ADDED = 0
EDGE_REMOVED = 1
VERTEX_ADDED = 2


class CapacityError(ValueError):
    """Raised when a graph would grow past its configured vertex capacity."""


@dataclass
class MutationLog:
    """Ordered record of reversible mutations; rolled back in reverse."""

    entries: list[tuple[int, int, int]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.entries)

    def mark(self) -> int:
        return len(self.entries)


class Graph:
    __slots__ = ("n", "adj", "deg", "capacity", "log")

    def __init__(self, n: int = 0, capacity: int = DEFAULT_CAPACITY) -> None:
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        if n > capacity:
            raise CapacityError(f"{n} vertices exceed capacity {capacity}")
        self.n = n
        self.adj = [0] * n
        self.deg = [0] * n
        self.capacity = capacity
        self.log: MutationLog | None = None

    @classmethod
    def from_edges(
        cls, n: int, edges: Iterable[tuple[int, int]], capacity: int = DEFAULT_CAPACITY
    ) -> Graph:
        g = cls(n, capacity=max(capacity, n))
        for i, j in edges:
            g.add_edge(i, j)
        return g

    @classmethod
    def from_rows(cls, rows: Iterable[int], capacity: int = DEFAULT_CAPACITY) -> Graph:
        rows = [int(r) for r in rows]
        g = cls(len(rows), capacity=max(capacity, len(rows)))
        g.adj = rows
        g.deg = [r.bit_count() for r in rows]
        return g

    def copy(self) -> Graph:
        g = Graph.__new__(Graph)
        g.n = self.n
        g.adj = list(self.adj)
        g.deg = list(self.deg)
        g.capacity = self.capacity
        g.log = None
        return g

    # -- queries ---------------------------------------------------------

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.adj[i] >> j & 1)

    def neighbors(self, v: int) -> Iterator[int]:
        return iter_bits(self.adj[v])

    def edges(self) -> list[tuple[int, int]]:
        """Edges as sorted ``(i, j)`` pairs with ``i < j``."""
        out = []
        for i in range(self.n):
            for j in iter_bits(self.adj[i] >> (i + 1)):
                out.append((i, i + 1 + j))
        return out

    @property
    def edge_count(self) -> int:
        return sum(self.deg) // 2

    def min_degree(self) -> int:
        return min(self.deg) if self.n else 0

    def max_degree(self) -> int:
        return max(self.deg) if self.n else 0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, tuple(self.adj)))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edges()})"

    # -- mutation --------------------------------------------------------

    def add_vertex(self) -> int:
        if self.n >= self.capacity:
            raise CapacityError(f"graph is at capacity ({self.capacity} vertices)")
        v = self.n
        self.adj.append(0)
        self.deg.append(0)
        self.n += 1
        if self.log is not None:
            self.log.entries.append((VERTEX_ADDED, v, v))
        return v

    def add_edge(self, i: int, j: int) -> None:
        self._check_pair(i, j)
        if self.adj[i] >> j & 1:
            raise ValueError(f"edge {{{i}, {j}}} already present")
        self.adj[i] |= 1 << j
        self.adj[j] |= 1 << i
        self.deg[i] += 1
        self.deg[j] += 1
        if self.log is not None:
            self.log.entries.append((EDGE_ADDED, i, j))

    def remove_edge(self, i: int, j: int) -> None:
        self._check_pair(i, j)
        if not self.adj[i] >> j & 1:
            raise ValueError(f"edge {{{i}, {j}}} not present")
        self.adj[i] &= ~(1 << j)
        self.adj[j] &= ~(1 << i)
        self.deg[i] -= 1
        self.deg[j] -= 1
        if self.log is not None:
            self.log.entries.append((EDGE_REMOVED, i, j))

    def _check_pair(self, i: int, j: int) -> None:
        if i == j:
            raise ValueError(f"self-loop at vertex {i}")
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise IndexError(f"vertex pair ({i}, {j}) out of range for n={self.n}")

    # -- undo ------------------------------------------------------------

    def start_log(self) -> MutationLog:
        self.log = MutationLog()
        return self.log

    def rollback(self, mark: int = 0) -> None:
        """Undo logged mutations back to ``mark`` (an earlier ``log.mark()``)."""
        log = self.log
        if log is None:
            raise RuntimeError("no active mutation log")
        self.log = None
        try:
            while len(log.entries) > mark:
                kind, i, j = log.entries.pop()
                if kind == EDGE_ADDED:
                    self.remove_edge(i, j)
                elif kind == EDGE_REMOVED:
                    self.add_edge(i, j)
                else:
                    if self.deg[i] or i != self.n - 1:
                        raise RuntimeError("vertex removal out of order")
                    self.adj.pop()
                    self.deg.pop()
                    self.n -= 1
        finally:
            self.log = log


def new_path(k: int, capacity: int = DEFAULT_CAPACITY) -> Graph:
    """The path ``v_0 v_1 ... v_{k-1}``."""
    if k < 2:
        raise ValueError(f"path needs at least 2 vertices, got {k}")
    return Graph.from_edges(k, ((i, i + 1) for i in range(k - 1)), capacity=capacity)


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def get_largest_low_degree_vertex(g: Graph, threshold: int = 3) -> int | None:
    """Largest index whose degree is below ``threshold``; ``None`` if none."""
    deg = g.deg
    for v in range(g.n - 1, -1, -1):
        if deg[v] < threshold:
            return v
    return None


def fingerprint(g: Graph) -> str:
    h = hashlib.blake2b(digest_size=16)
    h.update(g.n.to_bytes(4, "little"))
    width = (g.n + 7) // 8
    for row in g.adj:
        h.update(row.to_bytes(width, "little"))
    return h.hexdigest()


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def relabel(g: Graph, perm: list[int]) -> Graph:
    """Copy of ``g`` with vertex ``i`` renamed to ``perm[i]``."""
    return Graph.from_edges(g.n, [(perm[i], perm[j]) for i, j in g.edges()], capacity=g.capacity)
