"""Slow reference implementations.

Everything here favors being obviously correct over being fast; the search
engine's detectors are tested against these functions, and certificates are
validated with them.
"""

from __future__ import annotations

from collections import defaultdict

from .detect import ForbiddenCycleSpec
from .graph import Graph


def _nbrs(g: Graph) -> list[set[int]]:
    return [set(g.neighbors(v)) for v in range(g.n)]


def cycle_witnesses(g: Graph) -> dict[int, tuple[int, ...]]:
    """One vertex sequence for each cycle length present in ``g``.

    Every simple cycle is enumerated exactly once: it is rooted at its
    smallest vertex and read in the direction whose second vertex is smaller
    than its last.
    """
    nbrs = _nbrs(g)
    found: dict[int, tuple[int, ...]] = {}

    def walk(root: int, path: list[int], on_path: set[int]) -> None:
        last = path[-1]
        for w in nbrs[last]:
            if w == root and len(path) >= 3 and path[1] < path[-1]:
                found.setdefault(len(path), tuple(path))
            elif w > root and w not in on_path:
                path.append(w)
                on_path.add(w)
                walk(root, path, on_path)
                on_path.discard(w)
                path.pop()

    for root in range(g.n):
        walk(root, [root], {root})
    return found


def all_cycle_lengths(g: Graph) -> frozenset[int]:
    return frozenset(cycle_witnesses(g))


def cycle_lengths_through(g: Graph, v: int) -> frozenset[int]:
    """Lengths of cycles that contain vertex ``v``."""
    nbrs = _nbrs(g)
    lengths: set[int] = set()

    def walk(path: list[int], on_path: set[int]) -> None:
        last = path[-1]
        for w in nbrs[last]:
            if w == v and len(path) >= 3:
                lengths.add(len(path))
            elif w not in on_path:
                path.append(w)
                on_path.add(w)
                walk(path, on_path)
                on_path.discard(w)
                path.pop()

    walk([v], {v})
    return frozenset(lengths)


def longest_induced_path(g: Graph) -> int:
    """Vertex count of a longest induced path (0 for the empty graph)."""
    nbrs = _nbrs(g)
    best = 1 if g.n else 0

    def grow(path: list[int], on_path: set[int]) -> None:
        nonlocal best
        best = max(best, len(path))
        end = path[-1]
        for w in nbrs[end]:
            if w in on_path:
                continue
            # w may touch the path only at its current end
            if len(nbrs[w] & on_path) != 1:
                continue
            path.append(w)
            on_path.add(w)
            grow(path, on_path)
            on_path.discard(w)
            path.pop()

    for s in range(g.n):
        grow([s], {s})
    return best


def is_counterexample(g: Graph, k: int, spec: ForbiddenCycleSpec, min_degree: int = 3) -> bool:
    """Minimum degree at least 3, no induced ``P_k``, and no forbidden cycle length."""
    if g.n == 0 or g.min_degree() < min_degree:
        return False
    if longest_induced_path(g) >= k:
        return False
    return not any(spec.is_forbidden(x) for x in all_cycle_lengths(g))


def _vertex_invariants(g: Graph) -> list[tuple]:
    """Degree plus BFS layer sizes; equal for vertices related by an isomorphism."""
    nbrs = _nbrs(g)
    out = []
    for s in range(g.n):
        seen = {s}
        layer = {s}
        sizes = []
        while layer:
            nxt = set()
            for x in layer:
                nxt |= nbrs[x]
            layer = nxt - seen
            seen |= layer
            if layer:
                sizes.append(len(layer))
        out.append((len(nbrs[s]), tuple(sizes)))
    return out


def graph_invariant(g: Graph) -> tuple:
    return (g.n, g.edge_count, tuple(sorted(_vertex_invariants(g))))


def are_isomorphic(g1: Graph, g2: Graph) -> bool:
    """Exact isomorphism test by backtracking over invariant-compatible images."""
    if g1.n != g2.n or g1.edge_count != g2.edge_count:
        return False
    inv1 = _vertex_invariants(g1)
    inv2 = _vertex_invariants(g2)
    if sorted(inv1) != sorted(inv2):
        return False
    n = g1.n
    n1 = _nbrs(g1)
    n2 = _nbrs(g2)
    by_inv: dict[tuple, list[int]] = defaultdict(list)
    for u, key in enumerate(inv2):
        by_inv[key].append(u)

    # connected-first ordering keeps adjacency constraints tight
    order: list[int] = []
    placed: set[int] = set()
    for s in sorted(range(n), key=lambda x: (len(by_inv[inv1[x]]), x)):
        if s in placed:
            continue
        queue = [s]
        placed.add(s)
        while queue:
            x = queue.pop(0)
            order.append(x)
            for y in sorted(n1[x]):
                if y not in placed:
                    placed.add(y)
                    queue.append(y)

    mapping: dict[int, int] = {}
    used: set[int] = set()

    def extend(pos: int) -> bool:
        if pos == n:
            return True
        x = order[pos]
        for y in by_inv[inv1[x]]:
            if y in used:
                continue
            if any((mapping[z] in n2[y]) != (z in n1[x]) for z in mapping):
                continue
            mapping[x] = y
            used.add(y)
            if extend(pos + 1):
                return True
            del mapping[x]
            used.discard(y)
        return False

    return extend(0)


def isomorphism_classes(graphs: list[Graph]) -> list[list[int]]:
    """Group indices of ``graphs`` into isomorphism classes (first-seen order)."""
    buckets: dict[tuple, list[list[int]]] = defaultdict(list)
    classes: list[list[int]] = []
    for i, g in enumerate(graphs):
        key = graph_invariant(g)
        for cls in buckets[key]:
            if are_isomorphic(graphs[cls[0]], g):
                cls.append(i)
                break
        else:
            cls = [i]
            buckets[key].append(cls)
            classes.append(cls)
    return classes
