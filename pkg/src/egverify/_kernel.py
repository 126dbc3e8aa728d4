"""Compiled search kernel.

Same traversal as :func:`egverify.explorer.explore_python`, on int64 bitset
rows (vertex 63 uses the sign bit, which every operation here tolerates).
All scratch space is allocated once per kernel call.
"""

from __future__ import annotations

import time

import numpy as np

try:
    import numba
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


from .graph import DEFAULT_CAPACITY, Graph

CAP = DEFAULT_CAPACITY
STACK = 8192

# stats slots
NODES, SAFE_SETS, MAX_DEPTH, MAX_N, BUDGET_HITS = range(5)

M1 = np.int64(0x5555555555555555)
M2 = np.int64(0x3333333333333333)
M4 = np.int64(0x0F0F0F0F0F0F0F0F)
H01 = np.int64(0x0101010101010101)


def available() -> bool:
    return numba is not None


@njit(cache=True, inline="always")
def popcount(x):
    x = x - ((x >> 1) & M1)
    x = (x & M2) + ((x >> 2) & M2)
    x = (x + (x >> 4)) & M4
    return ((x * H01) >> 56) & 0xFF


@njit(cache=True, inline="always")
def lowest(x):
    return popcount((x & -x) - 1)


@njit(cache=True, inline="always")
def bit(i):
    return np.int64(1) << np.int64(i)


@njit(cache=True)
def closes_cycle(adj, n, v, c, extra, forb, lmax, dist, path, cand):
    """Would edge {v, c} close a cycle of forbidden length, given extra neighbors of v?"""
    if lmax < 3:
        return False
    vn = (adj[v] | extra) & ~bit(c)
    # BFS distances to v without the edge {v, c}
    inf = n + 1
    for i in range(n):
        dist[i] = inf
    dist[v] = 0
    seen = bit(v) | vn
    frontier = vn
    d = 1
    while frontier != 0:
        nxt = np.int64(0)
        f = frontier
        while f != 0:
            x = lowest(f)
            f &= f - 1
            dist[x] = d
            nxt |= adj[x]
        frontier = nxt & ~seen
        seen |= frontier
        d += 1
    # simple paths c -> ... -> x with x adjacent to v; cycle length = depth + 2
    path[0] = c
    used = bit(v) | bit(c)
    cand[0] = adj[c] & ~used
    d = 0
    while d >= 0:
        if cand[d] == 0:
            used &= ~bit(path[d])
            d -= 1
            continue
        y = lowest(cand[d])
        cand[d] &= cand[d] - 1
        if d + 2 + dist[y] > lmax:
            continue
        d += 1
        path[d] = y
        used |= bit(y)
        if (vn >> y) & 1 and forb[d + 2]:
            return True
        if d + 3 > lmax:
            cand[d] = 0
        else:
            cand[d] = adj[y] & ~used
    return False


@njit(cache=True)
def induced_path_through(adj, v, k, sl, sr, ssize, sblock, sdir):
    """Is there an induced path on k vertices containing v?"""
    if k <= 1:
        return True
    top = 0
    nb = adj[v]
    while nb != 0:
        w = lowest(nb)
        nb &= nb - 1
        sl[top] = v
        sr[top] = w
        ssize[top] = 2
        sblock[top] = bit(v) | bit(w)
        sdir[top] = 0
        top += 1
    while top > 0:
        top -= 1
        left = sl[top]
        right = sr[top]
        size = ssize[top]
        blocked = sblock[top]
        leftward = sdir[top]
        if size >= k:
            return True
        if leftward == 0:
            sl[top] = left
            sr[top] = right
            ssize[top] = size
            sblock[top] = blocked
            sdir[top] = 1
            top += 1
            cand = adj[right] & ~blocked & ~adj[left]
            grown = blocked | adj[right]
            while cand != 0:
                w = lowest(cand)
                cand &= cand - 1
                sl[top] = left
                sr[top] = w
                ssize[top] = size + 1
                sblock[top] = grown | bit(w)
                sdir[top] = 0
                top += 1
        else:
            cand = adj[left] & ~blocked & ~adj[right]
            grown = blocked | adj[left]
            while cand != 0:
                w = lowest(cand)
                cand &= cand - 1
                sl[top] = w
                sr[top] = right
                ssize[top] = size + 1
                sblock[top] = grown | bit(w)
                sdir[top] = 1
                top += 1
    return False


@njit(cache=True)
def safe_sets_into(adj, deg, n, forb, lmax, cap, buf, pos, ws_dist, ws_path, ws_cand, chosen, okset, branch):
    """Append the frontier's safe sets to buf starting at pos; return (buf, new pos)."""
    v = n - 1
    if pos + 1 >= buf.shape[0]:
        buf = _grow(buf)
    buf[pos] = 0
    pos += 1
    room = CAP
    if cap > 0:
        room = cap - deg[v]
        if room <= 0:
            return buf, pos
    cand = (bit(v) - 1) & ~adj[v]
    if cap > 0:
        f = cand
        while f != 0:
            u = lowest(f)
            f &= f - 1
            if deg[u] >= cap:
                cand &= ~bit(u)
    ok = np.int64(0)
    f = cand
    while f != 0:
        c = lowest(f)
        f &= f - 1
        if not closes_cycle(adj, n, v, c, np.int64(0), forb, lmax, ws_dist, ws_path, ws_cand):
            ok |= bit(c)
    lv = 0
    chosen[0] = 0
    okset[0] = ok
    branch[0] = ok
    while lv >= 0:
        if branch[lv] == 0:
            lv -= 1
            continue
        c = lowest(branch[lv])
        branch[lv] &= branch[lv] - 1
        s = chosen[lv] | bit(c)
        if pos >= buf.shape[0]:
            buf = _grow(buf)
        buf[pos] = s
        pos += 1
        if lv + 1 >= room:
            continue
        pool = okset[lv] & ~((bit(c) << 1) - 1)
        ok = np.int64(0)
        f = pool
        while f != 0:
            c2 = lowest(f)
            f &= f - 1
            if not closes_cycle(adj, n, v, c2, s, forb, lmax, ws_dist, ws_path, ws_cand):
                ok |= bit(c2)
        lv += 1
        chosen[lv] = s
        okset[lv] = ok
        branch[lv] = ok
    return buf, pos


@njit(cache=True)
def _grow(a):
    b = np.empty(a.shape[0] * 2, dtype=a.dtype)
    b[: a.shape[0]] = a
    return b


@njit(cache=True)
def _grow_rows(a):
    b = np.zeros((a.shape[0] * 2, a.shape[1]), dtype=a.dtype)
    b[: a.shape[0]] = a
    return b


@njit(cache=True)
def _add_edge(adj, deg, i, j):
    adj[i] |= bit(j)
    adj[j] |= bit(i)
    deg[i] += 1
    deg[j] += 1


@njit(cache=True)
def _apply_set(adj, deg, v, s, sign):
    f = s
    while f != 0:
        u = lowest(f)
        f &= f - 1
        if sign > 0:
            adj[u] |= bit(v)
            adj[v] |= bit(u)
            deg[u] += 1
            deg[v] += 1
        else:
            adj[u] &= ~bit(v)
            adj[v] &= ~bit(u)
            deg[u] -= 1
            deg[v] -= 1


@njit(cache=True)
def search(adj0, n0, k, forb_all, cap, limit, collect_all, split_depth, depth_offset):
    """Run the backtracking search from the state (adj0, n0).

    Returns (found, budget_hit, stats, certs, n_certs, cert_sizes, frontier, frontier_sizes, n_frontier).
    With split_depth > 0, children that would be entered at that depth are
    returned in ``frontier`` instead of being searched.
    """
    adj = np.zeros(CAP, dtype=np.int64)
    deg = np.zeros(CAP, dtype=np.int64)
    for i in range(n0):
        adj[i] = adj0[i]
        deg[i] = popcount(adj0[i])
    n = n0
    stats = np.zeros(5, dtype=np.int64)

    ws_dist = np.zeros(CAP + 1, dtype=np.int64)
    ws_path = np.zeros(CAP + 1, dtype=np.int64)
    ws_cand = np.zeros(CAP + 1, dtype=np.int64)
    chosen = np.zeros(CAP + 1, dtype=np.int64)
    okset = np.zeros(CAP + 1, dtype=np.int64)
    branch = np.zeros(CAP + 1, dtype=np.int64)
    sl = np.zeros(STACK, dtype=np.int64)
    sr = np.zeros(STACK, dtype=np.int64)
    ssize = np.zeros(STACK, dtype=np.int64)
    sblock = np.zeros(STACK, dtype=np.int64)
    sdir = np.zeros(STACK, dtype=np.int64)

    buf = np.zeros(1024, dtype=np.int64)
    fr_pos = np.zeros(CAP + 1, dtype=np.int64)
    fr_end = np.zeros(CAP + 1, dtype=np.int64)
    fr_set = np.zeros(CAP + 1, dtype=np.int64)

    certs = np.zeros((4, CAP), dtype=np.int64)
    cert_sizes = np.zeros(4, dtype=np.int64)
    n_certs = 0
    frontier = np.zeros((4, CAP), dtype=np.int64)
    frontier_sizes = np.zeros(4, dtype=np.int64)
    n_frontier = 0

    found = False
    budget_hit = False

    # largest forbidden length that fits in a graph of each order
    lmax_of = np.zeros(CAP + 1, dtype=np.int64)
    for m in range(3, CAP + 1):
        lmax_of[m] = m if forb_all[m] else lmax_of[m - 1]

    top = 0
    buf, end = safe_sets_into(adj, deg, n, forb_all, lmax_of[n], cap, buf, 0,
                              ws_dist, ws_path, ws_cand, chosen, okset, branch)
    fr_pos[0] = 0
    fr_end[0] = end
    fr_set[0] = -1
    stats[NODES] += 1
    stats[MAX_DEPTH] = max(stats[MAX_DEPTH], depth_offset + 1)
    stats[MAX_N] = max(stats[MAX_N], n)

    while top >= 0:
        v = n - 1
        # undo the previous iteration of this frame (its set; the child vertex
        # was already removed when the child frame popped)
        if fr_set[top] >= 0:
            _apply_set(adj, deg, v, fr_set[top], -1)
            fr_set[top] = -1
        if fr_pos[top] >= fr_end[top]:
            # pop: drop this frame's frontier vertex (a pendant of its anchor)
            if top == 0:
                break
            anchor = lowest(adj[v])
            adj[anchor] &= ~bit(v)
            deg[anchor] -= 1
            adj[v] = 0
            deg[v] = 0
            n -= 1
            top -= 1
            continue
        s = buf[fr_pos[top]]
        fr_pos[top] += 1
        stats[SAFE_SETS] += 1
        _apply_set(adj, deg, v, s, 1)
        fr_set[top] = s
        if induced_path_through(adj, v, k, sl, sr, ssize, sblock, sdir):
            continue
        anchor = -1
        for u in range(n - 1, -1, -1):
            if deg[u] < 3:
                anchor = u
                break
        if anchor < 0:
            found = True
            if n_certs >= certs.shape[0]:
                certs = _grow_rows(certs)
                cert_sizes = _grow(cert_sizes)
            for i in range(n):
                certs[n_certs, i] = adj[i]
            cert_sizes[n_certs] = n
            n_certs += 1
            if not collect_all:
                break
            continue
        if n + 1 > limit:
            budget_hit = True
            stats[BUDGET_HITS] += 1
            continue
        # grow: pendant vertex n on the anchor
        w = n
        adj[w] = 0
        deg[w] = 0
        n += 1
        _add_edge(adj, deg, anchor, w)
        depth = top + 2
        if split_depth > 0 and depth == split_depth:
            if n_frontier >= frontier.shape[0]:
                frontier = _grow_rows(frontier)
                frontier_sizes = _grow(frontier_sizes)
            for i in range(n):
                frontier[n_frontier, i] = adj[i]
            frontier_sizes[n_frontier] = n
            n_frontier += 1
            adj[anchor] &= ~bit(w)
            deg[anchor] -= 1
            adj[w] = 0
            deg[w] = 0
            n -= 1
            continue
        top += 1
        stats[NODES] += 1
        stats[MAX_DEPTH] = max(stats[MAX_DEPTH], depth_offset + depth)
        stats[MAX_N] = max(stats[MAX_N], n)
        start = fr_end[top - 1]
        buf, end = safe_sets_into(adj, deg, n, forb_all, lmax_of[n], cap, buf, start,
                                  ws_dist, ws_path, ws_cand, chosen, okset, branch)
        fr_pos[top] = start
        fr_end[top] = end
        fr_set[top] = -1
    return (found, budget_hit, stats, certs, n_certs, cert_sizes,
            frontier, frontier_sizes, n_frontier)


# -- Python-facing wrappers ------------------------------------------------

_MASK64 = (1 << 64) - 1


def _to_i64(row: int) -> int:
    return row - (1 << 64) if row >> 63 else row


def _from_i64(x) -> int:
    return int(x) & _MASK64


def _rows(g: Graph) -> np.ndarray:
    if g.n > CAP:
        raise ValueError(f"native kernel supports at most {CAP} vertices")
    a = np.zeros(CAP, dtype=np.int64)
    for i, r in enumerate(g.adj):
        a[i] = _to_i64(r)
    return a


def _forbidden_table(spec) -> np.ndarray:
    t = np.zeros(CAP + 3, dtype=np.bool_)
    for x in spec.lengths_up_to(CAP):
        t[x] = True
    return t


def _graph_from_row(row, size: int) -> Graph:
    return Graph.from_rows([_from_i64(row[i]) for i in range(size)])


def run_kernel(g: Graph, config, split_depth: int = 0, depth_offset: int = 0):
    """Call the compiled search on ``g``; returns a dict of plain Python values."""
    started = time.perf_counter()
    found, budget_hit, stats, certs, n_certs, cert_sizes, front, front_sizes, n_front = search(
        _rows(g),
        g.n,
        config.k,
        _forbidden_table(config.cycle_spec),
        config.degree_cap or 0,
        config.vertex_limit,
        config.collect_all,
        split_depth,
        depth_offset,
    )
    return {
        "found": bool(found),
        "budget_hit": bool(budget_hit),
        "stats": [int(x) for x in stats],
        "certificates": [_graph_from_row(certs[i], int(cert_sizes[i])) for i in range(n_certs)],
        "frontier": [_graph_from_row(front[i], int(front_sizes[i])) for i in range(n_front)],
        "wall_time": time.perf_counter() - started,
    }


def explore_native(g: Graph, config):
    from .explorer import CertificateGraph, SearchOutcome, SearchStats, _combine

    res = run_kernel(g, config)
    stats = SearchStats(*res["stats"], wall_time=res["wall_time"])
    certs = [CertificateGraph.from_graph(c) for c in res["certificates"]]
    return SearchOutcome(_combine(res["found"], res["budget_hit"]), certs, stats)


def native_closes_forbidden_cycle(g: Graph, v: int, c: int, spec, extra: int = 0) -> bool:
    n = g.n
    lmax = max(spec.lengths_up_to(n), default=0)
    ws = [np.zeros(CAP + 1, dtype=np.int64) for _ in range(3)]
    return bool(closes_cycle(_rows(g), n, v, c, _to_i64(extra), _forbidden_table(spec), lmax, *ws))


def native_has_induced_path_through(g: Graph, v: int, k: int) -> bool:
    ws = [np.zeros(STACK, dtype=np.int64) for _ in range(5)]
    return bool(induced_path_through(_rows(g), v, k, *ws))


def native_safe_sets(g: Graph, spec, degree_cap: int | None = None) -> list[tuple[int, ...]]:
    n = g.n
    lmax = max(spec.lengths_up_to(n), default=0)
    deg = np.zeros(CAP, dtype=np.int64)
    deg[: n] = g.deg
    ws = [np.zeros(CAP + 1, dtype=np.int64) for _ in range(6)]
    buf, end = safe_sets_into(
        _rows(g), deg, n, _forbidden_table(spec), lmax, degree_cap or 0,
        np.zeros(64, dtype=np.int64), 0, *ws,
    )
    out = []
    for i in range(end):
        m = _from_i64(buf[i])
        out.append(tuple(j for j in range(64) if m >> j & 1))
    return out
