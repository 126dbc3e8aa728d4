"""Edge-list and graph6 serialization, DOT dump, and the bundled fixture."""

from __future__ import annotations

import re
from importlib import resources

from .graph import DEFAULT_CAPACITY, Graph


class GraphParseError(ValueError):
    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


_HEADER = re.compile(r"n\s*=\s*(\d+)")


def emit_edge_list(g: Graph, comments: list[str] | None = None) -> str:
    lines = [f"# {c}" for c in comments or []]
    lines.append(f"n={g.n}")
    lines.extend(f"{i} {j}" for i, j in g.edges())
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str, capacity: int = DEFAULT_CAPACITY) -> Graph:
    """Parse ``n=<count>`` followed by ``i j`` pairs.

    Items are separated by newlines or ``;``.  ``#`` starts a comment.
    """
    g: Graph | None = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        for item in raw.split("#", 1)[0].split(";"):
            item = item.strip()
            if not item:
                continue
            if g is None:
                m = _HEADER.fullmatch(item)
                if not m:
                    raise GraphParseError(f"expected header 'n=<count>', got {item!r}", lineno)
                n = int(m.group(1))
                g = Graph(n, capacity=max(capacity, n))
                continue
            parts = item.split()
            if len(parts) != 2 or not all(p.isdigit() for p in parts):
                raise GraphParseError(f"expected 'i j', got {item!r}", lineno)
            i, j = int(parts[0]), int(parts[1])
            if i >= g.n or j >= g.n:
                raise GraphParseError(f"vertex index out of range in {item!r} (n={g.n})", lineno)
            if i == j:
                raise GraphParseError(f"self-loop {item!r}", lineno)
            if g.has_edge(i, j):
                raise GraphParseError(f"duplicate edge {item!r}", lineno)
            g.add_edge(i, j)
    if g is None:
        raise GraphParseError("missing header 'n=<count>'")
    return g


def emit_graph6(g: Graph) -> str:
    n = g.n
    if n <= 62:
        out = [n + 63]
    elif n <= 258047:
        out = [126, (n >> 12 & 63) + 63, (n >> 6 & 63) + 63, (n & 63) + 63]
    else:
        raise ValueError("graph6 supports at most 258047 vertices")
    bits = [g.adj[i] >> j & 1 for j in range(1, n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    for p in range(0, len(bits), 6):
        v = 0
        for b in bits[p : p + 6]:
            v = v << 1 | b
        out.append(v + 63)
    return bytes(out).decode("ascii")


def parse_graph6(text: str, capacity: int = DEFAULT_CAPACITY) -> Graph:
    text = text.strip()
    if text.startswith(">>graph6<<"):
        text = text[10:]
    data = text.encode("ascii", errors="replace")
    if not data:
        raise GraphParseError("empty graph6 string")
    if any(b < 63 or b > 126 for b in data):
        raise GraphParseError("graph6 byte out of range 63..126")
    if data[0] == 126:
        if len(data) < 4 or data[1] == 126:
            raise GraphParseError("unsupported or truncated graph6 size field")
        n = (data[1] - 63) << 12 | (data[2] - 63) << 6 | (data[3] - 63)
        body = data[4:]
    else:
        n = data[0] - 63
        body = data[1:]
    nbits = n * (n - 1) // 2
    if len(body) != (nbits + 5) // 6:
        raise GraphParseError(f"graph6 body has {len(body)} bytes, expected {(nbits + 5) // 6} for n={n}")
    g = Graph(n, capacity=max(capacity, n))
    pos = 0
    for j in range(1, n):
        for i in range(j):
            byte = body[pos // 6] - 63
            if byte >> (5 - pos % 6) & 1:
                g.add_edge(i, j)
            pos += 1
    return g


def emit_dot(g: Graph, name: str = "G") -> str:
    lines = [f"graph {name} {{"]
    lines.extend(f"  {v};" for v in range(g.n) if not g.deg[v])
    lines.extend(f"  {i} -- {j};" for i, j in g.edges())
    lines.append("}")
    return "\n".join(lines) + "\n"


def cubic24_fixture() -> Graph:
    """The 24-vertex cubic planar graph with no 4- or 8-cycle but a 16-cycle."""
    text = resources.files("egverify.data").joinpath("cubic24.txt").read_text()
    g = parse_edge_list(text)
    if g.n != 24 or g.edge_count != 36 or set(g.deg) != {3}:
        raise AssertionError(
            f"fixture transcription error: n={g.n}, edges={g.edge_count}, degrees={sorted(set(g.deg))}"
        )
    return g
