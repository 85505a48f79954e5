"""Simple undirected graphs on vertices 0..n-1.

Adjacency is stored as one int bitmask per row, so neighbourhood unions and
intersections are single integer operations.  Graphs are immutable values.

Generator numbering (fixed, so graph6 output is reproducible):

* ``path(n)``                 0-1-...-(n-1)
* ``cycle(n)``                0-1-...-(n-1)-0
* ``star(n)``                 centre 0, leaves 1..n-1 (n vertices in total)
* ``wheel(n)``                hub 0, rim cycle 1-2-...-(n-1)-1 (n vertices in total)
* ``complete(n)``             K_n
* ``complete_multipartite``   parts are consecutive runs of ids, in the given order
* ``petersen``                outer cycle 0..4, spokes i~i+5, inner pentagram i+5~(i+2)%5+5
* ``petersen_complement``     complement of the above
* ``chen_cycles(lengths)``    hub 0; the cycle of length L uses the hub plus L-1 fresh
                              consecutive ids, walked in increasing order
* ``q14_example``             C_6 on labels 1..6 plus label 7 adjacent to 2 and 5;
                              label k is vertex k-1
* ``hhd_example``             see :func:`hhd_example`
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import GraphFormatError

Edge = tuple[int, int]

GRAPH6_HEADER = b">>graph6<<"


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("graph needs at least one vertex")
        if len(self.adj) != self.n:
            raise ValueError("adjacency must have one row per vertex")
        full = (1 << self.n) - 1
        for u, row in enumerate(self.adj):
            if row & ~full or row >> u & 1:
                raise ValueError(f"row {u} has out-of-range bits or a loop")
            for v in _bits(row):
                if not self.adj[v] >> u & 1:
                    raise ValueError(f"adjacency not symmetric at ({u},{v})")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return list(_bits(self.adj[v]))

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def edges(self) -> list[Edge]:
        return [(u, v) for u in range(self.n) for v in _bits(self.adj[u] >> (u + 1) << (u + 1))]

    @property
    def num_edges(self) -> int:
        return sum(r.bit_count() for r in self.adj) // 2

    def complement(self) -> "Graph":
        full = (1 << self.n) - 1
        return Graph(self.n, tuple(full & ~row & ~(1 << u) for u, row in enumerate(self.adj)))

    def induced(self, vertices: Sequence[int]) -> "Graph":
        """Induced subgraph; ``vertices[i]`` becomes vertex ``i``."""
        vs = list(vertices)
        return Graph.from_edges(len(vs), [(i, j) for i, j in itertools.combinations(range(len(vs)), 2)
                                          if self.has_edge(vs[i], vs[j])])

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex ``v`` renamed ``perm[v]``."""
        return Graph.from_edges(self.n, [(perm[u], perm[v]) for u, v in self.edges()])

    def __str__(self) -> str:
        return write_graph6(self).decode()


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# ---------------------------------------------------------------------------
# graph6
# ---------------------------------------------------------------------------

def _encode_n(n: int) -> bytes:
    if n < 63:
        return bytes([n + 63])
    if n < 258048:
        return bytes([126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)])
    return bytes([126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)])


def write_graph6(g: Graph) -> bytes:
    """Standard graph6 record, no header, no newline."""
    out = bytearray(_encode_n(g.n))
    acc = nbits = 0
    for j in range(1, g.n):
        row = g.adj[j]
        for i in range(j):
            acc = acc << 1 | (row >> i & 1)
            nbits += 1
            if nbits == 6:
                out.append(acc + 63)
                acc = nbits = 0
    if nbits:
        out.append((acc << (6 - nbits)) + 63)
    return bytes(out)


def parse_graph6(text: bytes | str) -> Graph:
    """Decode one graph6 record.  An optional ``>>graph6<<`` header and a
    trailing newline are tolerated."""
    data = text.encode("ascii", errors="replace") if isinstance(text, str) else bytes(text)
    data = data.rstrip(b"\r\n")
    base = 0
    if data.startswith(GRAPH6_HEADER):
        data = data[len(GRAPH6_HEADER):]
        base = len(GRAPH6_HEADER)
    if not data:
        raise GraphFormatError("empty graph6 record", base)
    for k, c in enumerate(data):
        if not 63 <= c <= 126:
            raise GraphFormatError(f"non-printable or out-of-range byte {c!r}", base + k)

    if data[0] != 126:
        n, pos = data[0] - 63, 1
    elif len(data) >= 2 and data[1] == 126:
        if len(data) < 8:
            raise GraphFormatError("truncated 8-byte length field", base)
        n, pos = 0, 8
        for c in data[2:8]:
            n = n << 6 | (c - 63)
    else:
        if len(data) < 4:
            raise GraphFormatError("truncated 4-byte length field", base)
        n, pos = 0, 4
        for c in data[1:4]:
            n = n << 6 | (c - 63)
        if n < 63:
            raise GraphFormatError(f"non-canonical length field for n={n}", base)
    if n < 1:
        raise GraphFormatError("graph6 record encodes zero vertices", base)

    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    body = data[pos:]
    if len(body) != nbytes:
        raise GraphFormatError(f"expected {nbytes} data bytes for n={n}, found {len(body)}",
                               base + pos + min(len(body), nbytes))
    rows = [0] * n
    i, j = 0, 1
    for k, c in enumerate(body):
        val = c - 63
        for s in range(5, -1, -1):
            if j >= n:
                if val & ((1 << (s + 1)) - 1):
                    raise GraphFormatError("nonzero padding bits", base + pos + k)
                break
            if val >> s & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            i += 1
            if i == j:
                i, j = 0, j + 1
    return Graph(n, tuple(rows))


def read_graph6(lines: Iterable[bytes | str]) -> Iterator[Graph]:
    """Parse a stream of graph6 lines; blank lines are skipped.  Errors carry
    the 1-based line number."""
    for lineno, line in enumerate(lines, 1):
        raw = line.encode() if isinstance(line, str) else line
        raw = raw.strip()
        if not raw:
            continue
        try:
            yield parse_graph6(raw)
        except GraphFormatError as exc:
            raise GraphFormatError(str(exc).split(" (")[0], exc.offset, lineno) from None


# ---------------------------------------------------------------------------
# distances
# ---------------------------------------------------------------------------

INF = float("inf")


def bfs_distances(g: Graph, source: int) -> list[int | float]:
    dist: list[int | float] = [INF] * g.n
    dist[source] = 0
    seen = 1 << source
    frontier = 1 << source
    d = 0
    while frontier:
        d += 1
        nxt = 0
        for v in _bits(frontier):
            nxt |= g.adj[v]
        nxt &= ~seen
        seen |= nxt
        for v in _bits(nxt):
            dist[v] = d
        frontier = nxt
    return dist


def components(g: Graph) -> list[list[int]]:
    left = (1 << g.n) - 1
    out = []
    while left:
        start = left & -left
        comp = frontier = start
        while frontier:
            nxt = 0
            for v in _bits(frontier):
                nxt |= g.adj[v]
            frontier = nxt & ~comp
            comp |= frontier
        out.append(list(_bits(comp)))
        left &= ~comp
    return out


def is_connected(g: Graph) -> bool:
    return len(components(g)) == 1


def bfs_metric(g: Graph):
    """Shortest-path metric of a connected graph with at least two vertices."""
    from .metrics import MetricSpace

    if g.n < 2:
        raise ValueError("graph metric needs at least two vertices")
    rows = []
    for s in range(g.n):
        d = bfs_distances(g, s)
        if INF in d:
            raise ValueError(f"graph is disconnected: vertex {d.index(INF)} unreachable from {s}")
        rows.append(tuple(d))
    return MetricSpace(g.n, tuple(rows))


def diameter(g: Graph) -> int | float:
    best = 0
    for s in range(g.n):
        best = max(best, max(bfs_distances(g, s)))
    return best


# ---------------------------------------------------------------------------
# class predicates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClassReport:
    connected: bool
    bipartite: bool
    chordal: bool
    bisplit: bool
    hhd_free: bool
    diameter: int | float
    bridges: list[Edge] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "connected": self.connected,
            "bipartite": self.bipartite,
            "chordal": self.chordal,
            "bisplit": self.bisplit,
            "hhd_free": self.hhd_free,
            "diameter": None if self.diameter == INF else self.diameter,
            "bridges": [list(e) for e in self.bridges],
        }


def is_bipartite(g: Graph) -> bool:
    color = [-1] * g.n
    for s in range(g.n):
        if color[s] >= 0:
            continue
        color[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in _bits(g.adj[u]):
                if color[v] < 0:
                    color[v] = 1 - color[u]
                    queue.append(v)
                elif color[v] == color[u]:
                    return False
    return True


def is_chordal(g: Graph) -> bool:
    """Maximum cardinality search, then verify the perfect elimination order."""
    weight = [0] * g.n
    visited = 0
    visit_pos = [0] * g.n
    order = []
    for step in range(g.n):
        v = max((u for u in range(g.n) if not visited >> u & 1), key=lambda u: (weight[u], -u))
        visited |= 1 << v
        visit_pos[v] = step
        order.append(v)
        for u in _bits(g.adj[v] & ~visited):
            weight[u] += 1
    for v in order:
        earlier = [u for u in _bits(g.adj[v]) if visit_pos[u] < visit_pos[v]]
        if len(earlier) < 2:
            continue
        parent = max(earlier, key=lambda u: visit_pos[u])
        rest = 0
        for u in earlier:
            if u != parent:
                rest |= 1 << u
        if rest & ~g.adj[parent]:
            return False
    return True


def _is_complete_bipartite_or_stable(g: Graph, w: int) -> bool:
    if not w:
        return True
    if all(not (g.adj[v] & w) for v in _bits(w)):
        return True
    v0 = (w & -w).bit_length() - 1
    z = g.adj[v0] & w
    y = w & ~z
    for v in _bits(y):
        if g.adj[v] & w != z:
            return False
    for v in _bits(z):
        if g.adj[v] & w != y:
            return False
    return True


def is_bisplit(g: Graph) -> bool:
    """V splits into stable X, Y, Z with Y u Z inducing a complete bipartite
    graph (either of Y, Z may be empty)."""
    full = (1 << g.n) - 1

    def stable_sets(start: int, chosen: int, banned: int) -> Iterator[int]:
        yield chosen
        for v in range(start, g.n):
            if not (banned >> v & 1):
                yield from stable_sets(v + 1, chosen | 1 << v, banned | g.adj[v] | 1 << v)

    return any(_is_complete_bipartite_or_stable(g, full & ~x) for x in stable_sets(0, 0, 0))


def find_hole(g: Graph) -> list[int] | None:
    """A chordless cycle on at least five vertices, or None."""
    for s in range(g.n):
        allowed = ((1 << g.n) - 1) & ~((1 << (s + 1)) - 1)

        def extend(path: list[int], pmask: int) -> list[int] | None:
            last = path[-1]
            inner = pmask & ~(1 << last) & ~(1 << s)
            for w in _bits(g.adj[last] & allowed & ~pmask):
                if g.adj[w] & inner:
                    continue
                if g.adj[w] >> s & 1:
                    if len(path) >= 4:
                        return path + [w]
                    continue
                found = extend(path + [w], pmask | 1 << w)
                if found:
                    return found
            return None

        for v1 in _bits(g.adj[s] & allowed):
            hole = extend([s, v1], 1 << s | 1 << v1)
            if hole:
                return hole
    return None


HOUSE = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (1, 4)])
DOMINO = Graph.from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)])


def find_induced(g: Graph, pattern: Graph) -> list[int] | None:
    """An injective map pattern -> g preserving adjacency and non-adjacency."""
    k = pattern.n
    image: list[int] = []

    def place(i: int, used: int) -> bool:
        if i == k:
            return True
        for v in range(g.n):
            if used >> v & 1:
                continue
            if all(g.has_edge(v, image[j]) == pattern.has_edge(i, j) for j in range(i)):
                image.append(v)
                if place(i + 1, used | 1 << v):
                    return True
                image.pop()
        return False

    return image if place(0, 0) else None


def is_hhd_free(g: Graph) -> bool:
    return (find_hole(g) is None and find_induced(g, HOUSE) is None
            and find_induced(g, DOMINO) is None)


def bridges(g: Graph) -> list[Edge]:
    base = len(components(g))
    out = []
    for u, v in g.edges():
        rows = list(g.adj)
        rows[u] &= ~(1 << v)
        rows[v] &= ~(1 << u)
        if len(components(Graph(g.n, tuple(rows)))) > base:
            out.append((u, v))
    return out


def classify(g: Graph) -> ClassReport:
    return ClassReport(
        connected=is_connected(g),
        bipartite=is_bipartite(g),
        chordal=is_chordal(g),
        bisplit=is_bisplit(g),
        hhd_free=is_hhd_free(g),
        diameter=diameter(g),
        bridges=bridges(g),
    )


def multipartite_parts(g: Graph) -> list[int] | None:
    """Part sizes if g is complete multipartite (non-adjacency is an
    equivalence relation), else None.  Parts listed by smallest member."""
    full = (1 << g.n) - 1
    seen = 0
    parts = []
    for v in range(g.n):
        if seen >> v & 1:
            continue
        part = full & ~g.adj[v]
        for u in _bits(part):
            if full & ~g.adj[u] != part:
                return None
        parts.append(part.bit_count())
        seen |= part
    return parts


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------

def path(n: int) -> Graph:
    if n < 1:
        raise ValueError("path needs n >= 1")
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def star(n: int) -> Graph:
    if n < 2:
        raise ValueError("star needs n >= 2 vertices")
    return Graph.from_edges(n, [(0, i) for i in range(1, n)])


def wheel(n: int) -> Graph:
    if n < 4:
        raise ValueError("wheel needs n >= 4 vertices")
    rim = [(i, i % (n - 1) + 1) for i in range(1, n)]
    return Graph.from_edges(n, rim + [(0, i) for i in range(1, n)])


def complete(n: int) -> Graph:
    if n < 1:
        raise ValueError("complete graph needs n >= 1")
    return Graph.from_edges(n, itertools.combinations(range(n), 2))


def complete_multipartite(sizes: Sequence[int]) -> Graph:
    if not sizes or any(s < 1 for s in sizes):
        raise ValueError("multipartite parts must all have size >= 1")
    label = [p for p, s in enumerate(sizes) for _ in range(s)]
    n = len(label)
    return Graph.from_edges(n, [(u, v) for u, v in itertools.combinations(range(n), 2)
                                if label[u] != label[v]])


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(i + 5, (i + 2) % 5 + 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def petersen_complement() -> Graph:
    return petersen().complement()


def chen_cycles(lengths: Sequence[int]) -> Graph:
    if not lengths or any(L < 3 for L in lengths):
        raise ValueError("every cycle length must be >= 3")
    edges = []
    nxt = 1
    for L in lengths:
        ring = [0] + list(range(nxt, nxt + L - 1))
        nxt += L - 1
        edges += [(ring[i], ring[(i + 1) % L]) for i in range(L)]
    return Graph.from_edges(nxt, edges)


def q14_example() -> Graph:
    labelled = [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 1), (7, 2), (7, 5)]
    return Graph.from_edges(7, [(u - 1, v - 1) for u, v in labelled])


def hhd_example() -> Graph:
    """HHD-free graph not obtainable from chordal graphs by substitution and
    gluing.

    Start from the C_4 v1 v2 v3 v4 (ids 0..3).  For i = 1, 2 the vertex v_i is
    replaced by a triangle {a_i, c_i, e_i}, and pendant-ish vertices b_i, d_i
    are attached with edges a_i b_i, b_i c_i, c_i d_i, d_i e_i.

    Numbering: v3 = 0, v4 = 1, then (a_1, c_1, e_1, b_1, d_1) = 2..6 and
    (a_2, c_2, e_2, b_2, d_2) = 7..11.
    """
    v3, v4 = 0, 1
    a1, c1, e1, b1, d1 = range(2, 7)
    a2, c2, e2, b2, d2 = range(7, 12)
    edges = [(v3, v4)]
    clique1, clique2 = (a1, c1, e1), (a2, c2, e2)
    edges += list(itertools.combinations(clique1, 2)) + list(itertools.combinations(clique2, 2))
    edges += [(x, y) for x in clique1 for y in clique2]   # v1 v2
    edges += [(x, v4) for x in clique1]                    # v1 v4
    edges += [(y, v3) for y in clique2]                    # v2 v3
    for a, b, c, d, e in ((a1, b1, c1, d1, e1), (a2, b2, c2, d2, e2)):
        edges += [(a, b), (b, c), (c, d), (d, e)]
    return Graph.from_edges(12, edges)


GENERATORS = {
    "path": path,
    "cycle": cycle,
    "star": star,
    "wheel": wheel,
    "complete": complete,
    "complete_multipartite": complete_multipartite,
    "petersen": petersen,
    "petersen_complement": petersen_complement,
    "chen_cycles": chen_cycles,
    "hhd_example": hhd_example,
    "q14_example": q14_example,
}


def generate(kind: str, *params) -> Graph:
    try:
        fn = GENERATORS[kind]
    except KeyError:
        raise ValueError(f"unknown generator {kind!r}; choose from {sorted(GENERATORS)}") from None
    return fn(*params)


# ---------------------------------------------------------------------------
# transforms
# ---------------------------------------------------------------------------

def _check_vertex(g: Graph, v: int) -> None:
    if not 0 <= v < g.n:
        raise ValueError(f"vertex {v} out of range for n={g.n}")


def substitute(g: Graph, v: int, h: Graph) -> Graph:
    """Replace ``v`` by a copy of ``h``.  h-vertex 0 keeps id ``v``; h-vertex
    k >= 1 gets id ``g.n + k - 1``.  Every copy vertex is adjacent to all old
    neighbours of ``v``."""
    _check_vertex(g, v)
    ids = [v] + list(range(g.n, g.n + h.n - 1))
    nbrs = g.neighbors(v)
    edges = [e for e in g.edges() if v not in e]
    edges += [(ids[x], u) for x in range(h.n) for u in nbrs]
    edges += [(ids[x], ids[y]) for x, y in h.edges()]
    return Graph.from_edges(g.n + h.n - 1, edges)


def split_adjacent_twins(g: Graph, v: int) -> Graph:
    return substitute(g, v, complete(2))


def split_nonadjacent_twins(g: Graph, v: int) -> Graph:
    return substitute(g, v, Graph(2, (0, 0)))


def glue(g: Graph, g2: Graph, v: int, w: int) -> Graph:
    """Identify vertex ``v`` of g with vertex ``w`` of g2.  g keeps its ids;
    the other g2 vertices follow in order from ``g.n``."""
    _check_vertex(g, v)
    _check_vertex(g2, w)
    ids = {}
    nxt = g.n
    for x in range(g2.n):
        if x == w:
            ids[x] = v
        else:
            ids[x] = nxt
            nxt += 1
    edges = g.edges() + [(ids[x], ids[y]) for x, y in g2.edges()]
    return Graph.from_edges(nxt, edges)


def transform(g: Graph, op: str, *args) -> Graph:
    ops = {
        "substitute": substitute,
        "split_adjacent_twins": split_adjacent_twins,
        "split_nonadjacent_twins": split_nonadjacent_twins,
        "glue": glue,
    }
    if op not in ops:
        raise ValueError(f"unknown transform {op!r}")
    return ops[op](g, *args)
