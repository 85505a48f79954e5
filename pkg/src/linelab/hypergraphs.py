"""3-uniform hypergraphs: hyperlines, four-vertex profiles and the desk-scale
recognizers for graphic, metric and pseudometric hypergraphs."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import CapExceeded, Refusal
from .graphs import Graph, bfs_metric, is_connected
from .lines import LineFamily, dbe_of, family_from_masks, DBEVerdict, members_of
from .metrics import MetricSpace, TernaryRelation, betweenness_of, check_axioms, validate_metric

Triple = tuple[int, int, int]


def _norm(t: Iterable[int]) -> Triple:
    a, b, c = sorted(t)
    return (a, b, c)


@dataclass(frozen=True)
class Hypergraph3:
    n: int
    triples: frozenset[Triple] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("hypergraph needs at least one vertex")
        fixed = frozenset(_norm(t) for t in self.triples)
        for t in fixed:
            if len(set(t)) != 3 or not all(0 <= x < self.n for x in t):
                raise ValueError(f"bad hyperedge {t} for n={self.n}")
        object.__setattr__(self, "triples", fixed)

    def __contains__(self, t) -> bool:
        return _norm(t) in self.triples

    def __len__(self) -> int:
        return len(self.triples)

    def induced(self, vertices: Sequence[int]) -> "Hypergraph3":
        """Sub-hypergraph on ``vertices``; ``vertices[i]`` becomes ``i``."""
        pos = {v: i for i, v in enumerate(vertices)}
        return Hypergraph3(len(pos), frozenset(_norm(pos[x] for x in t) for t in self.triples
                                               if all(x in pos for x in t)))

    def to_json(self) -> dict:
        return {"n": self.n, "triples": [list(t) for t in sorted(self.triples)]}

    @classmethod
    def from_json(cls, obj: dict) -> "Hypergraph3":
        return cls(obj["n"], frozenset(tuple(t) for t in obj["triples"]))


def triples_of(r: TernaryRelation) -> Hypergraph3:
    return Hypergraph3(r.n, frozenset(_norm(t) for t in r.triples))


def from_graph_triangles(g: Graph) -> Hypergraph3:
    return Hypergraph3(g.n, frozenset(t for t in itertools.combinations(range(g.n), 3)
                                      if g.has_edge(t[0], t[1]) and g.has_edge(t[0], t[2])
                                      and g.has_edge(t[1], t[2])))


def fano() -> Hypergraph3:
    """Lines of the projective plane of order 2 on points 0..6."""
    return Hypergraph3(7, frozenset([(0, 1, 2), (0, 3, 4), (0, 5, 6), (1, 3, 5),
                                     (1, 4, 6), (2, 3, 6), (2, 4, 5)]))


def single_hyperedge() -> Hypergraph3:
    return Hypergraph3(4, frozenset([(0, 1, 2)]))


# ---------------------------------------------------------------------------
# lines
# ---------------------------------------------------------------------------

def hyper_pair_masks(h: Hypergraph3) -> dict[tuple[int, int], int]:
    masks = {p: 1 << p[0] | 1 << p[1] for p in itertools.combinations(range(h.n), 2)}
    for a, b, c in h.triples:
        masks[(a, b)] |= 1 << c
        masks[(a, c)] |= 1 << b
        masks[(b, c)] |= 1 << a
    return masks


def hyperline(h: Hypergraph3, x: int, y: int) -> frozenset[int]:
    if x == y:
        raise ValueError("a line needs two distinct vertices")
    p = (x, y) if x < y else (y, x)
    return frozenset(members_of(hyper_pair_masks(h)[p]))


def hyperline_family(h: Hypergraph3) -> LineFamily:
    return family_from_masks(h.n, hyper_pair_masks(h))


def check_dbe_hypergraph(h: Hypergraph3) -> DBEVerdict:
    if h.n < 2:
        raise ValueError("DBE needs at least two vertices")
    return dbe_of(hyperline_family(h))


@dataclass(frozen=True)
class FourProfile:
    counts: tuple[int, int, int, int, int]
    class_a: bool
    class_b: bool
    class_c: bool

    def to_json(self) -> dict:
        return {"counts": list(self.counts), "class_a": self.class_a,
                "class_b": self.class_b, "class_c": self.class_c}


def four_profile(h: Hypergraph3) -> FourProfile:
    """How many 4-subsets induce 0..4 hyperedges, and the three classes:
    (a) none induces 2, (b) none induces 1 or 3, (c) none induces 4."""
    counts = Counter()
    for quad in itertools.combinations(range(h.n), 4):
        counts[sum(t in h.triples for t in itertools.combinations(quad, 3))] += 1
    c = tuple(counts[k] for k in range(5))
    return FourProfile(c, c[2] == 0, c[1] == 0 and c[3] == 0, c[4] == 0)


@dataclass(frozen=True)
class Census:
    """Per-hypergraph data for every 3-uniform hypergraph on n labeled
    vertices; hypergraph k has triple t (colex order) iff bit t of k is set."""
    n: int
    triples: tuple[Triple, ...]
    lam: "np.ndarray"
    universal: "np.ndarray"
    class_a: "np.ndarray"
    class_b: "np.ndarray"
    class_c: "np.ndarray"

    @property
    def dbe(self) -> "np.ndarray":
        return (self.lam >= self.n) | self.universal

    def hypergraph(self, k: int) -> Hypergraph3:
        return Hypergraph3(self.n, frozenset(t for i, t in enumerate(self.triples) if k >> i & 1))


def census(n: int, max_n: int = 6) -> Census:
    """Vectorized line counts and four-vertex classes over all 2^C(n,3)
    hypergraphs; 2^20 of them at n = 6."""
    import numpy as np

    if not 2 <= n <= max_n:
        raise ValueError(f"census needs 2 <= n <= {max_n}")
    triples = tuple(sorted(itertools.combinations(range(n), 3), key=lambda t: (t[2], t[1], t[0])))
    index = {t: i for i, t in enumerate(triples)}
    codes = np.arange(1 << len(triples), dtype=np.int64)
    bits = [(codes >> i) & 1 for i in range(len(triples))]
    pairs = list(itertools.combinations(range(n), 2))
    masks = np.empty((codes.size, len(pairs)), dtype=np.int64)
    for k, (u, v) in enumerate(pairs):
        col = np.full(codes.size, 1 << u | 1 << v, dtype=np.int64)
        for w in range(n):
            if w != u and w != v:
                col |= bits[index[_norm((u, v, w))]] << w
        masks[:, k] = col
    masks.sort(axis=1)
    lam = 1 + (np.diff(masks, axis=1) != 0).sum(axis=1)
    universal = masks[:, -1] == (1 << n) - 1
    seen = np.zeros((codes.size, 5), dtype=bool)
    for quad in itertools.combinations(range(n), 4):
        cnt = sum(bits[index[t]] for t in itertools.combinations(quad, 3))
        seen[np.arange(codes.size), cnt] = True
    return Census(n, triples, lam, universal, ~seen[:, 2], ~(seen[:, 1] | seen[:, 3]), ~seen[:, 4])


# ---------------------------------------------------------------------------
# line maps
# ---------------------------------------------------------------------------

def recognize_line_map(f: Mapping, n: int | None = None) -> Hypergraph3:
    """The unique hypergraph whose line map is ``f``, or :class:`Refusal`
    naming a triple that breaks w in f(uv) <=> v in f(uw) <=> u in f(vw)."""
    fm: dict[tuple[int, int], int] = {}
    for key, members in f.items():
        u, v = sorted(key)
        mk = 0
        for x in members:
            mk |= 1 << x
        fm[(u, v)] = mk
    if n is None:
        n = max(mk.bit_length() for mk in fm.values()) if fm else 0
    for p in itertools.combinations(range(n), 2):
        if p not in fm:
            raise Refusal("map undefined", p, f"no value given for pair {p}")
        if fm[p] & (1 << p[0] | 1 << p[1]) != 1 << p[0] | 1 << p[1]:
            raise Refusal("pair not in its line", p, f"f{p} must contain both endpoints")
        if fm[p] >> n:
            raise Refusal("vertex out of range", p)
    out = []
    for u, v, w in itertools.combinations(range(n), 3):
        flags = (fm[(u, v)] >> w & 1, fm[(u, w)] >> v & 1, fm[(v, w)] >> u & 1)
        if flags[0] != flags[1] or flags[1] != flags[2]:
            raise Refusal("condition (B) fails", (u, v, w),
                          f"membership of the third vertex disagrees on triple {(u, v, w)}")
        if flags[0]:
            out.append((u, v, w))
    return Hypergraph3(max(n, 1), frozenset(out))


def line_map_of(h: Hypergraph3) -> dict[tuple[int, int], frozenset[int]]:
    return {p: frozenset(members_of(mk)) for p, mk in hyper_pair_masks(h).items()}


def line_map_to_json(f: Mapping) -> dict:
    return {f"{u},{v}": sorted(s) for (u, v), s in sorted(f.items())}


def line_map_from_json(obj: Mapping) -> dict[tuple[int, int], frozenset[int]]:
    out = {}
    for key, members in obj.items():
        u, v = (int(x) for x in key.split(","))
        out[(u, v)] = frozenset(members)
    return out


# ---------------------------------------------------------------------------
# recognition
# ---------------------------------------------------------------------------

def is_graphic(h: Hypergraph3, cap: int = 8) -> Graph:
    """A connected graph G on the same labelled vertices with T(B(M(G))) = h.

    Labelled search over edge sets, deciding pairs in colex order; each
    3-set is checked as soon as its last pair is decided: a hyperedge may not
    be a triangle, and a non-hyperedge may not induce a path on three vertices.
    """
    if h.n > cap:
        raise CapExceeded("n", h.n, cap)
    n = h.n
    if n < 2:
        raise Refusal("too few vertices", n)
    T = h.triples
    pairs = [(i, j) for j in range(n) for i in range(j)]
    covered = set()
    for a, b, c in T:
        covered.update({(a, b), (a, c), (b, c)})
    rows = [0] * n

    def ok(i: int, j: int) -> bool:
        for a in range(i):
            k = (rows[a] >> i & 1) + (rows[a] >> j & 1) + (rows[i] >> j & 1)
            if (a, i, j) in T:
                if k == 3:
                    return False
            elif k == 2:
                return False
        return True

    def leaf() -> Graph | None:
        g = Graph(n, tuple(rows))
        if not is_connected(g):
            return None
        got = frozenset(_norm(t) for t in betweenness_of(bfs_metric(g)).triples)
        return g if got == T else None

    def search(k: int) -> Graph | None:
        if k == len(pairs):
            return leaf()
        i, j = pairs[k]
        choices = (1, 0) if (i, j) in covered else (1,)
        for bit in choices:
            if bit:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            if ok(i, j):
                found = search(k + 1)
                if found is not None:
                    return found
            if bit:
                rows[i] &= ~(1 << j)
                rows[j] &= ~(1 << i)
        return None

    g = search(0)
    if g is None:
        raise Refusal("not graphic", None, "no graph on these vertices yields this hypergraph")
    return g


class _Middles:
    """Backtracking state for choosing a middle vertex in every hyperedge,
    with forced consequences of (M3) propagated eagerly."""

    def __init__(self, h: Hypergraph3):
        self.h = h
        self.edges = sorted(h.triples)
        self.index = {frozenset(t): k for k, t in enumerate(self.edges)}
        self.mid = [-1] * len(self.edges)
        self.trail: list[int] = []
        # hyperedges through each pair
        self.through: dict[frozenset, list[int]] = {}
        for k, t in enumerate(self.edges):
            for p in itertools.combinations(t, 2):
                self.through.setdefault(frozenset(p), []).append(k)

    def _mid_of(self, tri) -> int:
        k = self.index.get(frozenset(tri))
        return -2 if k is None else self.mid[k]

    def _conclusions(self, k: int):
        """Triples forced by (M3) with hyperedge k as either premise."""
        t = self.edges[k]
        m = self.mid[k]
        ends = [x for x in t if x != m]
        # k supplies (u, m, w); partner (u, w, x) has middle w
        for u, w in (ends, ends[::-1]):
            for k2 in self.through.get(frozenset((u, w)), ()):
                if k2 == k or self.mid[k2] != w:
                    continue
                (x,) = set(self.edges[k2]) - {u, w}
                yield (u, m, x), (m, w, x)
        # k supplies (u, m, x) as the second premise; partner (u, v, m) has middle v
        for u, x in (ends, ends[::-1]):
            for k2 in self.through.get(frozenset((u, m)), ()):
                if k2 == k:
                    continue
                v = self.mid[k2]
                if v < 0 or v in (u, m):
                    continue
                yield (u, v, x), (v, m, x)

    def assign(self, k: int, m: int) -> bool:
        """Set middle of hyperedge k and propagate; False on conflict (the
        trail still records what was set, so the caller must undo)."""
        queue = [(k, m)]
        while queue:
            k, m = queue.pop()
            if self.mid[k] == m:
                continue
            if self.mid[k] >= 0:
                return False
            self.mid[k] = m
            self.trail.append(k)
            for c1, c2 in self._conclusions(k):
                for a, b, c in (c1, c2):
                    cur = self._mid_of((a, b, c))
                    if cur == -2 or (cur >= 0 and cur != b):
                        return False
                    if cur == -1:
                        queue.append((self.index[frozenset((a, b, c))], b))
        return True

    def undo(self, mark: int) -> None:
        while len(self.trail) > mark:
            self.mid[self.trail.pop()] = -1

    def relation(self) -> TernaryRelation:
        out = set()
        for t, m in zip(self.edges, self.mid):
            x, y = (p for p in t if p != m)
            out.add((x, m, y))
            out.add((y, m, x))
        return TernaryRelation(self.h.n, frozenset(out))

    def search(self, node_ok=lambda: True):
        """Yield after every complete consistent assignment (depth first,
        lowest hyperedge index and lowest middle first)."""
        if not node_ok():
            return
        try:
            k = self.mid.index(-1)
        except ValueError:
            yield
            return
        for m in self.edges[k]:
            mark = len(self.trail)
            if self.assign(k, m):
                yield from self.search(node_ok)
            self.undo(mark)


def is_pseudometric(h: Hypergraph3, cap: int = 20) -> TernaryRelation:
    """A pseudometric betweenness B with T(B) = h, or :class:`Refusal`."""
    if len(h) > cap:
        raise CapExceeded("hyperedges", len(h), cap)
    state = _Middles(h)
    for _ in state.search():
        r = state.relation()
        if check_axioms(r).pseudometric and triples_of(r) == h:
            return r
    raise Refusal("not pseudometric", None, "no orientation of the hyperedges satisfies (M0)-(M3)")


def is_metric(h: Hypergraph3, cap_n: int = 8, cap_t: int = 12) -> MetricSpace:
    """A metric space M with T(B(M)) = h, or :class:`Refusal`.  Middle
    assignments are explored with (M3) propagation, and every partial
    assignment is pruned by an exact LP feasibility test."""
    from ._lp import solve_betweenness

    if h.n > cap_n:
        raise CapExceeded("n", h.n, cap_n)
    if len(h) > cap_t:
        raise CapExceeded("hyperedges", len(h), cap_t)
    if h.n < 2:
        raise Refusal("too few vertices", h.n)
    state = _Middles(h)

    def partial() -> dict[frozenset, int]:
        return {frozenset(t): m for t, m in zip(state.edges, state.mid) if m >= 0}

    def node_ok() -> bool:
        free = [frozenset(t) for t, m in zip(state.edges, state.mid) if m < 0]
        return solve_betweenness(h.n, partial(), free) is not None

    for _ in state.search(node_ok):
        d = solve_betweenness(h.n, partial())
        if d is None:
            continue
        m = validate_metric(d)
        if triples_of(betweenness_of(m)) == h:
            return m
        raise AssertionError("LP certificate does not reproduce the hypergraph")
    raise Refusal("not metric", None, "no metric space has this hypergraph of collinear triples")
