"""Exact finite metric spaces and their betweenness relations.

Distances are ints or ``Fraction``s, never floats: betweenness is an exact
equality test and a rounding error would change which points are collinear.
"""

from __future__ import annotations

import functools
import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import CapExceeded, MetricError, Refusal

Number = Union[int, Fraction]
Triple = tuple[int, int, int]


def as_exact(x) -> Number:
    """Coerce an int, Fraction, or "p/q" string to an exact number."""
    if isinstance(x, bool):
        raise TypeError("booleans are not distances")
    if isinstance(x, float):
        raise TypeError(f"float {x!r} is not exact; pass an int, Fraction or 'p/q' string")
    if isinstance(x, str):
        x = Fraction(x.strip())
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else x
    if isinstance(x, int):
        return x
    raise TypeError(f"unsupported distance type {type(x).__name__}")


def format_exact(x: Number) -> str:
    return str(Fraction(x))


@dataclass(frozen=True)
class MetricSpace:
    n: int
    d: tuple[tuple[Number, ...], ...]

    def dist(self, u: int, v: int) -> Number:
        return self.d[u][v]

    def between(self, u: int, v: int, w: int) -> bool:
        """v lies between u and w."""
        return u != v and v != w and u != w and self.d[u][v] + self.d[v][w] == self.d[u][w]

    def distinct_distances(self) -> set[Number]:
        return {self.d[u][v] for u, v in itertools.combinations(range(self.n), 2)}

    def to_json(self) -> dict:
        return {"n": self.n, "d": [[format_exact(x) for x in row] for row in self.d]}

    @classmethod
    def from_json(cls, obj: dict) -> "MetricSpace":
        m = validate_metric(obj["d"])
        if "n" in obj and obj["n"] != m.n:
            raise ValueError(f"declared n={obj['n']} but matrix is {m.n}x{m.n}")
        return m


def validate_metric(d: Sequence[Sequence]) -> MetricSpace:
    """Check the metric axioms exactly; raise :class:`MetricError` carrying
    the first violated axiom and a witness."""
    n = len(d)
    if n < 2:
        raise MetricError("size", (n,), "a metric space needs at least two points")
    rows = []
    for u, row in enumerate(d):
        if len(row) != n:
            raise MetricError("square", (u,), f"row {u} has {len(row)} entries, expected {n}")
        rows.append(tuple(as_exact(x) for x in row))
    for u in range(n):
        if rows[u][u] != 0:
            raise MetricError("diagonal", (u,), f"d({u},{u}) = {rows[u][u]} is not zero")
    for u, v in itertools.combinations(range(n), 2):
        if rows[u][v] != rows[v][u]:
            raise MetricError("symmetry", (u, v), f"d({u},{v}) != d({v},{u})")
        if rows[u][v] <= 0:
            raise MetricError("positivity", (u, v), f"d({u},{v}) = {rows[u][v]} is not positive")
    for u, v, w in itertools.permutations(range(n), 3):
        if rows[u][w] > rows[u][v] + rows[v][w]:
            raise MetricError("triangle", (u, v, w),
                              f"d({u},{w}) > d({u},{v}) + d({v},{w})")
    return MetricSpace(n, tuple(rows))


# ---------------------------------------------------------------------------
# constructions and embeddings
# ---------------------------------------------------------------------------

def l1(p: Sequence[Number], q: Sequence[Number]) -> Number:
    return sum(abs(a - b) for a, b in zip(p, q))


def linf(p: Sequence[Number], q: Sequence[Number]) -> Number:
    return max(abs(a - b) for a, b in zip(p, q))


def from_l1_points(points: Sequence[Sequence]) -> tuple[MetricSpace, bool]:
    """The l1 metric on plane points, and whether the set is non-degenerate
    (no two points share an x- or a y-coordinate)."""
    pts = [(as_exact(x), as_exact(y)) for x, y in points]
    if len(pts) < 2:
        raise ValueError("need at least two points")
    if len(set(pts)) != len(pts):
        dup = next(p for p in pts if pts.count(p) > 1)
        raise ValueError(f"duplicate point {dup}")
    d = tuple(tuple(l1(p, q) for q in pts) for p in pts)
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    nondegenerate = len(set(xs)) == len(xs) and len(set(ys)) == len(ys)
    return MetricSpace(len(pts), d), nondegenerate


def linf_embed(m: MetricSpace) -> list[tuple[Number, ...]]:
    """Fréchet-style map: point v goes to its row of distances."""
    return [tuple(row) for row in m.d]


def unary_embed(vectors: Sequence[Sequence[int]], k: int) -> list[tuple[int, ...]]:
    """{0..k}^d -> {0,1}^(kd): coordinate value x becomes x ones then k-x zeros."""
    out = []
    for vec in vectors:
        bits: list[int] = []
        for x in vec:
            if not isinstance(x, int) or not 0 <= x <= k:
                raise ValueError(f"entry {x!r} outside 0..{k}")
            bits += [1] * x + [0] * (k - x)
        out.append(tuple(bits))
    return out


def l2_linf_plane_isometry(points: Sequence[Sequence]) -> list[tuple[Number, Number]]:
    """(x, y) -> (x + y, x - y).  In exact arithmetic the checkable identity is
    linf(image) == l1(input) for every pair."""
    return [(as_exact(x) + as_exact(y), as_exact(x) - as_exact(y)) for x, y in points]


# ---------------------------------------------------------------------------
# betweenness
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TernaryRelation:
    n: int
    triples: frozenset[Triple] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("relation needs at least one point")
        fixed = frozenset(tuple(t) for t in self.triples)
        object.__setattr__(self, "triples", fixed)
        for t in fixed:
            if len(t) != 3 or len(set(t)) != 3:
                raise ValueError(f"triple {t} does not have three distinct points")
            if any(not 0 <= x < self.n for x in t):
                raise ValueError(f"triple {t} out of range for n={self.n}")

    def __contains__(self, t) -> bool:
        return tuple(t) in self.triples

    def __len__(self) -> int:
        return len(self.triples)

    def to_json(self) -> list:
        return [list(t) for t in sorted(self.triples)]

    @classmethod
    def from_json(cls, obj) -> "TernaryRelation":
        if isinstance(obj, dict):
            return cls(obj["n"], frozenset(tuple(t) for t in obj["triples"]))
        triples = frozenset(tuple(t) for t in obj)
        n = 1 + max((x for t in triples for x in t), default=-1)
        return cls(max(n, 1), triples)


def betweenness_of(m: MetricSpace) -> TernaryRelation:
    d = m.d
    out = set()
    for u, v, w in itertools.permutations(range(m.n), 3):
        if d[u][v] + d[v][w] == d[u][w]:
            out.add((u, v, w))
    return TernaryRelation(m.n, frozenset(out))


AXIOMS = ("m0", "m1", "m2", "m3", "m4", "m5", "m6")


@dataclass(frozen=True)
class AxiomReport:
    m0: bool
    m1: bool
    m2: bool
    m3: bool
    m4: bool
    m5: bool
    m6: bool
    witnesses: dict = field(default_factory=dict)

    @property
    def pseudometric(self) -> bool:
        return self.m0 and self.m1 and self.m2 and self.m3

    def to_json(self) -> dict:
        out = {k: getattr(self, k) for k in AXIOMS}
        out["witnesses"] = {k: [list(t) for t in w] for k, w in self.witnesses.items()}
        return out


def check_axioms(r: TernaryRelation) -> AxiomReport:
    """Sweep every quantifier of (M0)-(M6).  The four-point axioms range over
    four distinct points.  A failed axiom's witness is the lexicographically
    first tuple of premise triples that breaks it."""
    B = r.triples
    order = sorted(B)
    by_first2: dict[tuple[int, int], list[int]] = defaultdict(list)
    for u, v, w in order:
        by_first2[(u, v)].append(w)
    wit: dict[str, tuple] = {}

    for t in order:
        if len(set(t)) != 3 or not all(0 <= x < r.n for x in t):
            wit.setdefault("m0", (t,))
    for u, v, w in order:
        if (w, v, u) not in B:
            wit.setdefault("m1", ((u, v, w),))
        if (u, w, v) in B:
            wit.setdefault("m2", ((u, v, w), (u, w, v)))

    for u, v, w in order:
        # M3: (u,v,w),(u,w,x)
        for x in by_first2.get((u, w), ()):
            if x in (u, v, w) or "m3" in wit:
                continue
            if (u, v, x) not in B or (v, w, x) not in B:
                wit["m3"] = ((u, v, w), (u, w, x))
        # M4: (u,v,w),(v,w,x)
        for x in by_first2.get((v, w), ()):
            if x in (u, v, w) or "m4" in wit:
                continue
            if (u, v, x) not in B or (u, w, x) not in B:
                wit["m4"] = ((u, v, w), (v, w, x))
        # M5: (u,v,w),(u,v,x)
        for x in by_first2.get((u, v), ()):
            if x in (u, v, w) or "m5" in wit:
                continue
            left = (u, w, x) in B and (v, w, x) in B
            right = (u, x, w) in B and (v, x, w) in B
            if not (left or right):
                wit["m5"] = ((u, v, w), (u, v, x))
    # M6: (u,v,x),(u,w,x)
    by_ends: dict[tuple[int, int], list[int]] = defaultdict(list)
    for u, v, x in order:
        by_ends[(u, x)].append(v)
    for (u, x), mids in sorted(by_ends.items()):
        if "m6" in wit:
            break
        for v, w in itertools.permutations(mids, 2):
            left = (u, v, w) in B and (v, w, x) in B
            right = (u, w, v) in B and (w, v, x) in B
            if not (left or right):
                wit["m6"] = ((u, v, x), (u, w, x))
                break
    flags = {k: k not in wit for k in AXIOMS}
    return AxiomReport(**flags, witnesses=wit)


# ---------------------------------------------------------------------------
# recognition: graph level and metric level
# ---------------------------------------------------------------------------

def recognize_graph_metric(m: MetricSpace):
    """Return the unique graph G with M(G) = m, or raise :class:`Refusal`."""
    from .graphs import Graph, bfs_metric, is_connected

    g = Graph.from_edges(m.n, [(u, v) for u, v in itertools.combinations(range(m.n), 2)
                               if m.d[u][v] == 1])
    if not is_connected(g):
        raise Refusal("candidate graph disconnected", None,
                      "the distance-1 graph is disconnected")
    gm = bfs_metric(g)
    for u, v in itertools.combinations(range(m.n), 2):
        if gm.d[u][v] != m.d[u][v]:
            raise Refusal("distance mismatch", (u, v),
                          f"d({u},{v}) = {m.d[u][v]} but the candidate graph gives {gm.d[u][v]}")
    return g


@functools.lru_cache(maxsize=4096)
def is_graph_metric(m: MetricSpace) -> bool:
    try:
        recognize_graph_metric(m)
    except Refusal:
        return False
    return True


def recognize_graph_betweenness(r: TernaryRelation):
    """Return the unique graph G with B(M(G)) = r, or raise :class:`Refusal`."""
    from .graphs import Graph, bfs_metric, is_connected

    if r.n < 2:
        raise Refusal("too few points", r.n)
    has_middle = {(u, w) for u, _, w in r.triples}
    g = Graph.from_edges(r.n, [(u, w) for u, w in itertools.combinations(range(r.n), 2)
                               if (u, w) not in has_middle and (w, u) not in has_middle])
    if not is_connected(g):
        raise Refusal("candidate graph disconnected")
    got = betweenness_of(bfs_metric(g))
    if got.triples != r.triples:
        diff = sorted(got.triples ^ r.triples)[0]
        raise Refusal("betweenness mismatch", diff,
                      f"triple {diff} differs between the relation and the candidate graph")
    return g


def recognize_metric_betweenness(r: TernaryRelation, cap: int = 12) -> MetricSpace:
    """Find a metric space whose betweenness is exactly ``r`` by exact LP, or
    raise :class:`Refusal`."""
    from ._lp import solve_betweenness

    if r.n > cap:
        raise CapExceeded("n", r.n, cap)
    if r.n < 2:
        raise Refusal("too few points", r.n)
    report = check_axioms(r)
    for ax in ("m0", "m1", "m2", "m3"):
        if not getattr(report, ax):
            raise Refusal(f"axiom {ax.upper()} fails", report.witnesses[ax])
    middles = {frozenset((u, v, w)): v for u, v, w in r.triples}
    d = solve_betweenness(r.n, middles)
    if d is None:
        raise Refusal("infeasible", None, "no metric realizes this betweenness")
    m = validate_metric(d)
    if betweenness_of(m).triples != r.triples:
        raise AssertionError("LP certificate does not reproduce the relation")
    return m


def four_point_example() -> MetricSpace:
    """dist(a,b) = dist(b,c) = 1, every other nonzero distance 2 (a,b,c,d = 0..3)."""
    return validate_metric([[0, 1, 2, 2], [1, 0, 1, 2], [2, 1, 0, 2], [2, 2, 2, 0]])


def eight_triple_relation() -> TernaryRelation:
    """Pseudometric betweenness with (M4)-(M6) that no metric realizes.
    Points a1, a2, b1, b2, c1, c2 are 0..5."""
    a1, a2, b1, b2, c1, c2 = range(6)
    fwd = [(a1, b1, c1), (a1, b2, c2), (a2, b1, c2), (a2, b2, c1)]
    return TernaryRelation(6, frozenset(fwd + [t[::-1] for t in fwd]))

