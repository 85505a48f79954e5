"""Edge partitions of K_n and the two fixed-point procedures G and H that try
to decide whether a partition is the equal-line relation of some graph
(G) or some 3-uniform hypergraph (H).

Text files use 1-indexed vertices and classes, one class per line::

    n: 4            (optional; otherwise the largest vertex)
    1: 1-2 2-3 3-4
    2: 1-3 2-4 1-4

JSON files are 0-indexed: ``{"n": 4, "classes": [[[0, 1], [1, 2]], ...]}``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .hypergraphs import Hypergraph3
from .lines import members_of, metric_pair_masks
from .metrics import MetricSpace

Pair = tuple[int, int]

REJECT = "REJECT"
DONT_KNOW = "DONT_KNOW"
ACCEPT = "ACCEPT"

_MESSAGES = {
    ("g", REJECT): "Does not arise from any graph",
    ("h", REJECT): "Does not arise from any hypergraph",
    ("g", DONT_KNOW): "Don't know",
    ("h", DONT_KNOW): "Don't know",
    ("h", ACCEPT): "Hypergraph",
}


@dataclass(frozen=True)
class EdgePartition:
    n: int
    classes: tuple[frozenset[Pair], ...]

    def __post_init__(self):
        seen: set[Pair] = set()
        fixed = []
        for k, cls in enumerate(self.classes):
            norm = set()
            for u, v in cls:
                if u == v or not (0 <= u < self.n and 0 <= v < self.n):
                    raise ValueError(f"class {k + 1}: bad pair {(u, v)}")
                p = (u, v) if u < v else (v, u)
                if p in seen or p in norm:
                    raise ValueError(f"class {k + 1}: pair {p} listed twice")
                norm.add(p)
            if not norm:
                raise ValueError(f"class {k + 1} is empty")
            seen |= norm
            fixed.append(frozenset(norm))
        missing = set(itertools.combinations(range(self.n), 2)) - seen
        if missing:
            raise ValueError(f"pairs not covered: {sorted(missing)[:5]}")
        object.__setattr__(self, "classes", tuple(fixed))

    def class_of(self) -> dict[Pair, int]:
        return {p: i for i, cls in enumerate(self.classes) for p in cls}

    def canonical(self) -> frozenset[frozenset[Pair]]:
        """Order-free view, for comparing partitions."""
        return frozenset(self.classes)

    def to_json(self) -> dict:
        return {"n": self.n, "classes": [[list(p) for p in sorted(c)] for c in self.classes]}

    @classmethod
    def from_json(cls, obj: dict) -> "EdgePartition":
        return cls(obj["n"], tuple(frozenset(tuple(p) for p in c) for c in obj["classes"]))

    def to_text(self) -> str:
        out = [f"n: {self.n}"]
        for i, c in enumerate(self.classes, 1):
            out.append(f"{i}: " + " ".join(f"{u + 1}-{v + 1}" for u, v in sorted(c)))
        return "\n".join(out) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "EdgePartition":
        n = None
        classes: dict[int, list[Pair]] = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            s = raw.split("#", 1)[0].strip()
            if not s:
                continue
            head, _, body = s.partition(":")
            head = head.strip()
            try:
                if head == "n":
                    n = int(body)
                    continue
                idx = int(head)
                pairs = []
                for tok in body.split():
                    a, b = tok.split("-")
                    pairs.append((int(a) - 1, int(b) - 1))
            except ValueError as exc:
                raise ValueError(f"line {lineno}: cannot parse {raw!r}") from exc
            if idx in classes:
                raise ValueError(f"line {lineno}: class {idx} given twice")
            classes[idx] = pairs
        if n is None:
            n = 1 + max((max(p) for ps in classes.values() for p in ps), default=0)
        return cls(n, tuple(frozenset(classes[k]) for k in sorted(classes)))


def partition_from_classes(n: int, classes: Iterable[Iterable[Pair]], one_indexed: bool = False) -> EdgePartition:
    s = 1 if one_indexed else 0
    return EdgePartition(n, tuple(frozenset((u - s, v - s) for u, v in c) for c in classes))


def line_equivalence(m: MetricSpace) -> EdgePartition:
    """Pairs are equivalent when they generate the same line."""
    groups: dict[int, list[Pair]] = {}
    for p, mk in sorted(metric_pair_masks(m).items()):
        groups.setdefault(mk, []).append(p)
    return EdgePartition(m.n, tuple(frozenset(g) for g in groups.values()))


def fixed_point(p: EdgePartition, rng: random.Random | None = None) -> list[int]:
    """The sets L_i (as bitmasks) after the shared while-loop of G and H.

    Sweeps in lexicographic order of (i, u, v, w) until nothing changes; with
    ``rng`` every sweep visits the candidates in a fresh random order.  The
    rule only ever adds vertices, so the result is the same either way.
    """
    cls = p.class_of()
    L = [0] * len(p.classes)
    for i, c in enumerate(p.classes):
        for u, v in c:
            L[i] |= 1 << u | 1 << v
    moves = []  # (i, u, v) with uv in C_i, both orientations
    for i, c in enumerate(p.classes):
        for u, v in sorted(c):
            moves.append((i, u, v))
            moves.append((i, v, u))
    moves.sort()
    changed = True
    while changed:
        changed = False
        order = moves
        if rng is not None:
            order = moves[:]
            rng.shuffle(order)
        for i, u, v in order:
            for w in range(p.n):
                if w == u or w == v or L[i] >> w & 1:
                    continue
                j = cls[(v, w) if v < w else (w, v)]
                if L[j] >> u & 1:
                    L[i] |= 1 << w
                    changed = True
    return L


@dataclass(frozen=True)
class EquivOutcome:
    algorithm: str  # "g" | "h"
    verdict: str
    n: int
    sets: tuple[frozenset[int], ...]
    hypergraph: Hypergraph3 | None = None

    @property
    def message(self) -> str:
        return _MESSAGES[(self.algorithm, self.verdict)]

    def to_text(self) -> str:
        def fmt(s: Iterable[int]) -> str:
            return "{" + ",".join(str(v + 1) for v in sorted(s)) + "}"

        out = [f"{self.verdict}: {self.message}"]
        if self.hypergraph is not None:
            out.append("T = {" + ",".join(fmt(t) for t in sorted(self.hypergraph.triples)) + "}")
        for i, s in enumerate(self.sets, 1):
            out.append(f"L_{i} = {fmt(s)}")
        return "\n".join(out) + "\n"

    def to_json(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "verdict": self.verdict,
            "message": self.message,
            "n": self.n,
            "sets": [sorted(s) for s in self.sets],
            "hypergraph": None if self.hypergraph is None else self.hypergraph.to_json(),
        }


def _two_full(n: int, L: Sequence[int]) -> bool:
    full = (1 << n) - 1
    return sum(mk == full for mk in L) >= 2


def algorithm_g(p: EdgePartition, rng: random.Random | None = None) -> EquivOutcome:
    L = fixed_point(p, rng)
    verdict = REJECT if _two_full(p.n, L) else DONT_KNOW
    return EquivOutcome("g", verdict, p.n, tuple(frozenset(members_of(mk)) for mk in L))


def algorithm_h(p: EdgePartition, rng: random.Random | None = None) -> EquivOutcome:
    L = fixed_point(p, rng)
    sets = tuple(frozenset(members_of(mk)) for mk in L)
    if len(set(L)) == len(L):
        triples = set()
        for i, c in enumerate(p.classes):
            for u, v in c:
                for w in members_of(L[i]):
                    if w != u and w != v:
                        triples.add(tuple(sorted((u, v, w))))
        return EquivOutcome("h", ACCEPT, p.n, sets, Hypergraph3(max(p.n, 1), frozenset(triples)))
    verdict = REJECT if _two_full(p.n, L) else DONT_KNOW
    return EquivOutcome("h", verdict, p.n, sets)
