"""Lines, closure lines and line families.

A line is handled internally as a vertex bitmask; ``Line`` and ``LineFamily``
are the public, JSON-friendly views.  Everything here is exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import ceil, log2
from typing import Mapping

from .errors import Refusal
from .metrics import MetricSpace, TernaryRelation, is_graph_metric

Pair = tuple[int, int]


def mask_of(vertices) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def members_of(mask: int) -> list[int]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return out


@dataclass(frozen=True)
class Line:
    members: frozenset[int]
    generators: tuple[Pair, ...]

    def to_json(self) -> dict:
        return {"members": sorted(self.members), "generators": [list(p) for p in self.generators]}


@dataclass(frozen=True)
class LineFamily:
    n: int
    lines: tuple[Line, ...]
    lam: int
    mu: int
    universal_present: bool
    mode: str = "lines"

    def member_sets(self) -> set[frozenset[int]]:
        return {ln.members for ln in self.lines}

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "mode": self.mode,
            "lambda": self.lam,
            "mu": self.mu,
            "universal": self.universal_present,
            "lines": [ln.to_json() for ln in self.lines],
        }


def family_from_masks(n: int, pair_masks: Mapping[Pair, int], mode: str = "lines") -> LineFamily:
    full = (1 << n) - 1
    groups: dict[int, list[Pair]] = {}
    for p in sorted(pair_masks):
        groups.setdefault(pair_masks[p], []).append(p)
    lines = sorted((Line(frozenset(members_of(mk)), tuple(gs)) for mk, gs in groups.items()),
                   key=lambda ln: (len(ln.members), sorted(ln.members)))
    mu = len(groups.get(full, ()))
    return LineFamily(n, tuple(lines), len(groups), mu, full in groups, mode)


# ---------------------------------------------------------------------------
# metric level
# ---------------------------------------------------------------------------

def metric_pair_masks(m: MetricSpace) -> dict[Pair, int]:
    d = m.d
    out = {}
    for x, y in itertools.combinations(range(m.n), 2):
        dx, dy, dxy = d[x], d[y], d[x][y]
        mk = 1 << x | 1 << y
        for z in range(m.n):
            if z == x or z == y:
                continue
            a, b = dx[z], dy[z]
            if dxy + b == a or dxy + a == b or a + b == dxy:
                mk |= 1 << z
        out[(x, y)] = mk
    return out


def _check_pair(n: int, x: int, y: int) -> Pair:
    if x == y:
        raise ValueError("a line needs two distinct points")
    if not (0 <= x < n and 0 <= y < n):
        raise ValueError(f"point out of range for n={n}")
    return (x, y) if x < y else (y, x)


def line(m: MetricSpace, x: int, y: int) -> Line:
    x, y = _check_pair(m.n, x, y)
    mk = 1 << x | 1 << y
    for z in range(m.n):
        if z != x and z != y and (m.between(x, y, z) or m.between(y, x, z) or m.between(x, z, y)):
            mk |= 1 << z
    return Line(frozenset(members_of(mk)), ((x, y),))


def _closure(pair_masks: Mapping[Pair, int], start: int) -> int:
    s = start
    done: list[int] = []
    queue = members_of(start)
    while queue:
        u = queue.pop()
        grow = 0
        for v in done:
            grow |= pair_masks[(u, v) if u < v else (v, u)]
        done.append(u)
        new = grow & ~s
        if new:
            s |= new
            queue.extend(members_of(new))
    return s


def closure_masks(pair_masks: Mapping[Pair, int]) -> dict[Pair, int]:
    return {p: _closure(pair_masks, mk) for p, mk in pair_masks.items()}


def closure_line(m: MetricSpace, x: int, y: int) -> Line:
    x, y = _check_pair(m.n, x, y)
    masks = metric_pair_masks(m)
    return Line(frozenset(members_of(_closure(masks, masks[(x, y)]))), ((x, y),))


def line_family(m: MetricSpace, mode: str = "lines") -> LineFamily:
    masks = metric_pair_masks(m)
    if mode == "closure_lines":
        masks = closure_masks(masks)
    elif mode != "lines":
        raise ValueError(f"unknown mode {mode!r}")
    return family_from_masks(m.n, masks, mode)


# ---------------------------------------------------------------------------
# relation level
# ---------------------------------------------------------------------------

def relation_pair_masks(r: TernaryRelation) -> dict[Pair, int]:
    """L(xy) = {x,y} plus every z with (x,y,z), (y,z,x) or (z,x,y) in B."""
    B = r.triples
    out = {}
    for x, y in itertools.combinations(range(r.n), 2):
        mk = 1 << x | 1 << y
        for z in range(r.n):
            if z != x and z != y and ((x, y, z) in B or (y, z, x) in B or (z, x, y) in B):
                mk |= 1 << z
        out[(x, y)] = mk
    return out


def relation_line_family(r: TernaryRelation) -> LineFamily:
    return family_from_masks(r.n, relation_pair_masks(r))


# ---------------------------------------------------------------------------
# verdicts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DBEVerdict:
    holds: bool
    lam: int
    universal_present: bool

    def to_json(self) -> dict:
        return {"holds": self.holds, "lambda": self.lam, "universal": self.universal_present}


@dataclass(frozen=True)
class AMRZVerdict:
    holds: bool
    holds_metric_form: bool
    lam: int
    mu: int

    def to_json(self) -> dict:
        return {"holds": self.holds, "holds_metric_form": self.holds_metric_form,
                "lambda": self.lam, "mu": self.mu}


def dbe_of(fam: LineFamily) -> DBEVerdict:
    return DBEVerdict(fam.lam >= fam.n or fam.universal_present, fam.lam, fam.universal_present)


def amrz_of(fam: LineFamily) -> AMRZVerdict:
    return AMRZVerdict(fam.lam + fam.mu >= fam.n,
                       fam.lam + max(fam.mu - 1, 0) >= fam.n,
                       fam.lam, fam.mu)


def check_dbe(m: MetricSpace) -> DBEVerdict:
    return dbe_of(line_family(m))


def check_amrz(m: MetricSpace) -> AMRZVerdict:
    return amrz_of(line_family(m))


def lg_bound(n: int) -> int:
    return ceil(log2(n)) if n > 1 else 0


# ---------------------------------------------------------------------------
# pairs generating the same line
# ---------------------------------------------------------------------------

def interval_and_exterior(m: MetricSpace, a: int, b: int) -> tuple[frozenset[int], frozenset[int]]:
    """I(a,b): points between a and b.  O(a,b): points z with a between z and b,
    or b between a and z."""
    _check_pair(m.n, a, b)
    inner = frozenset(z for z in range(m.n) if m.between(a, z, b))
    outer = frozenset(z for z in range(m.n) if m.between(z, a, b) or m.between(a, b, z))
    ln = line(m, a, b).members
    assert ln == {a, b} | inner | outer
    return inner, outer


def is_parallelogram(m: MetricSpace, a: int, b: int, c: int, d: int) -> bool:
    if len({a, b, c, d}) != 4:
        raise ValueError("a parallelogram needs four distinct points")
    D = m.d
    return (D[a][b] == D[c][d] and D[b][c] == D[d][a]
            and D[a][c] == D[b][d] == D[a][b] + D[b][c])


@dataclass(frozen=True)
class EqualLineCase:
    labeling: tuple[int, int, int, int]
    case: str  # "alpha" | "beta" | "gamma"

    def to_json(self) -> dict:
        return {"labeling": list(self.labeling), "case": self.case}


def _case_alpha(m: MetricSpace, a: int, b: int, c: int, d: int) -> bool:
    if b == c:
        return m.between(a, b, d)
    return (m.between(a, b, c) and m.between(b, c, d)
            and m.between(a, b, d) and m.between(a, c, d))


def _case_beta(m: MetricSpace, a: int, b: int, c: int, d: int) -> bool:
    if len({a, b, c, d}) != 4 or not is_parallelogram(m, a, b, c, d):
        return False
    return not interval_and_exterior(m, a, b)[0] and not interval_and_exterior(m, c, d)[0]


def _case_gamma(m: MetricSpace, a: int, b: int, c: int, d: int) -> bool:
    if len({a, b, c, d}) != 4 or not is_parallelogram(m, a, c, b, d):
        return False
    return not interval_and_exterior(m, a, b)[1] and not interval_and_exterior(m, c, d)[1]


def _labelings(e: Pair, f: Pair):
    shared = set(e) & set(f)
    if shared:
        (s,) = shared
        a = e[0] if e[1] == s else e[1]
        d = f[0] if f[1] == s else f[1]
        yield (a, s, s, d)
        return
    for a, b in (e, e[::-1]):
        for c, d in (f, f[::-1]):
            yield (a, b, c, d)


def classify_equal_line_pair(m: MetricSpace, e: Pair, f: Pair) -> EqualLineCase | None:
    """Label two pairs with L(e) = L(f) so that one of the three equal-line
    configurations holds.  None when the lines differ, and also when no
    labeling fits: on the path 1-0-2 the pairs 01 and 12 span the same line
    but match none of the three.  Only graph metrics are accepted."""
    e = _check_pair(m.n, *e)
    f = _check_pair(m.n, *f)
    if e == f:
        raise ValueError("pairs must differ")
    if not is_graph_metric(m):
        raise Refusal("not a graph metric", None,
                      "the equal-line classification is only stated for graph metrics")
    if line(m, *e).members != line(m, *f).members:
        return None
    for first, second in ((e, f), (f, e)):
        for lab in _labelings(first, second):
            for name, test in (("alpha", _case_alpha), ("beta", _case_beta), ("gamma", _case_gamma)):
                if test(m, *lab):
                    return EqualLineCase(lab, name)
    return None


def is_geometric_dominant(m: MetricSpace) -> bool:
    sets = sorted({mk for mk in metric_pair_masks(m).values()}, key=int.bit_count)
    for i, small in enumerate(sets):
        for big in sets[i + 1:]:
            if small & big == small and small != big:
                return False
    return True
