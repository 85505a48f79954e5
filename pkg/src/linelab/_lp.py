"""Exact rational feasibility of betweenness systems, via cddlib.

Unknowns are the C(n,2) pairwise distances plus one margin ``t``.  A chosen
betweenness (x, m, y) contributes the equation d(x,m) + d(m,y) - d(x,y) = 0;
every other ordering of every triple contributes d(x,m) + d(m,y) - d(x,y) >= t,
and every distance satisfies d >= t.  With t <= 1 the LP is bounded and the
system is homogeneous, so a strictly positive optimum is a realization.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Mapping

import cdd


def _pair_index(n: int) -> dict[tuple[int, int], int]:
    return {p: k for k, p in enumerate(itertools.combinations(range(n), 2))}


def solve_betweenness(n: int, middles: Mapping[frozenset, int],
                      free: Iterable[frozenset] = ()) -> list[list[Fraction]] | None:
    """Distances realizing the prescribed middles exactly, or None.

    ``middles`` maps a 3-set to the point that must lie between the other two;
    every 3-set absent from both ``middles`` and ``free`` must have no point
    between the others.  3-sets in ``free`` only get triangle inequalities,
    which lets a search test partial assignments.
    """
    idx = _pair_index(n)
    nv = len(idx) + 1
    tcol = nv  # column of t in a cdd row [b, x_1..x_nv]

    def col(a: int, b: int) -> int:
        return 1 + idx[(a, b) if a < b else (b, a)]

    free = set(free)
    rows: list[list[int]] = []
    lin: list[int] = []
    for tri in itertools.combinations(range(n), 3):
        key = frozenset(tri)
        mid = middles.get(key)
        for m in tri:
            x, y = (p for p in tri if p != m)
            row = [0] * (nv + 1)
            row[col(x, m)] += 1
            row[col(m, y)] += 1
            row[col(x, y)] -= 1
            if mid == m:
                lin.append(len(rows))
            elif key not in free:
                row[tcol] = -1
            rows.append(row)
    for p in idx:
        row = [0] * (nv + 1)
        row[col(*p)] = 1
        row[tcol] = -1
        rows.append(row)
    cap = [0] * (nv + 1)
    cap[0] = 1
    cap[tcol] = -1
    rows.append(cap)

    mat = cdd.Matrix(rows, number_type="fraction")
    mat.lin_set = frozenset(lin)
    mat.obj_type = cdd.LPObjType.MAX
    mat.obj_func = tuple([0] * nv + [1])
    lp = cdd.LinProg(mat)
    lp.solve()
    if lp.status != cdd.LPStatusType.OPTIMAL or Fraction(lp.obj_value) <= 0:
        return None
    x = [Fraction(v) for v in lp.primal_solution]
    d = [[Fraction(0)] * n for _ in range(n)]
    for (a, b), k in idx.items():
        d[a][b] = d[b][a] = x[k]
    return d
