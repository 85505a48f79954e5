"""Canonical labelling of small graphs by individualisation-refinement.

Good enough for the n <= 8 enumeration: ordered equitable refinement, the
first non-singleton cell as target, and pruning of children that lie in one
orbit of the automorphisms discovered so far (restricted to those fixing the
individualised vertices).  The certificate is the adjacency bit string of the
relabelled graph; the canonical form maximises it.
"""

from __future__ import annotations

from .graphs import Graph


def _refine(adj: tuple[int, ...], cells: list[list[int]]) -> list[list[int]]:
    while True:
        masks = []
        for c in cells:
            m = 0
            for v in c:
                m |= 1 << v
            masks.append(m)
        out = []
        split = False
        for c in cells:
            if len(c) == 1:
                out.append(c)
                continue
            sig = {v: tuple((adj[v] & m).bit_count() for m in masks) for v in c}
            keys = sorted(set(sig.values()))
            if len(keys) == 1:
                out.append(c)
                continue
            split = True
            for k in keys:
                out.append([v for v in c if sig[v] == k])
        cells = out
        if not split:
            return cells


def _cert(adj: tuple[int, ...], order: list[int]) -> int:
    pos = [0] * len(order)
    for i, v in enumerate(order):
        pos[v] = i
    c = 0
    for i, u in enumerate(order):
        row = adj[u]
        for j in range(i):
            if row >> order[j] & 1:
                c |= 1 << (i * (i - 1) // 2 + j)
    return c


def _orbits_of(n: int, gens: list[tuple[int, ...]]) -> list[int]:
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in gens:
        for x in range(n):
            a, b = find(x), find(g[x])
            if a != b:
                parent[max(a, b)] = min(a, b)
    return [find(x) for x in range(n)]


def canonical_labeling(g: Graph) -> tuple[int, list[int]]:
    """(certificate, order) with ``order[k]`` the vertex placed at position k."""
    n, adj = g.n, g.adj
    if n == 0:
        return 0, []
    best: list = [None, None]  # cert, order
    first: list = [None, None]
    auts: list[tuple[int, ...]] = []

    def leaf(order: list[int]) -> None:
        c = _cert(adj, order)
        for ref_cert, ref in (first, best):
            if ref is not None and c == ref_cert and ref != order:
                # equal certificates: ref[k] -> order[k] is an automorphism
                img = [0] * n
                for a, b in zip(ref, order):
                    img[a] = b
                auts.append(tuple(img))
                break
        if first[1] is None:
            first[0], first[1] = c, order
        if best[0] is None or c > best[0]:
            best[0], best[1] = c, order

    def rec(cells: list[list[int]], seq: list[int]) -> None:
        if len(cells) == n:
            leaf([c[0] for c in cells])
            return
        t = next(k for k, c in enumerate(cells) if len(c) > 1)
        tried: list[int] = []
        for v in cells[t]:
            if tried:
                fix = [a for a in auts if all(a[x] == x for x in seq)]
                if fix:
                    orb = _orbits_of(n, fix)
                    if any(orb[v] == orb[w] for w in tried):
                        continue
            tried.append(v)
            child = cells[:t] + [[v], [w for w in cells[t] if w != v]] + cells[t + 1:]
            rec(_refine(adj, child), seq + [v])

    rec(_refine(adj, [list(range(n))]), [])
    return best[0], best[1]


def canonical_form(g: Graph) -> Graph:
    _, order = canonical_labeling(g)
    perm = [0] * g.n
    for i, v in enumerate(order):
        perm[v] = i
    return g.relabel(perm)


def certificate(g: Graph) -> int:
    return canonical_labeling(g)[0]


def are_isomorphic(g: Graph, h: Graph) -> bool:
    return g.n == h.n and g.num_edges == h.num_edges and certificate(g) == certificate(h)
