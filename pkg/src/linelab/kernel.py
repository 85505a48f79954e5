"""Compiled batch kernels for the conjecture scans.

Graphs travel as ``uint32`` adjacency rows, one row of length n per graph.
The pure-Python ``lines`` module computes the same quantities and is used to
cross-check these kernels in the tests.
"""

from __future__ import annotations

import numpy as np
from numba import njit


def record_length(n: int) -> int:
    """Bytes in a graph6 record for n <= 62, without the newline."""
    return 1 + (n * (n - 1) // 2 + 5) // 6


@njit(cache=True)
def decode_graph6(recs, n):
    """Rows of graph6 bytes -> (adjacency rows, ok flags)."""
    m = recs.shape[0]
    adj = np.zeros((m, n), dtype=np.uint32)
    ok = np.ones(m, dtype=np.bool_)
    nbits = n * (n - 1) // 2
    L = recs.shape[1]
    for g in range(m):
        if recs[g, 0] != n + 63:
            ok[g] = False
            continue
        for c in range(1, L):
            ch = recs[g, c]
            if ch < 63 or ch > 126:
                ok[g] = False
        if not ok[g]:
            continue
        k = 0
        for j in range(1, n):
            for i in range(j):
                byte = recs[g, 1 + k // 6] - 63
                if (byte >> (5 - k % 6)) & 1:
                    adj[g, i] |= np.uint32(1) << np.uint32(j)
                    adj[g, j] |= np.uint32(1) << np.uint32(i)
                k += 1
        # padding bits of the last byte must be zero
        while k < (L - 1) * 6:
            byte = recs[g, 1 + k // 6] - 63
            if (byte >> (5 - k % 6)) & 1:
                ok[g] = False
            k += 1
    return adj, ok


@njit(cache=True)
def _line_masks(row, n, dist, masks):
    """BFS distances then all pair lines; returns diameter, or -1 if disconnected."""
    full = (1 << n) - 1
    diam = 0
    for s in range(n):
        for v in range(n):
            dist[s, v] = -1
        dist[s, s] = 0
        seen = 1 << s
        frontier = 1 << s
        d = 0
        while frontier:
            d += 1
            nxt = 0
            f = frontier
            while f:
                v = 0
                low = f & -f
                while (low >> v) != 1:
                    v += 1
                nxt |= int(row[v])
                f ^= low
            nxt &= ~seen
            f = nxt
            while f:
                low = f & -f
                v = 0
                while (low >> v) != 1:
                    v += 1
                dist[s, v] = d
                f ^= low
            seen |= nxt
            frontier = nxt
        if seen != full:
            return -1
        if d - 1 > diam:
            diam = d - 1
    k = 0
    for x in range(n):
        for y in range(x + 1, n):
            c = dist[x, y]
            mk = (1 << x) | (1 << y)
            for z in range(n):
                if z == x or z == y:
                    continue
                a = dist[x, z]
                b = dist[y, z]
                if c + b == a or c + a == b or a + b == c:
                    mk |= 1 << z
            masks[k] = mk
            k += 1
    return diam


@njit(cache=True)
def graph_stats(adj, n, want_dominance):
    """Per graph: lambda, mu, universal flag, diameter (-1 when disconnected)
    and, if asked, whether no line contains another."""
    m = adj.shape[0]
    P = n * (n - 1) // 2
    lam = np.zeros(m, dtype=np.int32)
    mu = np.zeros(m, dtype=np.int32)
    univ = np.zeros(m, dtype=np.bool_)
    diam = np.zeros(m, dtype=np.int32)
    dom = np.zeros(m, dtype=np.bool_)
    dist = np.zeros((n, n), dtype=np.int64)
    masks = np.zeros(P, dtype=np.int64)
    full = (1 << n) - 1
    for g in range(m):
        dm = _line_masks(adj[g], n, dist, masks)
        diam[g] = dm
        if dm < 0:
            continue
        s = np.sort(masks)
        distinct = 1
        cnt_full = 0
        for k in range(P):
            if k > 0 and s[k] != s[k - 1]:
                distinct += 1
            if s[k] == full:
                cnt_full += 1
        lam[g] = distinct
        mu[g] = cnt_full
        univ[g] = cnt_full > 0
        if want_dominance:
            good = True
            for a in range(P):
                if a > 0 and s[a] == s[a - 1]:
                    continue
                for b in range(a + 1, P):
                    if s[b] != s[a] and (s[a] & s[b]) == s[a]:
                        good = False
                        break
                if not good:
                    break
            dom[g] = good
    return lam, mu, univ, diam, dom


def adjacency_array(graphs) -> np.ndarray:
    graphs = list(graphs)
    if not graphs:
        return np.zeros((0, 0), dtype=np.uint32)
    return np.array([g.adj for g in graphs], dtype=np.uint32).reshape(len(graphs), graphs[0].n)
