"""Exhaustive and streamed scans of small graphs, the complete multipartite
optimum f(n), the minimum-lines report, and brute-force realizability of a
prescribed line family.

Work is cut into shards.  Each shard produces a partial :class:`ScanReport`;
partials merge associatively and commutatively, so the final report does not
depend on the worker count or on the order shards finish in.
"""

from __future__ import annotations

import itertools
import json
import os
import shutil
import subprocess
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import lru_cache
from math import comb
from typing import Iterable, Iterator, Sequence

import numpy as np

from .canon import certificate
from .errors import CapExceeded, GraphFormatError, Refusal
from .graphs import Graph, bfs_metric, multipartite_parts, parse_graph6, write_graph6
from .hypergraphs import Hypergraph3, is_metric, is_pseudometric, recognize_line_map
from .kernel import adjacency_array, decode_graph6, graph_stats, record_length
from .lines import LineFamily, line_family, mask_of, members_of

LIST_CAP = 1000
CHECKS = ("dbe", "amrz", "min_lines", "geometric_dominant")
GENG_SHARDS = 16
FILE_SHARD_BYTES = 8 << 20


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _connected_layer(n: int) -> tuple[Graph, ...]:
    if n == 1:
        return (Graph(1, (0,)),)
    seen: dict[int, Graph] = {}
    for g in _connected_layer(n - 1):
        for s in range(1, 1 << (n - 1)):
            adj = list(g.adj)
            for v in range(n - 1):
                if s >> v & 1:
                    adj[v] |= 1 << (n - 1)
            h = Graph(n, tuple(adj) + (s,))
            seen.setdefault(certificate(h), h)
    return tuple(seen[c] for c in sorted(seen))


INTERNAL_MAX = 8


def enumerate_connected(n: int, source: str | Iterable = "internal") -> Iterator[Graph]:
    """Connected graphs on n vertices.

    ``source="internal"``: one graph per isomorphism class (n <= 8), built by
    adding a vertex with every nonempty neighbourhood to each class of order
    n-1 and keeping one graph per canonical certificate.  Otherwise
    ``source`` is an iterable of graph6 lines; disconnected graphs and graphs
    of other orders are skipped, duplicates are the producer's business.
    """
    if isinstance(source, str) and source == "internal":
        if n > INTERNAL_MAX:
            raise CapExceeded("n", n, INTERNAL_MAX)
        if n < 1:
            return
        yield from _connected_layer(n)
        return
    from .graphs import is_connected

    for lineno, raw in enumerate(source, 1):
        text = raw.decode("ascii", "replace") if isinstance(raw, bytes) else raw
        text = text.strip()
        if text.startswith(">>graph6<<"):
            text = text[10:]
        if not text:
            continue
        try:
            g = parse_graph6(text)
        except GraphFormatError as exc:
            raise GraphFormatError(exc.args[0], exc.offset, lineno) from None
        if g.n == n and is_connected(g):
            yield g


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

def _merge_capped(a: Sequence[str], b: Sequence[str]) -> list[str]:
    return sorted(set(a) | set(b))[:LIST_CAP]


@dataclass
class ScanReport:
    n: int
    checks: tuple[str, ...] = CHECKS
    instances: int = 0
    skipped: int = 0  # disconnected records in a stream
    dbe_violations: list[str] = field(default_factory=list)
    dbe_violation_count: int = 0
    amrz_violations: list[str] = field(default_factory=list)
    amrz_violation_count: int = 0
    amrz_metric_violations: list[str] = field(default_factory=list)
    amrz_metric_violation_count: int = 0
    diameter_le2: int = 0
    min_lambda_no_universal: int | None = None
    minimizers: list[str] = field(default_factory=list)
    minimizer_count: int = 0
    geometric_dominant: int = 0
    nontrivial_geometric_dominant: list[str] = field(default_factory=list)
    nontrivial_geometric_dominant_count: int = 0
    runtime: float = 0.0

    @property
    def violations(self) -> int:
        return self.dbe_violation_count + self.amrz_violation_count + self.amrz_metric_violation_count

    @property
    def minimizers_overflow(self) -> int:
        return self.minimizer_count - len(self.minimizers)

    def merge(self, other: "ScanReport") -> "ScanReport":
        if other.n != self.n or other.checks != self.checks:
            raise ValueError("cannot merge reports of different scans")
        lo_a, lo_b = self.min_lambda_no_universal, other.min_lambda_no_universal
        if lo_a is None or (lo_b is not None and lo_b < lo_a):
            lo, mins, mc = lo_b, other.minimizers, other.minimizer_count
        elif lo_b is None or lo_a < lo_b:
            lo, mins, mc = lo_a, self.minimizers, self.minimizer_count
        else:
            lo = lo_a
            mins = _merge_capped(self.minimizers, other.minimizers)
            mc = self.minimizer_count + other.minimizer_count
        return ScanReport(
            n=self.n,
            checks=self.checks,
            instances=self.instances + other.instances,
            skipped=self.skipped + other.skipped,
            dbe_violations=_merge_capped(self.dbe_violations, other.dbe_violations),
            dbe_violation_count=self.dbe_violation_count + other.dbe_violation_count,
            amrz_violations=_merge_capped(self.amrz_violations, other.amrz_violations),
            amrz_violation_count=self.amrz_violation_count + other.amrz_violation_count,
            amrz_metric_violations=_merge_capped(self.amrz_metric_violations, other.amrz_metric_violations),
            amrz_metric_violation_count=self.amrz_metric_violation_count + other.amrz_metric_violation_count,
            diameter_le2=self.diameter_le2 + other.diameter_le2,
            min_lambda_no_universal=lo,
            minimizers=list(mins),
            minimizer_count=mc,
            geometric_dominant=self.geometric_dominant + other.geometric_dominant,
            nontrivial_geometric_dominant=_merge_capped(self.nontrivial_geometric_dominant,
                                                        other.nontrivial_geometric_dominant),
            nontrivial_geometric_dominant_count=(self.nontrivial_geometric_dominant_count
                                                 + other.nontrivial_geometric_dominant_count),
            runtime=self.runtime + other.runtime,
        )

    def to_json(self) -> dict:
        out = {
            "n": self.n,
            "checks": list(self.checks),
            "instances_scanned": self.instances,
            "skipped_disconnected": self.skipped,
            "dbe_violations": self.dbe_violations,
            "dbe_violation_count": self.dbe_violation_count,
            "amrz_violations": self.amrz_violations,
            "amrz_violation_count": self.amrz_violation_count,
            "amrz_metric_violations": self.amrz_metric_violations,
            "amrz_metric_violation_count": self.amrz_metric_violation_count,
            "diameter_le2": self.diameter_le2,
            "min_lambda_no_universal": self.min_lambda_no_universal,
            "minimizers": self.minimizers,
            "minimizer_count": self.minimizer_count,
            "minimizers_overflow": self.minimizers_overflow,
            "geometric_dominant": self.geometric_dominant,
            "nontrivial_geometric_dominant": self.nontrivial_geometric_dominant,
            "nontrivial_geometric_dominant_count": self.nontrivial_geometric_dominant_count,
            "runtime": round(self.runtime, 3),
        }
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "ScanReport":
        return cls(
            n=obj["n"], checks=tuple(obj["checks"]), instances=obj["instances_scanned"],
            skipped=obj["skipped_disconnected"],
            dbe_violations=list(obj["dbe_violations"]), dbe_violation_count=obj["dbe_violation_count"],
            amrz_violations=list(obj["amrz_violations"]), amrz_violation_count=obj["amrz_violation_count"],
            amrz_metric_violations=list(obj["amrz_metric_violations"]),
            amrz_metric_violation_count=obj["amrz_metric_violation_count"],
            diameter_le2=obj["diameter_le2"],
            min_lambda_no_universal=obj["min_lambda_no_universal"],
            minimizers=list(obj["minimizers"]), minimizer_count=obj["minimizer_count"],
            geometric_dominant=obj["geometric_dominant"],
            nontrivial_geometric_dominant=list(obj["nontrivial_geometric_dominant"]),
            nontrivial_geometric_dominant_count=obj["nontrivial_geometric_dominant_count"],
            runtime=obj["runtime"],
        )

    def deterministic_json(self) -> dict:
        """Everything except the wall-clock time."""
        out = self.to_json()
        del out["runtime"]
        return out

    CSV_FIELDS = ("n", "instances_scanned", "dbe_violation_count", "amrz_violation_count",
                  "amrz_metric_violation_count", "min_lambda_no_universal", "minimizer_count",
                  "geometric_dominant")

    def csv_row(self) -> dict:
        js = self.to_json()
        return {k: js[k] for k in self.CSV_FIELDS}


def _is_trivial_dominant(g: Graph) -> bool:
    """Complete graphs, paths and C_4."""
    degs = sorted(g.degree(v) for v in range(g.n))
    m = g.num_edges
    if m == comb(g.n, 2):
        return True
    if m == g.n - 1 and degs[-1] <= 2:
        return True
    return g.n == 4 and degs == [2, 2, 2, 2]


def scan_graphs(graphs: Sequence[Graph], n: int, checks: Sequence[str] = CHECKS,
                labels: Sequence[str] | None = None, engine: str = "kernel") -> ScanReport:
    """Scan a batch of n-vertex graphs.  ``labels`` are the graph6 strings to
    report (defaults to re-encoding each graph)."""
    start = time.perf_counter()
    checks = tuple(c for c in CHECKS if c in checks)
    rep = ScanReport(n, checks)
    if not graphs:
        return rep
    if engine == "kernel":
        lam, mu, univ, diam, dom = graph_stats(adjacency_array(graphs), n, "geometric_dominant" in checks)
    elif engine == "python":
        from .lines import is_geometric_dominant
        from .graphs import diameter, is_connected

        k = len(graphs)
        lam, mu = np.zeros(k, np.int32), np.zeros(k, np.int32)
        univ, dom = np.zeros(k, bool), np.zeros(k, bool)
        diam = np.full(k, -1, np.int32)
        for i, g in enumerate(graphs):
            if not is_connected(g):
                continue
            m = bfs_metric(g) if n > 1 else None
            if m is None:
                continue
            fam = line_family(m)
            lam[i], mu[i], univ[i] = fam.lam, fam.mu, fam.universal_present
            diam[i] = diameter(g)
            if "geometric_dominant" in checks:
                dom[i] = is_geometric_dominant(m)
    else:
        raise ValueError(f"unknown engine {engine!r}")
    return _fold(rep, n, lam, mu, univ, diam, dom, graphs, labels, start)


def _fold(rep, n, lam, mu, univ, diam, dom, graphs, labels, start) -> ScanReport:
    def label(i: int) -> str:
        if labels is not None:
            return labels[i]
        return write_graph6(graphs[i]).decode()

    conn = diam >= 0
    rep.instances = int(conn.sum())
    rep.skipped = int((~conn).sum())
    if n < 2:
        rep.runtime = time.perf_counter() - start
        return rep

    def record(mask, names_attr, count_attr):
        idx = np.flatnonzero(mask)
        setattr(rep, count_attr, int(len(idx)))
        setattr(rep, names_attr, sorted(label(i) for i in idx)[:LIST_CAP])

    if "dbe" in rep.checks:
        record(conn & ~univ & (lam < n), "dbe_violations", "dbe_violation_count")
    if "amrz" in rep.checks:
        record(conn & (lam + mu < n), "amrz_violations", "amrz_violation_count")
        small = conn & (diam <= 2)
        rep.diameter_le2 = int(small.sum())
        if n >= 3:
            record(small & (lam + np.maximum(mu - 1, 0) < n), "amrz_metric_violations",
                   "amrz_metric_violation_count")
    if "min_lines" in rep.checks:
        pool = conn & ~univ
        if pool.any():
            lo = int(lam[pool].min())
            rep.min_lambda_no_universal = lo
            idx = np.flatnonzero(pool & (lam == lo))
            rep.minimizer_count = len(idx)
            rep.minimizers = sorted(label(i) for i in idx)[:LIST_CAP]
    if "geometric_dominant" in rep.checks:
        rep.geometric_dominant = int((conn & dom).sum())
        idx = [i for i in np.flatnonzero(conn & dom)]
        graphs_nt = []
        for i in idx:
            g = graphs[i] if graphs is not None else parse_graph6(label(i))
            if not _is_trivial_dominant(g):
                graphs_nt.append(label(i))
        rep.nontrivial_geometric_dominant_count = len(graphs_nt)
        rep.nontrivial_geometric_dominant = sorted(graphs_nt)[:LIST_CAP]
    rep.runtime = time.perf_counter() - start
    return rep


def scan_records(lines: Sequence[bytes], n: int, checks: Sequence[str] = CHECKS,
                 first_line: int = 1) -> ScanReport:
    """Scan raw graph6 lines (no newline).  Fast path when every record has
    the fixed length for n; otherwise each line goes through the parser."""
    start = time.perf_counter()
    checks = tuple(c for c in CHECKS if c in checks)
    rep = ScanReport(n, checks)
    lines = [ln.rstrip(b"\r") for ln in lines if ln.strip()]
    if lines and lines[0].startswith(b">>graph6<<"):
        lines[0] = lines[0][10:]
        if not lines[0]:
            lines = lines[1:]
    if not lines:
        return rep
    L = record_length(n)
    if all(len(ln) == L for ln in lines):
        recs = np.frombuffer(b"".join(lines), dtype=np.uint8).reshape(len(lines), L)
        adj, ok = decode_graph6(recs, n)
        bad = np.flatnonzero(~ok)
        if len(bad):
            i = int(bad[0])
            parse_graph6(lines[i].decode("ascii", "replace"), line=first_line + i)
            raise GraphFormatError("record rejected by the batch decoder", line=first_line + i)
    else:
        graphs = []
        for i, ln in enumerate(lines):
            g = parse_graph6(ln.decode("ascii", "replace"), line=first_line + i)
            graphs.append(g)
        keep = [i for i, g in enumerate(graphs) if g.n == n]
        rep.skipped += len(graphs) - len(keep)
        lines = [lines[i] for i in keep]
        if not keep:
            return rep
        adj = adjacency_array([graphs[i] for i in keep])
    lam, mu, univ, diam, dom = graph_stats(adj, n, "geometric_dominant" in checks)
    labels = [ln.decode() for ln in lines]
    skipped = rep.skipped
    graphs_view = _LazyGraphs(labels)
    out = _fold(rep, n, lam, mu, univ, diam, dom, graphs_view, labels, start)
    out.skipped += skipped
    return out


class _LazyGraphs:
    def __init__(self, labels):
        self.labels = labels

    def __getitem__(self, i):
        return parse_graph6(self.labels[i])

    def __len__(self):
        return len(self.labels)


# ---------------------------------------------------------------------------
# sharded drivers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Shard:
    source: str  # "internal" | "geng" | "file"
    n: int
    index: int
    total: int
    path: str | None = None


def plan_shards(source: str, n: int, path: str | None = None, internal_shards: int = 8) -> list[Shard]:
    if source == "internal":
        return [Shard("internal", n, i, internal_shards) for i in range(internal_shards)]
    if source == "geng":
        return [Shard("geng", n, i, GENG_SHARDS) for i in range(GENG_SHARDS)]
    if source == "file":
        size = os.path.getsize(path)
        total = max(1, -(-size // FILE_SHARD_BYTES))
        return [Shard("file", n, i, total, path) for i in range(total)]
    raise ValueError(f"unknown source {source!r}")


def geng_path() -> str:
    exe = shutil.which("geng")
    if exe is None:
        raise FileNotFoundError("geng (from nauty) not found on PATH; see README for how to build it")
    return exe


def _read_file_shard(shard: Shard) -> tuple[list[bytes], int]:
    size = os.path.getsize(shard.path)
    lo = shard.index * size // shard.total
    hi = (shard.index + 1) * size // shard.total
    with open(shard.path, "rb") as fh:
        if lo > 0:
            fh.seek(lo - 1)
            fh.readline()  # the record straddling lo belongs to the previous shard
        pos = fh.tell()
        if pos >= hi and lo > 0:
            return [], 0
        data = fh.read(max(hi - pos, 0))
        if data and not data.endswith(b"\n"):
            data += fh.readline()
        fh.seek(0)
        first_line = 1 + fh.read(pos).count(b"\n") if pos else 1
    return data.split(b"\n"), first_line


def run_shard(shard: Shard, checks: Sequence[str] = CHECKS) -> ScanReport:
    if shard.source == "internal":
        graphs = list(enumerate_connected(shard.n))[shard.index::shard.total]
        return scan_graphs(graphs, shard.n, checks)
    if shard.source == "geng":
        args = [geng_path(), "-c", "-q", str(shard.n), f"{shard.index}/{shard.total}"]
        out = subprocess.run(args, capture_output=True, check=True).stdout
        return scan_records(out.split(b"\n"), shard.n, checks)
    lines, first = _read_file_shard(shard)
    return scan_records(lines, shard.n, checks, first_line=first)


def _atomic_write(path: str, obj) -> None:
    tmp = f"{path}.tmp"
    with open(tmp, "w") as fh:
        json.dump(obj, fh, indent=1)
    os.replace(tmp, path)


def scan(n: int, source: str = "internal", path: str | None = None, checks: Sequence[str] = CHECKS,
         jobs: int = 1, checkpoint: str | None = None) -> ScanReport:
    """Scan every connected graph on n vertices from one source.

    With ``checkpoint`` the per-shard partial reports are stored as they
    finish and reused on the next call with the same parameters.
    """
    checks = tuple(c for c in CHECKS if c in checks)
    shards = plan_shards(source, n, path)
    key = {"n": n, "source": source, "path": path, "checks": list(checks), "shards": len(shards)}
    done: dict[int, ScanReport] = {}
    if checkpoint and os.path.exists(checkpoint):
        with open(checkpoint) as fh:
            state = json.load(fh)
        if state.get("key") != key:
            raise ValueError(f"checkpoint {checkpoint} belongs to a different scan")
        done = {int(k): ScanReport.from_json(v) for k, v in state["done"].items()}

    def save() -> None:
        if checkpoint:
            _atomic_write(checkpoint, {"key": key, "done": {str(k): r.to_json() for k, r in sorted(done.items())}})

    todo = [s for s in shards if s.index not in done]
    if jobs <= 1:
        for s in todo:
            done[s.index] = run_shard(s, checks)
            save()
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futs = {s.index: pool.submit(run_shard, s, checks) for s in todo}
            for idx, fut in futs.items():
                done[idx] = fut.result()
                save()
    total = ScanReport(n, checks)
    for idx in sorted(done):
        total = total.merge(done[idx])
    return total


# ---------------------------------------------------------------------------
# complete multipartite optimum
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MultipartiteOptimum:
    n: int
    value: int
    partitions: tuple[tuple[int, ...], ...]

    def to_json(self) -> dict:
        return {"n": self.n, "f": self.value, "partitions": [list(p) for p in self.partitions]}


@lru_cache(maxsize=8)
def _part_table(nmax: int) -> np.ndarray:
    """g[k, m]: least sum of C(s,2) over k parts (sizes != 2) summing to m."""
    big = np.iinfo(np.int64).max // 4
    g = np.full((nmax + 1, nmax + 1), big, dtype=np.int64)
    g[0, 0] = 0
    for k in range(1, nmax + 1):
        for s in range(1, nmax + 1):
            if s == 2:
                continue
            cand = g[k - 1, : nmax + 1 - s] + s * (s - 1) // 2
            g[k, s:] = np.minimum(g[k, s:], cand)
    return g


def multipartite_f(n: int) -> MultipartiteOptimum:
    """Fewest lines in a complete multipartite graph on n vertices with no
    universal line: min C(k,2) + sum C(n_i,2) over k >= 3 parts, none of size 2."""
    if n < 3:
        raise ValueError("needs n >= 3")
    g = _part_table(max(n, 200))
    best = min(comb(k, 2) + int(g[k, n]) for k in range(3, n + 1))
    parts: list[tuple[int, ...]] = []

    def rec(k: int, left: int, cap: int, acc: list[int], cost: int) -> None:
        if k == 0:
            if left == 0 and cost == target:
                parts.append(tuple(acc))
            return
        for s in range(min(cap, left - (k - 1)), 0, -1):
            if s == 2:
                continue
            c = cost + s * (s - 1) // 2
            if c + int(g[k - 1, left - s]) > target:
                continue
            acc.append(s)
            rec(k - 1, left - s, s, acc, c)
            acc.pop()

    for k in range(3, n + 1):
        if comb(k, 2) + int(g[k, n]) == best:
            target = best - comb(k, 2)
            rec(k, n, n, [], 0)
    return MultipartiteOptimum(n, best, tuple(sorted(parts)))


def f_lower_bound_holds(n: int) -> bool:
    """f(n) >= (27/32)^(1/3) n^(4/3) - n, compared exactly as
    32 (f+n)^3 >= 27 n^4."""
    f = multipartite_f(n).value
    return 32 * (f + n) ** 3 >= 27 * n ** 4


# ---------------------------------------------------------------------------
# minimum-lines report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ZwolsRow:
    n: int
    min_lambda_no_universal: int | None
    minimizers: tuple[str, ...]
    f: int
    exceptions: tuple[str, ...]  # minimizers that are not complete multipartite
    instances: int

    @property
    def all_minimizers_multipartite(self) -> bool:
        return not self.exceptions

    def to_json(self) -> dict:
        return {"n": self.n, "min_lambda_no_universal": self.min_lambda_no_universal,
                "minimizers": list(self.minimizers), "f": self.f,
                "all_minimizers_multipartite": self.all_minimizers_multipartite,
                "exceptions": list(self.exceptions), "instances": self.instances}

    def csv_row(self) -> dict:
        return {"n": self.n, "min_lambda_no_universal": self.min_lambda_no_universal,
                "f": self.f, "minimizers": len(self.minimizers),
                "all_minimizers_multipartite": self.all_minimizers_multipartite,
                "instances": self.instances}


def zwols_row(n: int, report: ScanReport) -> ZwolsRow:
    exc = tuple(s for s in report.minimizers if multipartite_parts(parse_graph6(s)) is None)
    return ZwolsRow(n, report.min_lambda_no_universal, tuple(report.minimizers),
                    multipartite_f(n).value, exc, report.instances)


def zwols_report(n_max: int, source: str = "internal", pattern: str | None = None,
                 n_min: int = 3, jobs: int = 1) -> list[ZwolsRow]:
    """For each n: least number of lines over connected graphs with no
    universal line, its minimizers, and f(n).  ``source="internal"`` switches
    to geng above the internal cap; ``source="file"`` reads
    ``pattern.format(n=n)``."""
    rows = []
    for n in range(n_min, n_max + 1):
        if source == "file":
            path = pattern.format(n=n)
            if not os.path.exists(path):
                raise FileNotFoundError(f"no graph6 file for n={n}: {path}")
            rep = scan(n, "file", path, ("min_lines",), jobs)
        elif source == "geng" or n > INTERNAL_MAX:
            rep = scan(n, "geng", None, ("min_lines",), jobs)
        else:
            rep = scan(n, "internal", None, ("min_lines",), jobs)
        rows.append(zwols_row(n, rep))
    return rows


# ---------------------------------------------------------------------------
# line-family realizability
# ---------------------------------------------------------------------------

LEVEL_CAPS = {"graph": 7, "hypergraph": 6, "betweenness": 6, "metric": 6}


def _pairs_covered(n: int, fam: list[int]) -> tuple[int, int] | None:
    for x, y in itertools.combinations(range(n), 2):
        b = 1 << x | 1 << y
        if not any(mk & b == b for mk in fam):
            return (x, y)
    return None


def _line_maps(n: int, fam: list[int]) -> Iterator[dict[tuple[int, int], int]]:
    """Every assignment pair -> line of ``fam`` through that pair that obeys
    the three-way symmetry w in f(uv) <=> v in f(uw) <=> u in f(vw) and uses
    every line."""
    pairs = [(i, j) for j in range(n) for i in range(j)]
    f: dict[tuple[int, int], int] = {}
    full_use = set(fam)

    def consistent(i: int, j: int) -> bool:
        for a in range(i):
            x = f[(a, i)] >> j & 1
            y = f[(a, j)] >> i & 1
            z = f[(i, j)] >> a & 1
            if not x == y == z:
                return False
        return True

    def rec(k: int):
        if k == len(pairs):
            if set(f.values()) == full_use:
                yield dict(f)
            return
        i, j = pairs[k]
        b = 1 << i | 1 << j
        for mk in fam:
            if mk & b != b:
                continue
            f[(i, j)] = mk
            if consistent(i, j):
                yield from rec(k + 1)
        f.pop((i, j), None)

    yield from rec(0)


def line_family_search(n: int, lines: Iterable[Iterable[int]], level: str = "graph"):
    """Some object of the given level whose family of distinct lines is
    exactly ``lines``: a Graph, a MetricSpace, a pseudometric TernaryRelation
    or a Hypergraph3.  Raises :class:`Refusal` when none exists."""
    if level not in LEVEL_CAPS:
        raise ValueError(f"unknown level {level!r}")
    if n > LEVEL_CAPS[level]:
        raise CapExceeded("n", n, LEVEL_CAPS[level])
    fam = sorted({mask_of(ln) for ln in lines})
    if any(mk >> n for mk in fam) or any(mk.bit_count() < 2 for mk in fam):
        raise ValueError("every line needs at least two vertices in range")
    gap = _pairs_covered(n, fam)
    if gap is not None:
        raise Refusal("pair outside every line", gap, f"no prescribed line contains the pair {gap}")
    target = set(fam)
    if level == "graph":
        sizes = sorted(mk.bit_count() for mk in fam)
        for g in enumerate_connected(n):
            lf = line_family(bfs_metric(g)) if n > 1 else None
            if lf is None or lf.lam != len(fam):
                continue
            masks = [mask_of(ln.members) for ln in lf.lines]
            if sorted(mk.bit_count() for mk in masks) != sizes:
                continue
            for perm in itertools.permutations(range(n)):
                moved = {mask_of(perm[v] for v in members_of(mk)) for mk in masks}
                if moved == target:
                    return g.relabel(list(perm))
        raise Refusal("no graph", None, "no connected graph has exactly these lines")
    for fmap in _line_maps(n, fam):
        h = recognize_line_map({p: members_of(mk) for p, mk in fmap.items()}, n)
        if level == "hypergraph":
            return h
        try:
            if level == "betweenness":
                return is_pseudometric(h)
            return is_metric(h)
        except CapExceeded:
            raise
        except Refusal:
            continue
    raise Refusal(f"no {level}", None, f"no {level} realizes exactly these lines")


def family_to_lines(fam: LineFamily) -> list[list[int]]:
    return [sorted(ln.members) for ln in fam.lines]
