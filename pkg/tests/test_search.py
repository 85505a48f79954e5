from __future__ import annotations

import itertools
import json
import subprocess
from math import comb

import networkx as nx
import numpy as np
import pytest
from sympy.utilities.iterables import partitions

from conftest import random_graph
from linelab.canon import certificate
from linelab.errors import CapExceeded, GraphFormatError, Refusal
from linelab.graphs import (
    Graph, bfs_metric, complete_multipartite, diameter, is_bipartite, parse_graph6, write_graph6,
)
from linelab.hypergraphs import Hypergraph3, hyperline_family
from linelab.lines import check_dbe, line_family, relation_line_family
from linelab.metrics import MetricSpace, TernaryRelation
from linelab.search import (
    ScanReport, enumerate_connected, f_lower_bound_holds, line_family_search, multipartite_f,
    scan, scan_graphs, zwols_report,
)

CONNECTED = {1: 1, 2: 1, 3: 2, 4: 6, 5: 21, 6: 112, 7: 853, 8: 11117}


def _iso_classes_brute(n: int) -> int:
    """Connected isomorphism classes: minimum code over all relabelings,
    vectorized over every labeled graph."""
    pairs = list(itertools.combinations(range(n), 2))
    index = {p: i for i, p in enumerate(pairs)}
    codes = np.arange(1 << len(pairs), dtype=np.int64)
    best = codes.copy()
    for perm in itertools.permutations(range(n)):
        img = np.zeros_like(codes)
        for i, (u, v) in enumerate(pairs):
            a, b = sorted((perm[u], perm[v]))
            img |= ((codes >> i) & 1) << index[(a, b)]
        np.minimum(best, img, out=best)
    count = 0
    for code in np.unique(best).tolist():
        g = nx.Graph()
        g.add_nodes_from(range(n))
        g.add_edges_from(p for i, p in enumerate(pairs) if code >> i & 1)
        count += nx.is_connected(g)
    return count


@pytest.mark.parametrize("n", range(1, 7))
def test_enumeration_matches_brute_force(n):
    graphs = list(enumerate_connected(n))
    assert len(graphs) == CONNECTED[n] == _iso_classes_brute(n)
    assert len({certificate(g) for g in graphs}) == len(graphs)


def test_enumeration_small_cases():
    assert sorted(g.num_edges for g in enumerate_connected(3)) == [2, 3]
    with pytest.raises(CapExceeded):
        next(enumerate_connected(9))


@pytest.mark.parametrize("n", [7, 8])
def test_enumeration_matches_geng(n, geng):
    out = subprocess.run([geng, "-c", "-q", str(n)], capture_output=True, check=True).stdout
    ref = {certificate(parse_graph6(s)) for s in out.split()}
    ours = {certificate(g) for g in enumerate_connected(n)}
    assert len(ref) == CONNECTED[n] and ours == ref


def test_stream_source_filters_and_reports_lines():
    lines = [">>graph6<<Bw", "B?", "", "Cr", "BW"]
    assert [write_graph6(g) for g in enumerate_connected(3, lines)] == [b"Bw", b"BW"]
    with pytest.raises(GraphFormatError) as exc:
        list(enumerate_connected(3, ["Bw", "B!"]))
    assert exc.value.line == 2


def test_kernel_matches_python_engine(rng):
    for n in (4, 5, 6):
        graphs = list(enumerate_connected(n))
        assert scan_graphs(graphs, n, engine="kernel").deterministic_json() == \
            scan_graphs(graphs, n, engine="python").deterministic_json()
    mixed = [random_graph(rng, 7, rng.random()) for _ in range(300)]
    a = scan_graphs(mixed, 7, engine="kernel")
    b = scan_graphs(mixed, 7, engine="python")
    assert a.deterministic_json() == b.deterministic_json()


@pytest.mark.parametrize("n", range(2, 8))
def test_scan_no_violations(n):
    rep = scan(n)
    assert rep.instances == CONNECTED[n]
    assert rep.violations == 0 and not rep.dbe_violations and not rep.amrz_violations
    if n >= 3:
        assert rep.min_lambda_no_universal == multipartite_f(n).value
        for s in rep.minimizers:
            fam = line_family(bfs_metric(parse_graph6(s)))
            assert not fam.universal_present and fam.lam == rep.min_lambda_no_universal


def test_scan_n3_minimum():
    rep = scan(3)
    assert rep.min_lambda_no_universal == 3 and rep.minimizers == ["Bw"]


def test_parallel_scan_is_deterministic():
    for n in (6, 7):
        one = scan(n, jobs=1).deterministic_json()
        two = scan(n, jobs=2).deterministic_json()
        assert json.dumps(one, sort_keys=True) == json.dumps(two, sort_keys=True)


def test_merge_order_free(rng):
    graphs = list(enumerate_connected(6))
    parts = [scan_graphs(graphs[i::5], 6) for i in range(5)]
    ref = ScanReport(6, parts[0].checks)
    for p in parts:
        ref = ref.merge(p)
    for _ in range(5):
        rng.shuffle(parts)
        acc = ScanReport(6, parts[0].checks)
        for p in parts:
            acc = acc.merge(p)
        assert acc.deterministic_json() == ref.deterministic_json()
    assert ScanReport.from_json(ref.to_json()).deterministic_json() == ref.deterministic_json()


def test_checkpoint_resume(tmp_path):
    ck = tmp_path / "scan.json"
    full = scan(6, checkpoint=str(ck))
    state = json.loads(ck.read_text())
    assert len(state["done"]) == 8
    # drop half the shards as if interrupted, then resume
    state["done"] = {k: v for k, v in state["done"].items() if int(k) % 2 == 0}
    ck.write_text(json.dumps(state))
    resumed = scan(6, checkpoint=str(ck))
    assert resumed.deterministic_json() == full.deterministic_json()
    assert resumed.instances == CONNECTED[6]
    with pytest.raises(ValueError):
        scan(5, checkpoint=str(ck))


def test_file_source_matches_internal(tmp_path):
    path = tmp_path / "g7.g6"
    path.write_bytes(b"".join(write_graph6(g) + b"\n" for g in enumerate_connected(7)))
    a = scan(7, "file", str(path)).deterministic_json()
    b = scan(7).deterministic_json()
    assert a == b


def test_bipartite_and_diameter_two_streams():
    for n in range(2, 8):
        graphs = list(enumerate_connected(n))
        bip = [g for g in graphs if is_bipartite(g)]
        d2 = [g for g in graphs if diameter(g) <= 2]
        assert scan_graphs(bip, n, ("dbe",)).dbe_violation_count == 0
        assert scan_graphs(d2, n, ("dbe",)).dbe_violation_count == 0
        assert all(check_dbe(bfs_metric(g)).holds for g in bip + d2)
        assert scan_graphs(graphs, n).diameter_le2 == len(d2)


def test_geometric_dominant_small():
    found = {s for n in range(4, 8) for s in scan(n).nontrivial_geometric_dominant}
    assert found == {"EqNw", "FqLfw"}
    for s in found:
        assert diameter(parse_graph6(s)) == 2


# --- multipartite optimum -----------------------------------------------------

def _f_oracle(n: int) -> tuple[int, set[tuple[int, ...]]]:
    best, arg = None, set()
    for p in partitions(n):
        parts = [s for s, mult in p.items() for _ in range(mult)]
        if len(parts) < 3 or 2 in parts:
            continue
        val = comb(len(parts), 2) + sum(comb(s, 2) for s in parts)
        key = tuple(sorted(parts, reverse=True))
        if best is None or val < best:
            best, arg = val, {key}
        elif val == best:
            arg.add(key)
    return best, arg


@pytest.mark.parametrize("n", range(3, 31))
def test_f_matches_partition_oracle(n):
    opt = multipartite_f(n)
    value, parts = _f_oracle(n)
    assert opt.value == value and set(opt.partitions) == parts


def test_f_examples_and_bounds():
    opt = multipartite_f(10)
    assert opt.value == 15 and set(opt.partitions) == {(4, 3, 3), (3, 3, 3, 1)}
    for n in range(3, 201):
        f = multipartite_f(n).value
        assert f >= n and f_lower_bound_holds(n)
    with pytest.raises(ValueError):
        multipartite_f(2)


def test_f_is_realized_by_its_optima():
    for n in range(3, 10):
        opt = multipartite_f(n)
        for parts in opt.partitions:
            fam = line_family(bfs_metric(complete_multipartite(parts)))
            assert fam.lam == opt.value and not fam.universal_present


def test_zwols_small():
    rows = zwols_report(7)
    assert [r.n for r in rows] == [3, 4, 5, 6, 7]
    for r in rows:
        assert r.min_lambda_no_universal == r.f and r.all_minimizers_multipartite
    assert rows[0].minimizers == ("Bw",)


def test_zwols_file_source(tmp_path):
    for n in (4, 5):
        (tmp_path / f"g{n}.g6").write_bytes(
            b"".join(write_graph6(g) + b"\n" for g in enumerate_connected(n)))
    rows = zwols_report(5, "file", str(tmp_path / "g{n}.g6"), n_min=4)
    assert [r.min_lambda_no_universal for r in rows] == [6, 6]
    with pytest.raises(FileNotFoundError):
        zwols_report(6, "file", str(tmp_path / "g{n}.g6"), n_min=6)


# --- line-family search ---------------------------------------------------------

STAR_LINES = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [0, 1, 2, 3]]


def test_star_lines_graph_level():
    g = line_family_search(4, STAR_LINES, "graph")
    assert isinstance(g, Graph)
    assert line_family(bfs_metric(g)).member_sets() == {frozenset(s) for s in STAR_LINES}
    assert sorted(g.degree(v) for v in range(4)) == [1, 1, 1, 3]


def test_pair_lines_give_complete_graph():
    for n in (3, 4, 5):
        g = line_family_search(n, itertools.combinations(range(n), 2))
        assert g.num_edges == comb(n, 2)


@pytest.mark.parametrize("level", ["graph", "hypergraph", "betweenness", "metric"])
def test_disjoint_lines_refused(level):
    with pytest.raises(Refusal):
        line_family_search(6, [[0, 1, 2], [3, 4, 5]], level)


def test_star_lines_other_levels():
    target = {frozenset(s) for s in STAR_LINES}
    h = line_family_search(4, STAR_LINES, "hypergraph")
    assert isinstance(h, Hypergraph3) and hyperline_family(h).member_sets() == target
    r = line_family_search(4, STAR_LINES, "betweenness")
    assert isinstance(r, TernaryRelation) and relation_line_family(r).member_sets() == target
    m = line_family_search(4, STAR_LINES, "metric")
    assert isinstance(m, MetricSpace) and line_family(m).member_sets() == target


def test_line_family_search_errors():
    with pytest.raises(CapExceeded):
        line_family_search(8, [list(range(8))])
    with pytest.raises(ValueError):
        line_family_search(4, [[0]], "graph")
    with pytest.raises(ValueError):
        line_family_search(4, STAR_LINES, "nonsense")
