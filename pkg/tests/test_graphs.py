from __future__ import annotations

import itertools
import random

import networkx as nx
import pytest

from conftest import random_connected, random_graph
from linelab.canon import are_isomorphic
from linelab.errors import GraphFormatError
from linelab.graphs import (
    DOMINO, HOUSE, Graph, bfs_distances, bfs_metric, bridges, chen_cycles, classify, complete,
    complete_multipartite, cycle, diameter, find_hole, find_induced, generate, glue, hhd_example,
    is_bipartite, is_bisplit, is_chordal, is_connected, is_hhd_free, multipartite_parts,
    parse_graph6, path, petersen, petersen_complement, q14_example, read_graph6, split_adjacent_twins,
    split_nonadjacent_twins, star, substitute, transform, wheel, write_graph6,
)
from linelab.lines import line_family
from linelab.metrics import validate_metric
from linelab.search import enumerate_connected


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


# --- graph6 ---------------------------------------------------------------

def test_graph6_known_records():
    assert parse_graph6("A_") == complete(2)
    assert parse_graph6("Bg") == path(3)
    assert write_graph6(complete(2)) == b"A_"
    assert write_graph6(Graph(1, (0,))) == b"@"
    assert parse_graph6(b">>graph6<<A_") == complete(2)


def test_graph6_matches_networkx(rng):
    for _ in range(200):
        g = random_graph(rng, rng.randint(1, 20))
        ref = nx.to_graph6_bytes(to_nx(g), header=False).strip()
        assert write_graph6(g) == ref
        assert parse_graph6(ref) == g


def test_graph6_roundtrip_all_labelled_up_to_6():
    for n in range(1, 7):
        pairs = list(itertools.combinations(range(n), 2))
        for bits in range(1 << len(pairs)):
            g = Graph.from_edges(n, [p for k, p in enumerate(pairs) if bits >> k & 1])
            rec = write_graph6(g)
            assert parse_graph6(rec) == g
            assert write_graph6(parse_graph6(rec)) == rec


@pytest.mark.parametrize("n", [7, 8])
def test_graph6_roundtrip_classes(n):
    rng = random.Random(n)
    for g in enumerate_connected(n):
        perm = list(range(n))
        rng.shuffle(perm)
        for h in (g, g.relabel(perm), g.complement()):
            assert parse_graph6(write_graph6(h)) == h


def test_graph6_roundtrip_random(rng):
    for _ in range(1000):
        g = random_graph(rng, rng.randint(1, 70), rng.random())
        assert parse_graph6(write_graph6(g)) == g


@pytest.mark.parametrize("text, offset", [
    ("A\x07", 1),      # non-printable
    ("A", 1),          # truncated
    ("Bgg", 2),        # too long
    ("A`", 1),         # nonzero padding
])
def test_graph6_errors_carry_offsets(text, offset):
    with pytest.raises(GraphFormatError) as err:
        parse_graph6(text)
    assert err.value.offset == offset


def test_read_graph6_reports_line():
    with pytest.raises(GraphFormatError) as err:
        list(read_graph6(["A_", "Bg", "A`"]))
    assert err.value.line == 3


# --- distances ------------------------------------------------------------

def test_bfs_matches_networkx(rng):
    for _ in range(200):
        g = random_graph(rng, rng.randint(1, 12), 0.3)
        ref = dict(nx.all_pairs_shortest_path_length(to_nx(g)))
        for s in range(g.n):
            d = bfs_distances(g, s)
            for t in range(g.n):
                assert d[t] == ref[s].get(t, float("inf"))


def test_bfs_metric_examples():
    m = bfs_metric(cycle(5))
    assert m.d[0][2] == 2
    assert {m.d[u][v] for u in range(5) for v in range(5) if u != v} == {1, 2}
    assert all(m.d[u][v] == 1 for u in range(6) for v in range(6) if u != v
               for m in [bfs_metric(complete(6))])
    with pytest.raises(ValueError):
        bfs_metric(Graph.from_edges(4, [(0, 1), (2, 3)]))


def test_bfs_metric_is_valid_metric(rng):
    for _ in range(100):
        g = random_connected(rng, rng.randint(2, 10))
        m = bfs_metric(g)
        assert validate_metric(m.d) == m
        for u, v in itertools.combinations(range(g.n), 2):
            assert (m.d[u][v] == 1) == g.has_edge(u, v)


# --- classes --------------------------------------------------------------

def test_classify_examples():
    rep = classify(cycle(5))
    assert (rep.bipartite, rep.chordal, rep.diameter, rep.bridges) == (False, False, 2, [])
    assert classify(HOUSE).hhd_free is False
    assert are_isomorphic(HOUSE, path(5).complement())
    rng = random.Random(3)
    for _ in range(30):
        n = rng.randint(2, 10)
        tree = Graph.from_edges(n, [(v, rng.randrange(v)) for v in range(1, n)])
        rep = classify(tree)
        assert rep.bipartite and rep.chordal and sorted(rep.bridges) == sorted(tree.edges())


def test_class_predicates_match_networkx(rng):
    for _ in range(400):
        g = random_graph(rng, rng.randint(1, 9), rng.random())
        h = to_nx(g)
        assert is_bipartite(g) == nx.is_bipartite(h)
        assert is_chordal(g) == nx.is_chordal(h)
        assert sorted(bridges(g)) == sorted(tuple(sorted(e)) for e in nx.bridges(h))
        assert is_connected(g) == nx.is_connected(h)
        if is_connected(g):
            assert diameter(g) == nx.diameter(h)


def test_bipartite_matches_two_colouring(rng):
    def two_colour(g):
        col = [-1] * g.n
        for s in range(g.n):
            if col[s] >= 0:
                continue
            col[s] = 0
            stack = [s]
            while stack:
                u = stack.pop()
                for v in g.neighbors(u):
                    if col[v] < 0:
                        col[v] = 1 - col[u]
                        stack.append(v)
                    elif col[v] == col[u]:
                        return False
        return True

    for _ in range(10_000):
        g = random_graph(rng, rng.randint(1, 8), rng.random())
        assert is_bipartite(g) == two_colour(g)


def _brute_hhd_free(g: Graph) -> bool:
    gm = nx.algorithms.isomorphism
    h = to_nx(g)
    for pat in (HOUSE, DOMINO):
        if gm.GraphMatcher(h, to_nx(pat)).subgraph_is_isomorphic():
            return False
    # holes: induced cycles of length >= 5
    for k in range(5, g.n + 1):
        for vs in itertools.combinations(range(g.n), k):
            sub = h.subgraph(vs)
            if sub.number_of_edges() == k and all(d == 2 for _, d in sub.degree()) and nx.is_connected(sub):
                return False
    return True


def test_hhd_free_matches_brute_force(rng):
    for _ in range(150):
        g = random_graph(rng, rng.randint(4, 8), rng.random())
        assert is_hhd_free(g) == _brute_hhd_free(g)


def test_find_hole_and_induced():
    assert sorted(find_hole(cycle(6))) == list(range(6))
    assert find_hole(cycle(4)) is None
    assert find_hole(complete(5)) is None
    assert find_induced(DOMINO, HOUSE) is None
    assert find_induced(HOUSE, path(4)) is not None


def _brute_bisplit(g: Graph) -> bool:
    # vertex set splits into stable X, Y, Z with Y u Z inducing a complete bipartite graph
    for labels in itertools.product(range(3), repeat=g.n):
        parts = [[v for v in range(g.n) if labels[v] == k] for k in range(3)]
        if any(g.has_edge(u, v) for p in parts for u, v in itertools.combinations(p, 2)):
            continue
        if all(g.has_edge(y, z) for y in parts[1] for z in parts[2]):
            return True
    return False


def test_bisplit_matches_brute_force(rng):
    for _ in range(150):
        g = random_graph(rng, rng.randint(1, 7), rng.random())
        assert is_bisplit(g) == _brute_bisplit(g)


def test_multipartite_parts():
    assert sorted(multipartite_parts(complete_multipartite([3, 3, 4]))) == [3, 3, 4]
    assert sorted(multipartite_parts(complete(4))) == [1, 1, 1, 1]
    assert multipartite_parts(petersen_complement()) is None
    assert multipartite_parts(cycle(5)) is None


def test_bridges_generate_universal_lines(rng):
    for _ in range(200):
        g = random_connected(rng, rng.randint(2, 9), 0.3)
        fam = line_family(bfs_metric(g))
        for e in bridges(g):
            line = next(ln for ln in fam.lines if e in ln.generators)
            assert len(line.members) == g.n


# --- generators -----------------------------------------------------------

def test_generator_shapes():
    k334 = complete_multipartite([3, 3, 4])
    assert (k334.n, k334.num_edges) == (10, 33)
    pc = petersen_complement()
    assert (pc.n, pc.num_edges) == (10, 30)
    assert nx.is_isomorphic(to_nx(petersen()), nx.petersen_graph())
    w = wheel(5)
    assert w.degree(0) == 4 and w.induced([1, 2, 3, 4]) == cycle(4)
    s = star(4)
    assert s.neighbors(0) == [1, 2, 3] and s.num_edges == 3
    assert generate("complete_multipartite", [1, 3, 3, 3]).num_edges == 3 * 3 + 3 * 3 * 3
    with pytest.raises(ValueError):
        generate("nope")


def test_chen_cycles():
    g = chen_cycles([3, 4, 5])
    assert g.n == 1 + 2 + 3 + 4
    assert g.degree(0) == 6
    rest = g.induced(list(range(1, g.n)))
    assert sorted(len(c) for c in nx.connected_components(to_nx(rest))) == [2, 3, 4]
    assert find_hole(g) is not None


def test_q14_example():
    g = q14_example()
    # C_6 on labels 1..6 plus label 7 joined to 2 and 5
    assert g.n == 7 and g.num_edges == 8
    assert g.induced(range(6)) == cycle(6)
    assert g.neighbors(6) == [1, 4]


def test_hhd_example():
    g = hhd_example()
    assert g.n == 12
    assert is_hhd_free(g) and not is_chordal(g)
    assert diameter(g) == 3
    # undo the construction: collapsing each clique {a,c,e} and dropping b, d gives C_4
    core = g.induced([2, 7, 0, 1])  # a1, a2, v3, v4
    assert are_isomorphic(core, cycle(4))


# --- transforms -----------------------------------------------------------

def test_transform_examples():
    for n in range(1, 7):
        assert are_isomorphic(split_adjacent_twins(complete(n), 0), complete(n + 1))
    bowtie = glue(complete(3), complete(3), 1, 2)
    assert (bowtie.n, bowtie.num_edges) == (5, 6)
    assert sorted(bowtie.degree(v) for v in range(5)) == [2, 2, 2, 2, 4]
    assert transform(path(3), "split_nonadjacent_twins", 1) == substitute(path(3), 1, Graph(2, (0, 0)))
    with pytest.raises(ValueError):
        transform(path(3), "substitute", 5, complete(2))


def test_substitution_neighbourhoods(rng):
    for _ in range(100):
        g = random_graph(rng, rng.randint(1, 7))
        h = random_graph(rng, rng.randint(1, 4))
        v = rng.randrange(g.n)
        s = substitute(g, v, h)
        ids = [v] + list(range(g.n, g.n + h.n - 1))
        old = set(g.neighbors(v))
        for x in range(h.n):
            nb = set(s.neighbors(ids[x]))
            inside = {ids[y] for y in h.neighbors(x)}
            assert nb == old | inside
        assert split_nonadjacent_twins(g, v).n == g.n + 1
