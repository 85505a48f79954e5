from __future__ import annotations

import itertools
import random
from fractions import Fraction
from math import ceil

import pytest

from conftest import random_connected
from linelab.errors import CapExceeded, MetricError, Refusal
from linelab.graphs import Graph, bfs_metric, complete, cycle, path, star
from linelab.lines import line_family
from linelab.metrics import (
    AXIOMS, MetricSpace, TernaryRelation, as_exact, betweenness_of, check_axioms,
    eight_triple_relation, format_exact, four_point_example, from_l1_points, l1,
    l2_linf_plane_isometry, linf, linf_embed, recognize_graph_betweenness,
    recognize_graph_metric, recognize_metric_betweenness, unary_embed, validate_metric,
)
from linelab.search import enumerate_connected


def random_metric(rng: random.Random, n: int, values=(1, 2)) -> MetricSpace:
    """Distances drawn from ``values``; any choice within [a, 2a] is a metric."""
    d = [[0] * n for _ in range(n)]
    for u, v in itertools.combinations(range(n), 2):
        d[u][v] = d[v][u] = rng.choice(values)
    return validate_metric(d)


def random_l1_space(rng: random.Random, n: int) -> MetricSpace:
    pts = set()
    while len(pts) < n:
        pts.add((Fraction(rng.randint(-6, 6), rng.randint(1, 3)), rng.randint(-4, 4)))
    return from_l1_points(sorted(pts))[0]


# --- exactness ------------------------------------------------------------

def test_exact_numbers():
    assert as_exact("3/6") == Fraction(1, 2)
    assert as_exact(Fraction(4, 2)) == 2 and isinstance(as_exact(Fraction(4, 2)), int)
    assert format_exact(Fraction(5, 2)) == "5/2"
    with pytest.raises(TypeError):
        as_exact(0.5)
    with pytest.raises(TypeError):
        as_exact(True)


# --- validate -------------------------------------------------------------

def test_validate_examples():
    assert validate_metric(bfs_metric(cycle(5)).d).n == 5
    m = four_point_example()
    assert m.d[0][1] == m.d[1][2] == 1
    assert sorted(m.d[u][v] for u, v in itertools.combinations(range(4), 2)) == [1, 1, 2, 2, 2, 2]
    with pytest.raises(MetricError) as err:
        validate_metric([[0, 1, 3], [1, 0, 1], [3, 1, 0]])
    assert err.value.axiom == "triangle"
    u, v, w = err.value.witness
    assert {u, w} == {0, 2} and v == 1


@pytest.mark.parametrize("d, axiom", [
    ([[0, 1], [2, 0]], "symmetry"),
    ([[1, 1], [1, 0]], "diagonal"),
    ([[0, 0], [0, 0]], "positivity"),
    ([[0, 1, 2], [1, 0]], "square"),
])
def test_validate_errors(d, axiom):
    with pytest.raises(MetricError) as err:
        validate_metric(d)
    assert err.value.axiom == axiom


def test_metric_json_roundtrip(rng):
    for _ in range(50):
        m = random_l1_space(rng, rng.randint(2, 7))
        assert MetricSpace.from_json(m.to_json()) == m


# --- embeddings -----------------------------------------------------------

def test_l1_points_examples():
    m, _ = from_l1_points([(0, 0), (1, 2)])
    assert m.d[0][1] == 3
    assert from_l1_points([(0, 0), (0, 1), (2, 3)])[1] is False
    assert from_l1_points([(0, 0), (1, 3), (2, 1)])[1] is True
    with pytest.raises(ValueError):
        from_l1_points([(0, 0), (0, 0)])


def test_linf_embedding_is_isometric(rng):
    two = validate_metric([[0, 5], [5, 0]])
    assert linf_embed(two) == [(0, 5), (5, 0)]
    spaces = [bfs_metric(complete(3)), bfs_metric(cycle(5))]
    spaces += [random_l1_space(rng, rng.randint(2, 8)) for _ in range(50)]
    for m in spaces:
        vecs = linf_embed(m)
        for u, v in itertools.combinations(range(m.n), 2):
            assert linf(vecs[u], vecs[v]) == m.d[u][v]


def test_unary_embedding(rng):
    assert unary_embed([(2,)], 3) == [(1, 1, 0)]
    assert unary_embed([(0, 2)], 2) == [(0, 0, 1, 1)]
    with pytest.raises(ValueError):
        unary_embed([(5,)], 4)
    for _ in range(100):
        a = tuple(rng.randint(0, 4) for _ in range(3))
        b = tuple(rng.randint(0, 4) for _ in range(3))
        ea, eb = unary_embed([a, b], 4)
        assert l1(ea, eb) == l1(a, b)


def test_plane_isometry(rng):
    assert l2_linf_plane_isometry([(0, 0), (1, 1)]) == [(0, 0), (2, 0)]
    assert l2_linf_plane_isometry([(0, 0)]) == [(0, 0)]
    for _ in range(100):
        p = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(4)]
        pts = [(p[0], p[1]), (p[2], p[3])]
        img = l2_linf_plane_isometry(pts)
        assert linf(*img) == l1(*pts)


# --- betweenness and axioms -------------------------------------------------

def _oracle_axioms(r: TernaryRelation) -> dict[str, bool]:
    """Direct transcription of (M0)-(M6) with four distinct points."""
    B = r.triples
    pts = range(r.n)
    ok = {k: True for k in AXIOMS}
    for t in B:
        if len(set(t)) != 3:
            ok["m0"] = False
        u, v, w = t
        if (w, v, u) not in B:
            ok["m1"] = False
        if (u, w, v) in B:
            ok["m2"] = False
    for u, v, w, x in itertools.permutations(pts, 4):
        if (u, v, w) in B and (u, w, x) in B and not ((u, v, x) in B and (v, w, x) in B):
            ok["m3"] = False
        if (u, v, w) in B and (v, w, x) in B and not ((u, v, x) in B and (u, w, x) in B):
            ok["m4"] = False
        if (u, v, w) in B and (u, v, x) in B and not (
                ((u, w, x) in B and (v, w, x) in B) or ((u, x, w) in B and (v, x, w) in B)):
            ok["m5"] = False
        if (u, v, x) in B and (u, w, x) in B and not (
                ((u, v, w) in B and (v, w, x) in B) or ((u, w, v) in B and (w, v, x) in B)):
            ok["m6"] = False
    return ok


def test_betweenness_examples():
    assert betweenness_of(bfs_metric(path(3))).triples == {(0, 1, 2), (2, 1, 0)}
    assert not betweenness_of(bfs_metric(complete(3))).triples


def test_check_axioms_examples():
    rep = check_axioms(betweenness_of(bfs_metric(cycle(5))))
    assert rep.pseudometric
    rep = check_axioms(eight_triple_relation())
    assert all(getattr(rep, k) for k in AXIOMS)
    rep = check_axioms(TernaryRelation(3, frozenset({(0, 1, 2)})))
    assert not rep.m1 and rep.witnesses["m1"] == ((0, 1, 2),)


def test_metric_betweenness_is_pseudometric(rng):
    for _ in range(300):
        n = rng.randint(3, 7)
        m = random_l1_space(rng, n) if rng.random() < 0.5 else random_metric(rng, n, (2, 3, 4))
        rep = check_axioms(betweenness_of(m))
        assert rep.pseudometric, rep.witnesses


def test_check_axioms_matches_oracle(rng):
    for _ in range(400):
        n = rng.randint(3, 5)
        perms = list(itertools.permutations(range(n), 3))
        k = rng.randint(0, min(8, len(perms)))
        r = TernaryRelation(n, frozenset(rng.sample(perms, k)))
        if rng.random() < 0.5:  # symmetrize to reach the later axioms
            r = TernaryRelation(n, r.triples | {t[::-1] for t in r.triples})
        rep = check_axioms(r)
        assert {k: getattr(rep, k) for k in AXIOMS} == _oracle_axioms(r)
        for ax, wit in rep.witnesses.items():
            assert not getattr(rep, ax)
            assert all(t in r.triples for t in wit)


def test_relation_json_roundtrip():
    r = eight_triple_relation()
    assert TernaryRelation.from_json(r.to_json()) == r
    assert TernaryRelation.from_json({"n": 6, "triples": r.to_json()}) == r
    with pytest.raises(ValueError):
        TernaryRelation(3, frozenset({(0, 0, 1)}))


# --- recognition ----------------------------------------------------------

def test_recognize_graph_metric_examples():
    assert recognize_graph_metric(bfs_metric(cycle(5))) == cycle(5)
    with pytest.raises(Refusal):
        recognize_graph_metric(validate_metric([[0, 2, 2], [2, 0, 2], [2, 2, 0]]))
    with pytest.raises(Refusal):
        recognize_graph_metric(four_point_example())
    # connected candidate, wrong distance
    with pytest.raises(Refusal) as err:
        recognize_graph_metric(validate_metric([[0, 1, 2, 2], [1, 0, 1, 2], [2, 1, 0, 1], [2, 2, 1, 0]]))
    assert err.value.reason == "distance mismatch" and err.value.witness == (0, 3)


def test_recognize_graph_betweenness_examples():
    assert recognize_graph_betweenness(betweenness_of(bfs_metric(path(4)))) == path(4)
    assert recognize_graph_betweenness(TernaryRelation(3, frozenset())) == complete(3)
    with pytest.raises(Refusal):
        recognize_graph_betweenness(eight_triple_relation())


@pytest.mark.parametrize("n", range(2, 9))
def test_graph_recognizers_invert_exhaustively(n):
    for g in enumerate_connected(n):
        m = bfs_metric(g)
        assert recognize_graph_metric(m) == g
        assert recognize_graph_betweenness(betweenness_of(m)) == g


def test_recognize_metric_betweenness_examples():
    r = betweenness_of(bfs_metric(cycle(5)))
    assert betweenness_of(recognize_metric_betweenness(r)) == r
    with pytest.raises(Refusal):
        recognize_metric_betweenness(eight_triple_relation())
    m = recognize_metric_betweenness(TernaryRelation(5, frozenset()))
    assert all(m.d[u][v] == 1 for u in range(5) for v in range(5) if u != v)
    with pytest.raises(CapExceeded):
        recognize_metric_betweenness(TernaryRelation(13, frozenset()))
    with pytest.raises(Refusal) as err:
        recognize_metric_betweenness(TernaryRelation(3, frozenset({(0, 1, 2)})))
    assert err.value.reason.startswith("axiom M1")


def test_recognize_metric_betweenness_certificates(rng):
    for _ in range(40):
        m = random_l1_space(rng, rng.randint(3, 7))
        r = betweenness_of(m)
        cert = recognize_metric_betweenness(r)
        assert betweenness_of(cert) == r


# --- few distinct distances -------------------------------------------------

@pytest.mark.parametrize("values", [(1, 2), (2, 3, 4)])
def test_n_over_5k_lines(rng, values):
    for _ in range(300):
        n = rng.randint(2, 10)
        m = random_metric(rng, n, values)
        k = len(m.distinct_distances())
        assert line_family(m).lam >= ceil(n / (5 * k))
    for _ in range(100):
        g = random_connected(rng, rng.randint(2, 10), 0.4)
        m = bfs_metric(g)
        assert line_family(m).lam >= ceil(g.n / (5 * len(m.distinct_distances())))
