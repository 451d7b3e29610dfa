"""Cutset bounds, the isoperimetric number and the E-optimality certificates."""

from fractions import Fraction
from math import cos, pi, sqrt
from itertools import combinations

import numpy as np
import pytest
import sympy
from helpers import random_multigraph

from blockopt.bounds import (CutError, best_bound, candidate_bounds, e_optimality_certificates,
                             edge_cutset_bound, isoperimetric_number, vertex_cutset_bound)
from blockopt.design import BlockDesign
from blockopt.families import complete, complete_bipartite, cycle, cycle_with_leaves, fano, figure, path, queen_bee, star
from blockopt.graphs import Multigraph, concurrence_graph, laplacian
from blockopt.spectral import spectrum


def _g(d):
    return concurrence_graph(d)


def _theta1(g):
    return spectrum(laplacian(g)).theta1


def test_edge_cut_examples():
    for v in range(3, 8):
        cb = edge_cutset_bound(_g(star(v)), [v - 1])
        assert cb.c == 1 and cb.bound_value == 1 + Fraction(1, v - 1)
        assert cb.iso_ratio_bound == 2
        k = edge_cutset_bound(_g(complete(v)), [0])
        assert k.bound_value == v == pytest.approx(_theta1(_g(complete(v))))
    p4 = edge_cutset_bound(_g(path(4)), [0, 1])
    assert p4.bound_value == 1 and p4.bound_value >= 2 - sqrt(2)
    with pytest.raises(CutError):
        edge_cutset_bound(_g(path(4)), [])
    with pytest.raises(CutError):
        edge_cutset_bound(_g(path(4)), [0, 1, 2, 3])


def test_vertex_cut_unicyclic():
    # cycle of length s >= 3 with a pendant tree: cutting at the attachment vertex
    for s in range(3, 8):
        g = _g(cycle_with_leaves(s, s + 2))
        cb = vertex_cutset_bound(g, [0], [s, s + 1], list(range(1, s)))
        # (n^2 + 2m) / (n(m + n)) with n = s - 1 cycle vertices left: below 1 once n > 2
        assert (cb.bound_value < 1) == (s >= 4)
        assert _theta1(g) <= cb.bound_value + 1e-12
    assert _theta1(_g(cycle_with_leaves(3, 6))) == pytest.approx(1)


def test_vertex_cut_queen_bee():
    g = _g(queen_bee(3, 3))
    cb = vertex_cutset_bound(g, [0], [1, 2], [3, 4, 5, 6])
    assert cb.simple_at_C and cb.fully_joined
    assert _theta1(g) == pytest.approx(1)
    assert cb.bound_value >= 1


def test_vertex_cut_errors():
    g = _g(path(4))
    with pytest.raises(CutError):
        vertex_cutset_bound(g, [], [0, 1], [2, 3])
    with pytest.raises(CutError):
        vertex_cutset_bound(g, [1], [0], [2])
    with pytest.raises(CutError):
        vertex_cutset_bound(g, [1], [], [0, 2, 3])


def test_digon_with_leaves():
    g = Multigraph.from_edges(4, [(0, 1), (0, 1), (0, 2), (1, 3)])
    x = sympy.symbols("x")
    poly = sympy.Matrix(laplacian(g).tolist()).charpoly(x).as_expr()
    assert sympy.expand(poly - x * (x - 2) * (x ** 2 - 6 * x + 4)) == 0
    t1 = _theta1(g)
    assert t1 == pytest.approx(3 - sqrt(5)) and t1 < 1
    for side in ([2], [3]):
        for c in ([0], [1]):
            try:
                cb = vertex_cutset_bound(g, c, side, [u for u in range(4) if u not in c + side])
            except CutError:
                continue
            assert cb.bound_value > t1


def test_cutset_lemma_tightness_counterexample():
    # K_{5,2} with C the five-vertex side: simple and fully joined, yet theta_1 = 2 < c = 5
    g = _g(complete_bipartite(5, 2))
    cb = vertex_cutset_bound(g, range(5), [5], [6])
    assert cb.simple_at_C and cb.fully_joined and cb.c == 5
    assert _theta1(g) == pytest.approx(2)


def test_cutset_tightness_when_c_small():
    # simple at C, fully joined and c <= |S| + |T|: theta_1 equals c
    for c in range(1, 4):
        for m in range(1, 4):
            for n in range(1, 4):
                if c > m + n:
                    continue
                v = c + m + n
                edges = [(a, b) for a in range(c) for b in range(c, v)]
                g = Multigraph.from_edges(v, edges)
                cb = vertex_cutset_bound(g, range(c), range(c, c + m), range(c + m, v))
                assert cb.fully_joined
                assert _theta1(g) == pytest.approx(min(c, cb.bound_value))


def test_bounds_dominate_theta1_random():
    rng = np.random.default_rng(61)
    for _ in range(150):
        g = random_multigraph(rng, n_max=9)
        if g.n < 3:
            continue
        t1 = _theta1(g)
        for cb in candidate_bounds(g):
            assert float(cb.bound_value) >= t1 - 1e-9
        assert best_bound(g).bound_value == min(cb.bound_value for cb in candidate_bounds(g))


def _iso_brute(g):
    n = g.n
    best = None
    for size in range(1, n // 2 + 1):
        for s in combinations(range(n), size):
            rest = [u for u in range(n) if u not in s]
            val = Fraction(int(g.mult[np.ix_(list(s), rest)].sum()), size)
            best = val if best is None else min(best, val)
    return best


def test_isoperimetric_examples():
    for v in range(2, 10):
        assert isoperimetric_number(_g(complete(v))).value == (v + 1) // 2
    c8 = isoperimetric_number(_g(cycle(8)))
    assert c8.value == Fraction(1, 2) and c8.exact
    assert _theta1(_g(cycle(8))) == pytest.approx(2 * (1 - cos(pi / 4)))
    two = _g(BlockDesign(4, [(1, 2), (3, 4)]))
    assert isoperimetric_number(two, check=False).value == 0
    with pytest.raises(ValueError):
        isoperimetric_number(Multigraph(np.zeros((1, 1), dtype=int)))


def test_isoperimetric_brute_force():
    rng = np.random.default_rng(62)
    for _ in range(60):
        g = random_multigraph(rng, n_max=10, extra_max=8)
        iso = isoperimetric_number(g)
        assert iso.value == _iso_brute(g)
        w = sorted(iso.witness)
        assert 1 <= len(w) <= g.n // 2
        rest = [u for u in range(g.n) if u not in iso.witness]
        assert Fraction(int(g.mult[np.ix_(w, rest)].sum()), len(w)) == iso.value


def test_isoperimetric_heuristic_is_upper_bound():
    g = _g(cycle(30))
    iso = isoperimetric_number(g)
    assert not iso.exact
    assert iso.value >= Fraction(2, 15)
    assert "heuristic" in str(iso)


def test_e_certificates():
    cert = e_optimality_certificates(figure("fig2b"))
    assert cert.defect_sum == 1 and cert.defect_certified
    assert cert.ms_lhs == 8 == cert.ms_rhs and cert.ms_certified
    assert cert.certified
    assert cert.lines(5)[0] == "defect sum 1 < 5/2: E-optimal (defect theorem)"
    f = e_optimality_certificates(fano())
    assert f.defect_sum == 0 and f.certified
    nope = e_optimality_certificates(figure("fig2a"))
    assert not nope.variance_balanced and not nope.certified
    assert nope.lines(5) == ["not variance-balanced: no E-certificate applies"]
