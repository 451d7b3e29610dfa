"""Named families and the closed-form variance polynomials."""

from fractions import Fraction

import numpy as np
import pytest

from blockopt.design import DesignError, classify
from blockopt.electrical import design_vbar, resistance_matrix
from blockopt.families import (a_optimal_cycle_length, a_optimal_s, c_family, c_family_spectrum, check_member,
                               cube, cycle_theta1, cycle_with_leaves, doubled_star, family_names, figure,
                               g_general, g_small, generate, mobius_ladder, queen_bee, smallest_c_family_eigenvalue,
                               table3, vbar_small)
from blockopt.graphs import concurrence_graph, edge_connectivity, levi_graph
from blockopt.spectral import criteria


def test_fig7_is_triangle_ring():
    d = figure("fig7")
    assert (d.v, d.b, d.k) == (12, 6, 3)
    cyc = [blk for blk in d.blocks if sum(t <= 6 for t in blk) == 2]
    assert len(cyc) == 6
    assert check_member("C", d)


def test_mobius_and_cube():
    m = mobius_ladder(8)
    edges = {tuple(blk) for blk in m.blocks}
    assert len(edges) == 12
    for i in range(8):
        a, b = i + 1, (i + 1) % 8 + 1
        assert (min(a, b), max(a, b)) in edges
    for i in range(4):
        assert (i + 1, i + 5) in edges
    assert (concurrence_graph(m).degrees == 3).all()
    assert edge_connectivity(concurrence_graph(cube())) == 3
    with pytest.raises(DesignError):
        mobius_ladder(7)


def test_queen_bee_generator():
    d = queen_bee(3, 3)
    assert d.v == 7 and d.blocks == ((1, 2, 3), (1, 4, 5), (1, 6, 7))
    assert check_member("queen_bee", d)


def test_c_family_structure():
    for b in range(2, 7):
        for k in range(2, 5):
            for s in range(1 if k >= 3 else 2, b + 1):
                d = c_family(b, k, s)
                assert d.v == b * (k - 1)
                assert check_member("C", d)
                # Levi graph is unicyclic: v + b vertices, bk edges
                lg = levi_graph(d)
                assert lg.edge_count == lg.n
                assert classify(d).binary == (s >= 2)
    with pytest.raises(DesignError):
        c_family(4, 2, 1)
    with pytest.raises(DesignError):
        c_family(4, 4, 1, variant=2)
    with pytest.raises(DesignError):
        c_family(3, 3, 4)


def test_g_small_examples():
    assert g_small(3, 12) == g_small(4, 12) == 1356
    vals = [g_small(s, 6) for s in range(2, 7)]
    assert vals == sorted(vals, reverse=True) and len(set(vals)) == 5
    assert a_optimal_cycle_length(12) == {3, 4}


def test_g_small_matches_exact_vbar():
    for v in range(3, 11):
        for s in range(2, v + 1):
            assert design_vbar(cycle_with_leaves(s, v)) == vbar_small(s, v)


def _levi_treatment_sum(d):
    r = resistance_matrix(levi_graph(d))
    return sum(r[a][c] for a in range(d.v) for c in range(a + 1, d.v))


def test_g_general_matches_levi_resistance():
    for b in range(2, 8):
        for k in range(2, 6):
            for s in range(1 if k >= 3 else 2, b + 1):
                assert Fraction(g_general(s, b, k), 6) == _levi_treatment_sum(c_family(b, k, s)), (s, b, k)
    for b in range(2, 7):
        for k in (3, 4):
            assert _levi_treatment_sum(c_family(b, k, 1, 1)) == Fraction(g_general(1, b, k), 6)
    assert Fraction(g_general(6, 6, 3), 6) == _levi_treatment_sum(figure("fig7"))


def test_g_general_k2_reduces_to_g_small():
    # k = 2: Levi resistances are twice concurrence ones and v = b
    for b in range(2, 10):
        for s in range(2, b + 1):
            assert Fraction(g_general(s, b, 2), 6) == 2 * Fraction(g_small(s, b), 12)


def test_g_difference_identity():
    for b in range(2, 14):
        for k in range(2, 8):
            assert g_general(1, b, k) - g_general(2, b, k) == (3 * k - 9 + 6 * b) * (k - 1) - 3 > 0


def test_variant_resistance_multisets():
    for b in range(2, 7):
        one, two = c_family(b, 3, 1, 1), c_family(b, 3, 1, 2)
        r1, r2 = resistance_matrix(levi_graph(one)), resistance_matrix(levi_graph(two))
        v = one.v
        m1 = sorted(r1[a][c] for a in range(v) for c in range(a + 1, v))
        m2 = sorted(r2[a][c] for a in range(v) for c in range(a + 1, v))
        assert m1 == m2


def test_table3_examples():
    assert a_optimal_s(9, 2) == {4} == table3(9, 2)
    assert a_optimal_s(7, 4) == {2} == table3(7, 4)
    assert a_optimal_s(12, 2) == {3, 4} == table3(12, 2)


def test_closed_form_spectrum():
    for b in range(2, 8):
        for k in range(3, 6):
            num = criteria(c_family(b, k, b)).spectrum.nontrivial
            assert np.allclose(num, c_family_spectrum(b, k), atol=1e-9)
            assert num[0] == pytest.approx(smallest_c_family_eigenvalue(b, k))
    with pytest.raises(DesignError):
        c_family_spectrum(5, 2)


def test_theta1_for_short_cycles():
    for b in range(4, 9):
        for k in range(3, 6):
            for s in (1, 2):
                assert criteria(c_family(b, k, s)).E_value == pytest.approx(1, abs=1e-9)
    # with a single block off the cycle the value is above one
    assert criteria(c_family(3, 3, 2)).E_value > 1.05


def test_cycle_theta1():
    for v in range(3, 12):
        assert criteria(cycle_with_leaves(v, v)).E_value == pytest.approx(cycle_theta1(v))
    assert cycle_theta1(6) == pytest.approx(1) and cycle_theta1(7) < 1


def test_generate_dispatch():
    assert generate("C", b=6, k=3, s=6) == figure("fig7")
    assert generate("doubled_star", v=5) == doubled_star(5)
    assert generate("fig2a") == figure("fig2a")
    with pytest.raises(DesignError):
        generate("C", b=3)
    with pytest.raises(DesignError):
        generate("nonsense")
    for name in family_names():
        assert name in ("C", "cycle", "path", "star", "doubled_star", "cycle_with_leaves", "queen_bee",
                        "mobius_ladder", "cube", "complete", "complete_bipartite", "triangle_ring",
                        "fano", "fig7") or name.startswith("fig")


def test_relabel_invariance_of_vbar():
    rng = np.random.default_rng(51)
    for b, k, s in [(5, 3, 2), (6, 3, 6), (4, 4, 1)]:
        d = c_family(b, k, s)
        perm = (rng.permutation(d.v) + 1).tolist()
        assert design_vbar(d.relabel(perm)) == design_vbar(d)
