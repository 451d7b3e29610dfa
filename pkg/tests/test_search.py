"""Canonical labelling, orderly enumeration, ranking and the exhaustive theorem checks."""

from itertools import combinations, combinations_with_replacement

import networkx as nx
import numpy as np
import pytest
from helpers import random_design

from blockopt.design import BlockDesign, DesignError
from blockopt.families import complete, cube, fano, figure, mobius_ladder, path, star
from blockopt.graphs import concurrence_graph, is_connected, levi_graph
from blockopt.search import (SearchCapError, SearchSpace, TieToleranceError, automorphism_group_size,
                             canonical_design, canonical_form, enumerate_designs, estimated_classes,
                             isomorphic, optimize, rank, theorem_checks)
from blockopt.spectral import A, D, E, Phi, criteria


def _nx_levi(d: BlockDesign) -> nx.MultiGraph:
    g = nx.MultiGraph()
    lg = levi_graph(d)
    for u in range(lg.n):
        g.add_node(u, side=u < d.v)
    for a, c in lg.edges():
        g.add_edge(a, c)
    return g


def _nx_classes(designs) -> int:
    # bucket by an invariant, then resolve each bucket with VF2
    match = nx.algorithms.isomorphism.categorical_node_match("side", None)
    buckets = {}
    for d in designs:
        key = (tuple(sorted(d.replication)), tuple(sorted(concurrence_graph(d).mult.ravel())))
        buckets.setdefault(key, []).append(_nx_levi(d))
    total = 0
    for graphs in buckets.values():
        reps = []
        for g in graphs:
            if not any(nx.is_isomorphic(g, h, node_match=match) for h in reps):
                reps.append(g)
        total += len(reps)
    return total


def test_spec_counts():
    assert len(enumerate_designs(SearchSpace(4, 3, 2))) == 2
    assert len(enumerate_designs(SearchSpace(3, 2, 2))) == 1
    assert len(enumerate_designs(SearchSpace(5, 5, 2))) == 11


def test_binary_5_7_3_against_networkx():
    space = SearchSpace(5, 7, 3, binary_only=True)
    ours = enumerate_designs(space)
    blocks = list(combinations(range(1, 6), 3))
    labelled = []
    for multiset in combinations_with_replacement(blocks, 7):
        d = BlockDesign(5, multiset)
        if is_connected(concurrence_graph(d)):
            labelled.append(d)
    assert len(ours) == _nx_classes(labelled) == 138
    forms = {canonical_form(d)[0] for d in labelled}
    assert len(forms) == len(ours)


def test_enumerated_classes_distinct_by_networkx():
    for space in (SearchSpace(5, 6, 2), SearchSpace(4, 4, 3)):
        ours = enumerate_designs(space)
        assert _nx_classes(ours) == len(ours)
        assert all(is_connected(concurrence_graph(d)) for d in ours)


def test_canonical_form_invariance():
    rng = np.random.default_rng(71)
    for _ in range(150):
        d = random_design(rng, v_max=9, connected=False)
        perm = (rng.permutation(d.v) + 1).tolist()
        e = d.relabel(perm)
        assert canonical_form(d) == canonical_form(e)
        c = canonical_design(d)
        assert canonical_design(c) == c
        assert isomorphic(d, c)


def test_canonical_form_separates():
    assert canonical_form(path(4))[0] != canonical_form(star(4))[0]
    rng = np.random.default_rng(72)
    for _ in range(80):
        a = random_design(rng, v_max=6, k_max=3)
        b = random_design(rng, v_max=6, k_max=3)
        if (a.v, a.b, a.k) != (b.v, b.b, b.k):
            continue
        same = nx.is_isomorphic(_nx_levi(a), _nx_levi(b),
                                node_match=nx.algorithms.isomorphism.categorical_node_match("side", None))
        assert isomorphic(a, b) == same


def test_automorphism_groups():
    assert automorphism_group_size(fano()) == 168
    assert automorphism_group_size(cube()) == 48
    assert automorphism_group_size(complete(5)) == 120
    assert canonical_form(fano(), group=True)[1] == 168


def test_space_caps_and_errors():
    with pytest.raises(SearchCapError):
        SearchSpace(11, 12, 2)
    SearchSpace(12, 12, 3, binary_only=True, equireplicate_only=True)
    SearchSpace(11, 12, 2, override_caps=True)
    with pytest.raises(DesignError):
        SearchSpace(5, 3, 2, equireplicate_only=True)
    with pytest.raises(SearchCapError):
        enumerate_designs(SearchSpace(10, 30, 3))
    assert estimated_classes(SearchSpace(4, 3, 2)) >= 1


def test_filters():
    eq = enumerate_designs(SearchSpace(8, 12, 2, equireplicate_only=True))
    assert len(eq) == 20
    assert all(len(set(d.replication)) == 1 for d in eq)
    simple = enumerate_designs(SearchSpace(5, 6, 2, max_multiplicity=1))
    assert all(concurrence_graph(d).mult.max() <= 1 for d in simple)
    uni = enumerate_designs(SearchSpace(5, 5, 2, unicyclic_only=True))
    assert len(uni) == len(enumerate_designs(SearchSpace(5, 5, 2)))


def test_cubic_ranking():
    res = optimize(SearchSpace(8, 12, 2, equireplicate_only=True), A)
    assert isomorphic(res.entries[0].design, mobius_ladder(8))
    assert isomorphic(res.entries[1].design, cube())
    assert res.position(mobius_ladder(8)) == 0 and res.position(cube()) == 1
    dres = optimize(SearchSpace(8, 12, 2, equireplicate_only=True), D)
    assert dres.position(mobius_ladder(8)) == 0 and dres.position(cube()) == 1
    csv = res.to_csv(top=3).splitlines()
    assert csv[0] == "rank,canonical,A,D,E,edge_connectivity,tree_count"
    assert len(csv) == 4 and csv[1].startswith("1,")


def test_kiefer_small():
    for crit in (A, D, E, Phi(0.5), Phi(10)):
        res = optimize(SearchSpace(4, 6, 2), crit)
        assert len(res.best) == 1 and isomorphic(res.best[0].design, complete(4))


def test_rank_ties_grouped():
    # relabelled copies tie exactly and share a rank
    d = figure("fig3b")
    res = rank([d, d.relabel([2, 3, 4, 5, 6, 7, 1]), figure("fig3a")], A)
    assert len(res.best) == 1 and res.best[0].design == fano()
    assert res.tie_groups == [[0], [1, 2]]


@pytest.mark.parametrize("name, scope", [
    ("tree_case", {"vs": range(3, 7)}),
    ("unicyclic", {"vs": range(6, 8)}),
    ("bridge", {"vs": range(3, 7), "extras": (0, 1)}),
    ("levi_tree", {"pairs": ((3, 3),)}),
    ("levi_unicyclic", {"pairs": ((3, 3),)}),
    ("kiefer", {}),
])
def test_theorem_checks_small(name, scope):
    rep = theorem_checks(name, **scope)
    assert rep.passed, str(rep)


def test_unknown_theorem():
    with pytest.raises(KeyError):
        theorem_checks("nope")
