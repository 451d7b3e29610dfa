"""Exact spanning-tree and spanning-thicket counts."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from blockopt import _exact
from blockopt.design import BlockDesign
from blockopt.electrical import effective_resistance, resistance_sum
from blockopt.graphs import Multigraph, concurrence_graph, is_connected, levi_graph

THICKET_EDGE_CAP = 20


def spanning_tree_count(g: Multigraph) -> int:
    """Number of spanning trees: a principal minor of the Laplacian, by Bareiss elimination."""
    n = g.n
    if n == 1:
        return 1
    m = g.mult
    deg = g.degrees
    minor = [[(int(deg[u]) if u == w else -int(m[u, w])) for w in range(1, n)] for u in range(1, n)]
    return _exact.bareiss_det(minor)


@dataclass(frozen=True)
class GaffkeCheck:
    concurrence_trees: int
    levi_trees: int
    exponent: int
    holds: bool

    @property
    def factor(self) -> Fraction:
        return Fraction(self.levi_trees, self.concurrence_trees)


def levi_tree_factor_check(d: BlockDesign) -> GaffkeCheck:
    """Compare Levi and concurrence tree counts against the factor ``k^(b-v+1)``.

    The power is taken rationally, so ``b - v + 1 < 0`` is allowed.
    """
    g = concurrence_graph(d)
    if not is_connected(g):
        raise ValueError("design is disconnected")
    tc = spanning_tree_count(g)
    tl = spanning_tree_count(levi_graph(d))
    e = d.b - d.v + 1
    holds = Fraction(tl) == Fraction(d.k) ** e * tc
    if not holds:
        raise AssertionError(f"Levi tree count {tl} != {d.k}^{e} * {tc}")
    return GaffkeCheck(tc, tl, e, holds)


@dataclass(frozen=True)
class ThicketCount:
    separated: int
    trees: int

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.separated, self.trees)


def thicket_counts(g: Multigraph, i: int, j: int) -> ThicketCount:
    """Spanning thickets with ``i`` and ``j`` in different trees, as trees times ``R_ij``."""
    if i == j:
        raise ValueError("vertices must be distinct")
    trees = spanning_tree_count(g)
    sep = trees * effective_resistance(g, i, j)
    if sep.denominator != 1:
        raise AssertionError("trees * R_ij is not an integer")
    return ThicketCount(int(sep), trees)


class _DSU:
    __slots__ = ("parent",)

    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


def enumerate_thickets(g: Multigraph):
    """Yield the vertex sets ``(F1, F2)`` of every spanning thicket, by brute force.

    Edge slots are distinguishable, so parallel edges give distinct thickets.
    """
    edges = g.edges()
    n = g.n
    if len(edges) > THICKET_EDGE_CAP:
        raise ValueError(f"thicket enumeration capped at {THICKET_EDGE_CAP} edges")
    if n < 2:
        return
    for subset in combinations(edges, n - 2):
        dsu = _DSU(n)
        if all(dsu.union(a, c) for a, c in subset):
            root0 = dsu.find(0)
            f1 = frozenset(u for u in range(n) if dsu.find(u) == root0)
            yield f1, frozenset(range(n)) - f1


def thicket_table(g: Multigraph) -> dict:
    """Brute-force count of separating thickets for every pair ``(i, j)``, ``i < j``."""
    n = g.n
    table = {(a, c): 0 for a in range(n) for c in range(a + 1, n)}
    for f1, f2 in enumerate_thickets(g):
        for a in f1:
            for c in f2:
                table[(min(a, c), max(a, c))] += 1
    return table


def resistance_sum_via_thickets(g: Multigraph) -> Fraction:
    """Sum over pairs of ``R_ij`` as (sum over thickets of |F1| |F2|) / (number of trees)."""
    weighted = sum(len(f1) * len(f2) for f1, f2 in enumerate_thickets(g))
    total = Fraction(weighted, spanning_tree_count(g))
    if total != resistance_sum(g):
        raise AssertionError("thicket sum disagrees with the electrical resistance sum")
    return total
