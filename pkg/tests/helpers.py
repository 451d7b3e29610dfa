"""Shared generators and independent oracles for the test suite."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import numpy as np

from blockopt.design import BlockDesign
from blockopt.graphs import Multigraph, concurrence_graph, is_connected
from blockopt.search import SearchSpace, enumerate_designs


def random_design(rng, v_max=10, k_max=5, connected=True, binary_prob=0.7):
    while True:
        v = int(rng.integers(3, v_max + 1))
        k = int(rng.integers(2, min(k_max, v - 1) + 1))
        b_min = -(-(v - 1) // (k - 1))
        b = int(rng.integers(b_min, b_min + 6))
        blocks = []
        for _ in range(b):
            if rng.random() < binary_prob:
                blk = rng.choice(np.arange(1, v + 1), size=k, replace=False)
            else:
                blk = rng.integers(1, v + 1, size=k)
                while blk.min() == blk.max():
                    blk = rng.integers(1, v + 1, size=k)
            blocks.append(blk.tolist())
        d = BlockDesign(v, blocks)
        if not connected or is_connected(concurrence_graph(d)):
            return d


def random_multigraph(rng, n_max=7, extra_max=6):
    """Random connected multigraph: a random tree plus up to ``extra_max`` extra edges."""
    n = int(rng.integers(2, n_max + 1))
    m = np.zeros((n, n), dtype=int)
    for u in range(1, n):
        w = int(rng.integers(0, u))
        m[u, w] += 1
        m[w, u] += 1
    for _ in range(int(rng.integers(0, extra_max + 1))):
        u, w = rng.choice(n, 2, replace=False)
        m[u, w] += 1
        m[w, u] += 1
    return Multigraph(m)


@lru_cache(maxsize=None)
def exhaustive_multigraphs(max_v=7, max_e=10) -> tuple:
    """Every connected loopless multigraph with at most ``max_v`` vertices and ``max_e`` edges, once."""
    out = []
    for v in range(2, max_v + 1):
        for b in range(v - 1, max_e + 1):
            out.extend(concurrence_graph(d) for d in enumerate_designs(SearchSpace(v, b, 2)))
    return tuple(out)


def fraction_det(rows) -> Fraction:
    """Determinant by plain rational elimination (independent of the Bareiss routine)."""
    a = [[Fraction(x) for x in r] for r in rows]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                for j in range(c, n):
                    a[r][j] -= f * a[c][j]
    return det


def tree_count_oracle(g: Multigraph) -> int:
    """Matrix-tree count via the last-vertex minor and rational elimination."""
    n = g.n
    lap = np.diag(g.degrees) - g.mult
    minor = [[int(lap[u, w]) for w in range(n - 1)] for u in range(n - 1)]
    val = fraction_det(minor) if n > 1 else Fraction(1)
    assert val.denominator == 1
    return int(val)


def resistance_oracle_float(g: Multigraph) -> np.ndarray:
    """Effective resistances from numpy's pseudo-inverse of the Laplacian."""
    lap = np.diag(g.degrees) - g.mult
    lp = np.linalg.pinv(lap.astype(float))
    d = np.diag(lp)
    return d[:, None] + d[None, :] - 2 * lp
