"""Upper bounds on the smallest non-trivial eigenvalue and E-optimality certificates.

The cutset bounds come from plugging a two-valued test vector into the
Rayleigh quotient, so every bound is at least theta_1.  The isoperimetric
number is found exhaustively for small graphs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional

import numpy as np

from blockopt.design import BlockDesign, block_defects, classify
from blockopt.graphs import Multigraph, components, concurrence_graph, laplacian
from blockopt.spectral import spectrum

ISO_EXACT_CAP = 24
BOUND_TOL = 1e-9


class CutError(ValueError):
    """Raised for a trivial or non-separating cut."""


@dataclass(frozen=True)
class CutsetBound:
    """A rational upper bound on theta_1 together with the cut that produced it.

    ``kind`` is ``"edge"`` (``S`` against the rest) or ``"vertex"`` (``C``
    separating ``S`` from ``T``).  For edge cuts ``c`` counts edge slots
    leaving ``S``; for vertex cuts ``m_prime``/``n_prime`` count edges from
    ``C`` into ``S``/``T``.
    """

    bound_value: Fraction
    kind: str
    S: frozenset
    T: frozenset
    C: frozenset
    c: int
    m: int
    n: int
    m_prime: Optional[int] = None
    n_prime: Optional[int] = None
    iso_ratio_bound: Optional[Fraction] = None
    simple_at_C: Optional[bool] = None
    fully_joined: Optional[bool] = None

    def describe(self, labels=None) -> str:
        name = (lambda u: labels[u]) if labels else (lambda u: str(u + 1))
        fmt = lambda s: "{" + ",".join(name(u) for u in sorted(s)) + "}"
        if self.kind == "edge":
            return f"edge cut |dS|={self.c} S={fmt(self.S)} (m={self.m}, n={self.n})"
        return (f"vertex cut C={fmt(self.C)} S={fmt(self.S)} T={fmt(self.T)} "
                f"(m'={self.m_prime}, n'={self.n_prime})")


def _boundary(g: Multigraph, s: frozenset) -> int:
    rest = [w for w in range(g.n) if w not in s]
    return int(g.mult[np.ix_(sorted(s), rest)].sum()) if rest and s else 0


def edge_cutset_bound(g: Multigraph, S: Iterable[int]) -> CutsetBound:
    """``c (1/m + 1/n)`` for the edge cut between ``S`` and its complement."""
    s = frozenset(S)
    if not s or len(s) >= g.n or any(u < 0 or u >= g.n for u in s):
        raise CutError("S must be a non-empty proper subset of the vertices")
    c = _boundary(g, s)
    m, n = len(s), g.n - len(s)
    bound = c * (Fraction(1, m) + Fraction(1, n))
    iso = Fraction(2 * c, m) if m <= n else None
    return CutsetBound(bound, "edge", s, frozenset(range(g.n)) - s, frozenset(), c, m, n,
                       iso_ratio_bound=iso)


def vertex_cutset_bound(g: Multigraph, C: Iterable[int], S: Iterable[int], T: Iterable[int]) -> CutsetBound:
    """``(m' n^2 + n' m^2) / (n m (m + n))`` for a vertex cut ``C`` between ``S`` and ``T``."""
    cs, ss, ts = frozenset(C), frozenset(S), frozenset(T)
    if not ss or not ts:
        raise CutError("S and T must be non-empty")
    if cs & ss or cs & ts or ss & ts or (cs | ss | ts) != frozenset(range(g.n)):
        raise CutError("C, S and T must partition the vertex set")
    mult = g.mult
    if mult[np.ix_(sorted(ss), sorted(ts))].any():
        raise CutError("C does not separate S from T")
    m, n = len(ss), len(ts)
    if cs:
        mp = int(mult[np.ix_(sorted(cs), sorted(ss))].sum())
        np_ = int(mult[np.ix_(sorted(cs), sorted(ts))].sum())
        simple = bool((mult[sorted(cs)] <= 1).all())
        joined = bool((mult[np.ix_(sorted(cs), sorted(ss | ts))] >= 1).all())
    else:
        mp = np_ = 0
        simple, joined = True, False
    bound = Fraction(mp * n * n + np_ * m * m, n * m * (m + n))
    return CutsetBound(bound, "vertex", ss, ts, cs, len(cs), m, n, mp, np_,
                       simple_at_C=simple, fully_joined=joined)


def candidate_bounds(g: Multigraph) -> list[CutsetBound]:
    """Bounds from a small automatic sweep of cuts.

    Edge cuts take ``S`` as each vertex, each edge's end pair and each
    2-subset; vertex cuts take ``C`` as each vertex and each 2-subset,
    splitting the remainder as one component against the others.
    """
    n = g.n
    out = []
    seen = set()
    for size in (1, 2):
        for s in combinations(range(n), size):
            fs = frozenset(s)
            if len(fs) < n and fs not in seen:
                seen.add(fs)
                out.append(edge_cutset_bound(g, fs))
    for size in (1, 2):
        for c in combinations(range(n), size):
            keep = [u for u in range(n) if u not in c]
            if len(keep) < 2:
                continue
            sub = Multigraph(g.mult[np.ix_(keep, keep)])
            comps = components(sub)
            if len(comps) < 2:
                continue
            for comp in comps:
                s = frozenset(keep[x] for x in comp)
                t = frozenset(keep) - s
                out.append(vertex_cutset_bound(g, c, s, t))
    return out


def best_bound(g: Multigraph) -> CutsetBound:
    return min(candidate_bounds(g), key=lambda cb: (cb.bound_value, cb.kind))


@dataclass(frozen=True)
class Isoperimetric:
    value: Fraction
    witness: frozenset
    exact: bool

    def __str__(self) -> str:
        tag = "" if self.exact else " (heuristic upper bound)"
        return f"{self.value}{tag}"


def _iso_exact(g: Multigraph) -> Isoperimetric:
    n = g.n
    m = g.mult.astype(np.int32)
    deg = g.degrees.astype(np.int32)
    cut = np.zeros(1, dtype=np.int32)
    size = np.zeros(1, dtype=np.int8)
    for i in range(n):
        # sum of m[i, j] over j in S, for every S inside {0..i-1}
        inner = np.zeros(1, dtype=np.int32)
        for j in range(i):
            inner = np.concatenate([inner, inner + m[i, j]])
        cut = np.concatenate([cut, cut + deg[i] - 2 * inner])
        size = np.concatenate([size, size + 1])
    best: Optional[tuple[Fraction, int]] = None
    for s in range(1, n // 2 + 1):
        idx = np.flatnonzero(size == s)
        pos = idx[int(np.argmin(cut[idx]))]
        val = Fraction(int(cut[pos]), s)
        if best is None or val < best[0]:
            best = (val, int(pos))
    witness = frozenset(u for u in range(n) if best[1] >> u & 1)
    return Isoperimetric(best[0], witness, True)


def _iso_heuristic(g: Multigraph) -> Isoperimetric:
    n = g.n
    half = n // 2
    cands = [frozenset([u]) for u in range(n)]
    cands += [frozenset(p) for p in combinations(range(n), 2)]
    for start in range(n):
        # breadth-first growth, keeping each prefix
        order, seen, queue = [], {start}, [start]
        while queue and len(order) < half:
            u = queue.pop(0)
            order.append(u)
            for w in g.neighbours(u):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        for t in range(1, len(order) + 1):
            cands.append(frozenset(order[:t]))
    best = min((Fraction(_boundary(g, s), len(s)), sorted(s)) for s in cands if len(s) <= half)
    return Isoperimetric(best[0], frozenset(best[1]), False)


def isoperimetric_number(g: Multigraph, check: bool = True) -> Isoperimetric:
    """Minimum of ``|dS| / |S|`` over non-empty ``S`` with ``|S| <= v/2``.

    Exhaustive up to ``ISO_EXACT_CAP`` vertices; above that a best-found value
    over singletons, pairs and breadth-first balls is returned with
    ``exact=False``.  With ``check`` the inequality theta_1 <= 2 iota is
    asserted in exact mode.
    """
    if g.n < 2:
        raise ValueError("need at least two vertices")
    res = _iso_exact(g) if g.n <= ISO_EXACT_CAP else _iso_heuristic(g)
    if check and res.exact:
        theta1 = spectrum(laplacian(g)).nontrivial[0]
        if theta1 > 2 * res.value + BOUND_TOL:
            raise AssertionError(f"theta_1 = {theta1} exceeds 2 iota = {2 * res.value}")
    return res


@dataclass(frozen=True)
class ECertificates:
    variance_balanced: bool
    lam: Optional[int]
    defect_sum: int
    defect_certified: bool
    ms_lhs: Optional[int]
    ms_rhs: Optional[int]
    ms_certified: bool

    @property
    def certified(self) -> bool:
        return self.defect_certified or self.ms_certified

    def lines(self, v: int) -> list[str]:
        if not self.variance_balanced:
            return ["not variance-balanced: no E-certificate applies"]
        half = Fraction(v, 2)
        out = []
        if self.defect_certified:
            out.append(f"defect sum {self.defect_sum} < {half}: E-optimal (defect theorem)")
        else:
            out.append(f"defect sum {self.defect_sum} >= {half}: defect test inconclusive")
        rel = "=" if self.ms_certified else "!="
        verdict = "E-optimal (Morgan-Srivastav)" if self.ms_certified else "Morgan-Srivastav inconclusive"
        out.append(f"(v-1)lambda = {self.ms_lhs} {rel} {self.ms_rhs} = floor(bk/v)(k-1): {verdict}")
        return out


def e_optimality_certificates(d: BlockDesign) -> ECertificates:
    """Evaluate the defect and Morgan-Srivastav sufficient conditions for E-optimality."""
    info = classify(d)
    _, dsum = block_defects(d)
    if not info.variance_balanced:
        return ECertificates(False, None, dsum, False, None, None, False)
    lam = int(info.lam)
    lhs = (d.v - 1) * lam
    rhs = (d.b * d.k // d.v) * (d.k - 1)
    defect_ok = d.k < d.v and 2 * dsum < d.v
    return ECertificates(True, lam, dsum, defect_ok, lhs, rhs, lhs == rhs)
