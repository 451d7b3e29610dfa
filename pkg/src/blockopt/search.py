"""Exhaustive isomorph-free enumeration of small connected designs and criterion ranking.

Two designs are isomorphic when a relabelling of treatments maps the block
multiset of one onto the other.  Canonical forms come from
individualisation-refinement on treatments: colour refinement by block
signatures, then branching on the first non-singleton cell, keeping the
lexicographically least relabelled block list.  Automorphisms found along the
way prune branches that would repeat an explored subtree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Callable, Iterable, Iterator, Optional, Sequence

import numpy as np

from blockopt.arboreal import spanning_tree_count
from blockopt.design import BlockDesign, DesignError, concurrence_matrix
from blockopt.electrical import design_vbar
from blockopt.graphs import concurrence_graph, edge_connectivity, is_connected, is_unicyclic
from blockopt.spectral import TIE_RTOL, Criterion, CriteriaReport, Kind, criteria

CANON_CAP = 16
DEFAULT_RAW_CAP = 10 ** 8

Blocks = tuple[tuple[int, ...], ...]


class SearchCapError(DesignError):
    """Raised when a search space exceeds its configured size cap."""


# -- canonical labelling ---------------------------------------------------------------


class _Canon:
    def __init__(self, v: int, blocks: Sequence[Sequence[int]]):
        self.v = v
        self.blocks = [tuple(t - 1 for t in blk) for blk in blocks]
        occ = [[] for _ in range(v)]
        for bi, blk in enumerate(self.blocks):
            for t in set(blk):
                occ[t].append((bi, blk.count(t)))
        self.occ = occ
        self.block_set = sorted(self.blocks)
        self.best: Optional[Blocks] = None
        self.best_perm: Optional[list[int]] = None
        self.leaves_at_best = 0
        self.gens: list[list[int]] = []

    def refine(self, col: list[int]) -> list[int]:
        blocks, occ = self.blocks, self.occ
        ncol = len(set(col))
        while True:
            bsig = [tuple(sorted(col[t] for t in blk)) for blk in blocks]
            sig = [(col[t], tuple(sorted((bsig[bi], m) for bi, m in occ[t]))) for t in range(self.v)]
            ranks = {s: r for r, s in enumerate(sorted(set(sig)))}
            col = [ranks[s] for s in sig]
            if len(ranks) == ncol:
                return col
            ncol = len(ranks)

    def key_of(self, col: list[int]) -> Blocks:
        return tuple(sorted(tuple(sorted(col[t] + 1 for t in blk)) for blk in self.blocks))

    def is_automorphism(self, perm: Sequence[int]) -> bool:
        return sorted(tuple(sorted(perm[t] for t in blk)) for blk in self.blocks) == self.block_set

    def twin_generators(self, col: list[int]) -> None:
        """Transpositions of interchangeable treatments are automorphisms; seed them."""
        base = list(range(self.v))
        cells = {}
        for t, c in enumerate(col):
            cells.setdefault(c, []).append(t)
        for cell in cells.values():
            for x in range(len(cell) - 1):
                a, c = cell[x], cell[x + 1]
                perm = base[:]
                perm[a], perm[c] = c, a
                if self.is_automorphism(perm):
                    self.gens.append(perm)

    def search(self, col: list[int], prefix: list[int], count_all: bool) -> None:
        col = self.refine(col)
        if len(set(col)) == self.v:
            key = self.key_of(col)
            if self.best is None or key < self.best:
                self.best, self.best_perm, self.leaves_at_best = key, col, 1
            elif key == self.best:
                self.leaves_at_best += 1
                if not count_all:
                    # col and best_perm relabel onto the same design
                    inv = {c: t for t, c in enumerate(self.best_perm)}
                    gamma = [inv[c] for c in col]
                    if gamma != list(range(self.v)):
                        self.gens.append(gamma)
            return
        cells: dict[int, list[int]] = {}
        for t, c in enumerate(col):
            cells.setdefault(c, []).append(t)
        target = min((c for c, mem in cells.items() if len(mem) > 1),
                     key=lambda c: (len(cells[c]), c))
        explored: list[int] = []
        for t in cells[target]:
            if not count_all and explored and self._same_orbit(t, explored, prefix):
                continue
            explored.append(t)
            child = [2 * c for c in col]
            child[t] -= 1
            self.search(child, prefix + [t], count_all)

    def _same_orbit(self, t: int, explored: list[int], prefix: list[int]) -> bool:
        parent = list(range(self.v))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in self.gens:
            if all(g[p] == p for p in prefix):
                for x in range(self.v):
                    a, c = find(x), find(g[x])
                    if a != c:
                        parent[a] = c
        rt = find(t)
        return any(find(e) == rt for e in explored)


def canonical_blocks(d: BlockDesign) -> Blocks:
    """Canonical block tuple: equal for two designs iff they are isomorphic."""
    if d.v > CANON_CAP:
        raise SearchCapError(f"canonical labelling is capped at v = {CANON_CAP}")
    c = _Canon(d.v, d.blocks)
    root = c.refine([0] * d.v)
    c.twin_generators(root)
    c.search(root, [], count_all=False)
    return c.best


def canonical_design(d: BlockDesign) -> BlockDesign:
    return BlockDesign(d.v, canonical_blocks(d))


def automorphism_group_size(d: BlockDesign) -> int:
    """Order of the treatment-relabelling automorphism group (unpruned leaf count)."""
    if d.v > CANON_CAP:
        raise SearchCapError(f"canonical labelling is capped at v = {CANON_CAP}")
    c = _Canon(d.v, d.blocks)
    c.search([0] * d.v, [], count_all=True)
    return c.leaves_at_best


def canonical_form(d: BlockDesign, group: bool = False) -> tuple[str, Optional[int]]:
    """Canonical design-file text, and the automorphism group order when ``group`` is set."""
    from blockopt.design import format_design

    text = format_design(canonical_design(d))
    return text, (automorphism_group_size(d) if group else None)


# -- enumeration -----------------------------------------------------------------------


@dataclass(frozen=True)
class SearchSpace:
    v: int
    b: int
    k: int
    binary_only: bool = False
    equireplicate_only: bool = False
    regular_graph_only: bool = False
    unicyclic_only: bool = False
    max_multiplicity: Optional[int] = None
    raw_cap: int = DEFAULT_RAW_CAP
    override_caps: bool = False

    def __post_init__(self):
        if self.k < 2 or self.v < 2 or self.b < 1:
            raise DesignError("search needs v >= 2, b >= 1, k >= 2")
        if self.equireplicate_only and (self.b * self.k) % self.v:
            raise DesignError("no equireplicate design: v does not divide bk")
        limit = 14 if (self.binary_only and self.equireplicate_only) else 10
        if self.v > limit and not self.override_caps:
            raise SearchCapError(f"v = {self.v} exceeds the cap {limit} for this space")

    def block_candidates(self) -> list[tuple[int, ...]]:
        out = []
        for blk in combinations_with_replacement(range(1, self.v + 1), self.k):
            if blk[0] == blk[-1]:
                continue
            if self.binary_only and len(set(blk)) < self.k:
                continue
            out.append(blk)
        return out

    def accepts(self, d: BlockDesign) -> bool:
        if self.regular_graph_only:
            lam = concurrence_matrix(d)
            off = lam[~np.eye(d.v, dtype=bool)]
            if off.max() - off.min() > 1:
                return False
        if self.unicyclic_only and not is_unicyclic(concurrence_graph(d)):
            return False
        return True


def estimated_classes(space: SearchSpace) -> int:
    """Block multisets over the candidate blocks divided by v!, rounded up."""
    from math import comb, factorial
    raw = comb(len(space.block_candidates()) + space.b - 1, space.b)
    return -(-raw // factorial(space.v))


def _restricted_growth_designs(space: SearchSpace, first: Optional[int] = None) -> Iterator[Blocks]:
    """Sorted block lists whose treatment labels first appear in order 1, 2, 3, ...

    Every isomorphism class has such a representative (its lexicographically
    least relabelling), so deduplicating these by canonical form is complete.
    Partial lists that can no longer become connected are pruned.
    """
    v, b, k = space.v, space.b, space.k
    cands = space.block_candidates()
    r_cap = space.b * space.k // v if space.equireplicate_only else None
    mm = space.max_multiplicity
    rep = [0] * (v + 1)
    lam = [[0] * (v + 1) for _ in range(v + 1)]
    parent = list(range(v + 1))
    chosen: list[tuple[int, ...]] = []

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    def rec(start: int, m: int, comps: int):
        depth = len(chosen)
        if depth == b:
            if m == v and comps == 1:
                if r_cap is None or all(rep[t] == r_cap for t in range(1, v + 1)):
                    yield tuple(chosen)
            return
        left = b - depth
        lo = start if depth else (first if first is not None else 0)
        hi = len(cands) if (depth or first is None) else first + 1
        for ci in range(lo, hi):
            blk = cands[ci]
            if blk[-1] > m:
                new = sorted({t for t in blk if t > m})
                if new[0] != m + 1 or new[-1] != m + len(new):
                    continue
                m2 = new[-1]
            else:
                m2 = m
            # components over all v treatments, unused ones isolated
            roots_before = {find(t) for t in set(blk)}
            comps2 = comps - (len(roots_before) - 1)
            if comps2 - 1 > (left - 1) * (k - 1):
                continue
            if r_cap is not None and any(rep[t] + blk.count(t) > r_cap for t in set(blk)):
                continue
            if mm is not None:
                bad = False
                for x in range(k):
                    for y in range(x + 1, k):
                        a, c = blk[x], blk[y]
                        if a != c and lam[a][c] + 1 > mm:
                            bad = True
                if bad:
                    continue
            # apply
            saved = parent[:]
            for t in blk:
                rep[t] += 1
            for x in range(k):
                for y in range(x + 1, k):
                    a, c = blk[x], blk[y]
                    if a != c:
                        lam[a][c] += 1
                        lam[c][a] += 1
            rts = list(roots_before)
            for rt in rts[1:]:
                parent[rt] = rts[0]
            chosen.append(blk)
            yield from rec(ci, m2, comps2)
            chosen.pop()
            parent[:] = saved
            for t in blk:
                rep[t] -= 1
            for x in range(k):
                for y in range(x + 1, k):
                    a, c = blk[x], blk[y]
                    if a != c:
                        lam[a][c] -= 1
                        lam[c][a] -= 1

    yield from rec(0, 0, v)


def _partition_worker(args) -> list[Blocks]:
    space, first = args
    found = set()
    for blocks in _restricted_growth_designs(space, first):
        d = BlockDesign(space.v, blocks)
        if space.accepts(d):
            found.add(canonical_blocks(d))
    return list(found)


def enumerate_designs(space: SearchSpace, workers: int = 1) -> list[BlockDesign]:
    """Every connected design in ``space`` once per isomorphism class, in canonical order."""
    est = estimated_classes(space)
    if est > space.raw_cap and not space.override_caps:
        raise SearchCapError(f"about {est} classes estimated, above the cap {space.raw_cap}")
    # restricted growth forces the first block to use labels 1..t only
    firsts = [i for i, blk in enumerate(space.block_candidates())
              if sorted(set(blk)) == list(range(1, len(set(blk)) + 1))]
    jobs = [(space, f) for f in firsts]
    found: set[Blocks] = set()
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(workers) as pool:
            for part in pool.map(_partition_worker, jobs):
                found.update(part)
    else:
        for job in jobs:
            found.update(_partition_worker(job))
    return [BlockDesign(space.v, blocks) for blocks in sorted(found)]


# -- ranking ---------------------------------------------------------------------------


@dataclass
class Ranked:
    design: BlockDesign
    report: CriteriaReport
    _trees: Optional[int] = field(default=None, repr=False)
    _vbar: Optional[Fraction] = field(default=None, repr=False)

    @property
    def trees(self) -> int:
        if self._trees is None:
            self._trees = spanning_tree_count(concurrence_graph(self.design))
        return self._trees

    @property
    def vbar_exact(self) -> Fraction:
        if self._vbar is None:
            self._vbar = design_vbar(self.design)
        return self._vbar

    @property
    def edge_connectivity(self) -> int:
        return edge_connectivity(concurrence_graph(self.design))


class TieToleranceError(AssertionError):
    """Raised when designs within the tie tolerance turn out to differ exactly."""


@dataclass
class RankedResult:
    criterion: Criterion
    entries: list[Ranked]
    tie_groups: list[list[int]]

    @property
    def best(self) -> list[Ranked]:
        return [self.entries[i] for i in self.tie_groups[0]]

    def position(self, d: BlockDesign) -> int:
        """Zero-based tie-group rank of a design (isomorphism aware)."""
        key = canonical_blocks(d)
        for gi, grp in enumerate(self.tie_groups):
            for i in grp:
                if canonical_blocks(self.entries[i].design) == key:
                    return gi
        raise KeyError("design not in this ranking")

    def to_csv(self, top: Optional[int] = None) -> str:
        lines = ["rank,canonical,A,D,E,edge_connectivity,tree_count"]
        for gi, grp in enumerate(self.tie_groups):
            for i in grp:
                e = self.entries[i]
                canon = "|".join(" ".join(map(str, blk)) for blk in e.design.blocks)
                r = e.report
                lines.append(f"{gi + 1},{canon},{r.A_value:.12g},{r.D_value:.12g},{r.E_value:.12g},"
                             f"{e.edge_connectivity},{e.trees}")
            if top is not None and gi + 1 >= top:
                break
        return "\n".join(lines) + "\n"


def _close(a: float, b: float) -> bool:
    return abs(a - b) <= TIE_RTOL * max(abs(a), abs(b), 1.0)


def rank(designs: Iterable[BlockDesign], criterion: Criterion) -> RankedResult:
    """Sort designs best-first and group ties at relative tolerance ``TIE_RTOL``.

    D ties are confirmed with exact tree counts and A ties with exact average
    variances; a mismatch raises ``TieToleranceError``.
    """
    entries = [Ranked(d, criteria(d)) for d in designs]
    entries.sort(key=lambda e: (criterion.key(e.report), e.design.blocks))
    groups: list[list[int]] = []
    for i, e in enumerate(entries):
        if groups and _close(criterion.value(entries[groups[-1][0]].report), criterion.value(e.report)):
            groups[-1].append(i)
        else:
            groups.append([i])
    for grp in groups:
        if len(grp) < 2:
            continue
        head = entries[grp[0]]
        for i in grp[1:]:
            other = entries[i]
            if criterion.kind is Kind.D and head.trees != other.trees:
                raise TieToleranceError("D tie at 1e-9 but tree counts differ")
            if criterion.kind is Kind.A and head.vbar_exact != other.vbar_exact:
                raise TieToleranceError("A tie at 1e-9 but exact average variances differ")
    return RankedResult(criterion, entries, groups)


def optimize(space: SearchSpace, criterion: Criterion, workers: int = 1) -> RankedResult:
    return rank(enumerate_designs(space, workers), criterion)


def isomorphic(d1: BlockDesign, d2: BlockDesign) -> bool:
    return d1.v == d2.v and d1.b == d2.b and d1.k == d2.k and canonical_blocks(d1) == canonical_blocks(d2)


# -- theorem registry ------------------------------------------------------------------


@dataclass
class TheoremReport:
    name: str
    passed: bool = True
    lines: list[str] = field(default_factory=list)

    def expect(self, ok: bool, msg: str) -> None:
        self.lines.append(("ok    " if ok else "FAIL  ") + msg)
        self.passed = self.passed and ok

    def __str__(self) -> str:
        head = f"{self.name}: {'pass' if self.passed else 'FAIL'}"
        return "\n".join([head] + ["  " + ln for ln in self.lines])


def _canon_set(designs: Iterable[BlockDesign]) -> set:
    return {canonical_blocks(d) for d in designs}


def _top(result: RankedResult) -> set:
    return _canon_set(e.design for e in result.best)


def _check_tree_case(vs=range(3, 8)) -> TheoremReport:
    from blockopt.families import star
    from blockopt.spectral import A, D, E

    rep = TheoremReport("tree_case")
    for v in vs:
        designs = enumerate_designs(SearchSpace(v, v - 1, 2))
        want = _canon_set([star(v)])
        rep.expect(_top(rank(designs, A)) == want, f"v={v}: the star is the unique A-optimum")
        rep.expect(_top(rank(designs, E)) == want, f"v={v}: the star is the unique E-optimum")
        rd = rank(designs, D)
        rep.expect(len(rd.tie_groups) == 1 and all(e.trees == 1 for e in rd.entries),
                   f"v={v}: all {len(designs)} trees tie on D")
    return rep


def _check_unicyclic(vs=range(6, 11)) -> TheoremReport:
    from blockopt.families import (a_optimal_cycle_length, cycle, cycle_with_leaves,
                                   doubled_star, g_small)
    from blockopt.spectral import A, D, E

    rep = TheoremReport("unicyclic")
    for v in vs:
        designs = enumerate_designs(SearchSpace(v, v, 2))
        rep.expect(_top(rank(designs, D)) == _canon_set([cycle(v)]), f"v={v}: D-optimum is the cycle")
        want_a = _canon_set(cycle_with_leaves(s, v) for s in a_optimal_cycle_length(v))
        rep.expect(_top(rank(designs, A)) == want_a,
                   f"v={v}: A-optima are cycles of length {sorted(a_optimal_cycle_length(v))} with leaves")
        if v <= 5:
            want_e = [cycle(v)]
        elif v == 6:
            want_e = [cycle(v), cycle_with_leaves(3, v), doubled_star(v)]
        else:
            want_e = [cycle_with_leaves(3, v), doubled_star(v)]
        rep.expect(_top(rank(designs, E)) == _canon_set(want_e), f"v={v}: E-optima as predicted")
    rep.expect(g_small(3, 12) == g_small(4, 12) == 1356, "v=12: g(3) = g(4) = 1356, an exact A tie")
    return rep


def _check_bridge(vs=range(3, 9), extras=(0, 1)) -> TheoremReport:
    from blockopt.graphs import bridges
    from blockopt.spectral import D

    rep = TheoremReport("bridge")
    for v in vs:
        for extra in extras:
            top = rank(enumerate_designs(SearchSpace(v, v + extra, 2)), D).best
            ok = all(not bridges(concurrence_graph(e.design)) for e in top)
            rep.expect(ok, f"v={v}, b={v + extra}: {len(top)} D-optimal design(s), none has a bridge")
    return rep


def _check_levi_tree(pairs=((3, 3), (4, 3), (3, 4))) -> TheoremReport:
    from blockopt.families import queen_bee
    from blockopt.spectral import A, D, E

    rep = TheoremReport("levi_tree")
    for b, k in pairs:
        v = b * (k - 1) + 1
        designs = enumerate_designs(SearchSpace(v, b, k))
        want = _canon_set([queen_bee(b, k)])
        rep.expect(_top(rank(designs, A)) == want, f"(b,k)=({b},{k}): queen-bee is the unique A-optimum")
        rep.expect(_top(rank(designs, E)) == want, f"(b,k)=({b},{k}): queen-bee is the unique E-optimum")
        rep.expect(len(rank(designs, D).tie_groups) == 1, f"(b,k)=({b},{k}): all {len(designs)} designs tie on D")
    return rep


def _check_levi_unicyclic(pairs=((3, 3), (4, 3), (5, 3))) -> TheoremReport:
    from blockopt.families import a_optimal_s, c_family
    from blockopt.spectral import A, D, E

    rep = TheoremReport("levi_unicyclic")
    for b, k in pairs:
        v = b * (k - 1)
        designs = enumerate_designs(SearchSpace(v, b, k))
        rep.expect(_top(rank(designs, D)) == _canon_set([c_family(b, k, b)]),
                   f"(b,k)=({b},{k}): D-optimum is C(b,k,b)")
        want_a = _canon_set(c_family(b, k, s) for s in a_optimal_s(b, k))
        rep.expect(_top(rank(designs, A)) == want_a,
                   f"(b,k)=({b},{k}): A-optimum is C(b,k,s) with s in {sorted(a_optimal_s(b, k))}")
        if b <= 4:
            want_e = [c_family(b, k, b)]
        else:
            want_e = [c_family(b, k, 2), c_family(b, k, 1, 1)]
            if k == 3:
                want_e.append(c_family(b, k, 1, 2))
        rep.expect(_top(rank(designs, E)) == _canon_set(want_e), f"(b,k)=({b},{k}): E-optima as predicted")
    return rep


def _check_kiefer(v=4, b=6, k=2, ps=(0.5, 1.0, 2.0, 10.0)) -> TheoremReport:
    from blockopt.families import complete
    from blockopt.spectral import A, D, E, Phi
    from blockopt.graphs import laplacian

    rep = TheoremReport("kiefer")
    designs = enumerate_designs(SearchSpace(v, b, k))
    bibd = _canon_set([complete(v)])
    for crit in (A, D, E) + tuple(Phi(p) for p in ps):
        res = rank(designs, crit)
        rep.expect(bibd <= _top(res), f"({v},{b},{k}): the BIBD is {crit}-optimal")
    traces = [(int(np.trace(laplacian(concurrence_graph(d)))), all(len(set(blk)) == k for blk in d.blocks))
              for d in designs]
    top_trace = max(t for t, _ in traces)
    rep.expect(any(bin_ and t == top_trace for t, bin_ in traces),
               f"({v},{b},{k}): a binary design attains the largest Tr(L) = {top_trace}")
    return rep


THEOREMS: dict[str, Callable[..., TheoremReport]] = {
    "tree_case": _check_tree_case,
    "unicyclic": _check_unicyclic,
    "bridge": _check_bridge,
    "levi_tree": _check_levi_tree,
    "levi_unicyclic": _check_levi_unicyclic,
    "kiefer": _check_kiefer,
}


def theorem_checks(name: str, **scope) -> TheoremReport:
    """Run a named exhaustive check; ``scope`` narrows or widens the default parameters."""
    try:
        fn = THEOREMS[name]
    except KeyError:
        raise KeyError(f"unknown theorem check {name!r}; choose from {sorted(THEOREMS)}") from None
    return fn(**scope)
