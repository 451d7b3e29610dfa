"""Block designs, their incidence and concurrence matrices, and classification predicates.

Treatments are labelled ``1..v``.  A design is stored as a sorted tuple of
sorted blocks, so two designs that differ only by the order of units within a
block, or by the order of the blocks, compare equal.
"""

from __future__ import annotations

import warnings
from collections import Counter
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Optional, Sequence

import numpy as np


class DesignError(ValueError):
    """Raised for malformed design input or a violated design precondition."""


@dataclass(frozen=True)
class BlockDesign:
    v: int
    blocks: tuple[tuple[int, ...], ...]

    def __init__(self, v: int, blocks: Iterable[Iterable[int]]):
        blocks = [tuple(sorted(int(t) for t in blk)) for blk in blocks]
        if v < 2:
            raise DesignError(f"need at least 2 treatments, got v={v}")
        if not blocks:
            raise DesignError("a design needs at least one block")
        k = len(blocks[0])
        for j, blk in enumerate(blocks, 1):
            if len(blk) != k:
                raise DesignError(f"block {j} has {len(blk)} units, expected k={k}")
            if blk[0] < 1 or blk[-1] > v:
                raise DesignError(f"block {j} has a treatment label outside 1..{v}")
            if blk[0] == blk[-1]:
                raise DesignError(f"block {j} is constant (treatment {blk[0]} only)")
        object.__setattr__(self, "v", int(v))
        object.__setattr__(self, "blocks", tuple(sorted(blocks)))

    @property
    def b(self) -> int:
        return len(self.blocks)

    @property
    def k(self) -> int:
        return len(self.blocks[0])

    @property
    def replication(self) -> np.ndarray:
        r = np.zeros(self.v, dtype=np.int64)
        for blk in self.blocks:
            for t in blk:
                r[t - 1] += 1
        return r

    @property
    def is_complete_block(self) -> bool:
        return self.k >= self.v

    def relabel(self, perm: Sequence[int]) -> "BlockDesign":
        """Apply ``t -> perm[t-1]`` (a permutation of ``1..v``) to every treatment."""
        return BlockDesign(self.v, [[perm[t - 1] for t in blk] for blk in self.blocks])

    def add_block(self, block: Iterable[int]) -> "BlockDesign":
        return BlockDesign(self.v, list(self.blocks) + [tuple(block)])

    def __str__(self) -> str:
        return format_design(self)


def parse_design(text: str) -> BlockDesign:
    """Parse the plain-text design format.

    The first non-comment line is ``v b k``; then exactly ``b`` lines of ``k``
    treatment labels each.  ``#`` starts a comment and blank lines are ignored.
    """
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise DesignError("empty design file")
    header = lines[0].split()
    if len(header) != 3:
        raise DesignError(f"malformed header {lines[0]!r}: expected 'v b k'")
    try:
        v, b, k = (int(x) for x in header)
    except ValueError:
        raise DesignError(f"malformed header {lines[0]!r}: expected integers") from None
    if v < 2 or b < 1 or k < 2:
        raise DesignError(f"malformed header: need v >= 2, b >= 1, k >= 2, got {v} {b} {k}")
    rows = lines[1:]
    if len(rows) != b:
        raise DesignError(f"header declares {b} blocks but {len(rows)} block lines follow")
    blocks = []
    for j, row in enumerate(rows, 1):
        try:
            blk = [int(x) for x in row.split()]
        except ValueError:
            raise DesignError(f"block {j}: non-integer label in {row!r}") from None
        if len(blk) != k:
            raise DesignError(f"block {j} has {len(blk)} units, expected k={k}")
        blocks.append(blk)
    d = BlockDesign(v, blocks)
    if d.is_complete_block:
        warnings.warn(f"k={k} >= v={v}: complete blocks", UserWarning, stacklevel=2)
    return d


def format_design(d: BlockDesign) -> str:
    out = [f"{d.v} {d.b} {d.k}"]
    out.extend(" ".join(map(str, blk)) for blk in d.blocks)
    return "\n".join(out) + "\n"


def incidence_matrix(d: BlockDesign) -> np.ndarray:
    """v x b matrix whose (i, j) entry counts treatment i+1 in block j."""
    n = np.zeros((d.v, d.b), dtype=np.int64)
    for j, blk in enumerate(d.blocks):
        for t in blk:
            n[t - 1, j] += 1
    return n


def concurrence_matrix(d: BlockDesign) -> np.ndarray:
    n = incidence_matrix(d)
    return n @ n.T


def block_defects(d: BlockDesign) -> tuple[list[int], int]:
    """Per-block defects and their sum.

    The defect of a block is ``k(k-1)/2`` minus the number of pairs of its
    units that receive different treatments.
    """
    defects = [sum(comb(c, 2) for c in Counter(blk).values()) for blk in d.blocks]
    return defects, sum(defects)


@dataclass(frozen=True)
class BIBDConditions:
    v_divides_bk: bool
    pairs_divide: bool
    fisher: bool

    @property
    def all_hold(self) -> bool:
        return self.v_divides_bk and self.pairs_divide and self.fisher


@dataclass(frozen=True)
class GroupDivisible:
    groups: int
    group_size: int
    lambda1: int
    lambda2: int


@dataclass(frozen=True)
class DesignClassification:
    binary: bool
    equireplicate: bool
    balanced: bool
    variance_balanced: bool
    queen_bee: bool
    regular_graph_design: bool
    group_divisible: Optional[GroupDivisible]
    nearly_balanced: bool
    connected: bool
    complete_blocks: bool
    bibd_conditions: BIBDConditions
    lam: Optional[int] = field(default=None)


def bibd_conditions(v: int, b: int, k: int) -> BIBDConditions:
    return BIBDConditions(
        v_divides_bk=(b * k) % v == 0,
        pairs_divide=(b * k * (k - 1)) % (v * (v - 1)) == 0,
        fisher=b >= v,
    )


def _offdiag(lam: np.ndarray) -> np.ndarray:
    v = lam.shape[0]
    return lam[~np.eye(v, dtype=bool)]


def group_divisible_partition(lam: np.ndarray) -> Optional[GroupDivisible]:
    """Find a partition into >= 2 equal groups of size >= 2 with two concurrence levels.

    Pairs inside a group concur ``lambda1`` times and pairs across groups
    ``lambda2`` times, with ``lambda1 != lambda2``.  The within-group relation
    is forced once ``lambda1`` is fixed, so each candidate value is checked
    directly.
    """
    v = lam.shape[0]
    values = sorted(set(_offdiag(lam).tolist()))
    if len(values) != 2:
        return None
    for lam1, lam2 in (values, values[::-1]):
        same = (lam == lam1)
        np.fill_diagonal(same, True)
        groups = []
        seen = set()
        ok = True
        for i in range(v):
            if i in seen:
                continue
            grp = frozenset(np.flatnonzero(same[i]).tolist())
            for j in grp:
                if frozenset(np.flatnonzero(same[j]).tolist()) != grp:
                    ok = False
                    break
            if not ok:
                break
            seen |= grp
            groups.append(grp)
        if not ok:
            continue
        sizes = {len(g) for g in groups}
        if len(sizes) == 1 and len(groups) >= 2 and min(sizes) >= 2:
            return GroupDivisible(len(groups), sizes.pop(), int(lam1), int(lam2))
    return None


def classify(d: BlockDesign) -> DesignClassification:
    from blockopt.graphs import concurrence_graph, is_connected

    lam = concurrence_matrix(d)
    off = _offdiag(lam)
    r = d.replication
    binary = all(len(set(blk)) == len(blk) for blk in d.blocks)
    equireplicate = bool(np.all(r == r[0]))
    variance_balanced = bool(off.size and np.all(off == off[0]))
    balanced = binary and variance_balanced
    queen_bee = bool(set.intersection(*(set(blk) for blk in d.blocks)))
    spread = int(off.max() - off.min()) if off.size else 0
    rgd = binary and equireplicate and spread <= 1
    nearly = int(r.max() - r.min()) <= 1
    if nearly:
        for i in range(d.v):
            row = np.delete(lam[i], i)
            if row.max() - row.min() > 1:
                nearly = False
                break
    return DesignClassification(
        binary=binary,
        equireplicate=equireplicate,
        balanced=balanced,
        variance_balanced=variance_balanced,
        queen_bee=queen_bee,
        regular_graph_design=rgd,
        group_divisible=group_divisible_partition(lam),
        nearly_balanced=nearly,
        connected=is_connected(concurrence_graph(d)),
        complete_blocks=d.is_complete_block,
        bibd_conditions=bibd_conditions(d.v, d.b, d.k),
        lam=int(off[0]) if variance_balanced else None,
    )
