"""Loop-free multigraphs: concurrence and Levi graphs of a design, Laplacians, components."""

from __future__ import annotations

import io
from dataclasses import dataclass
from math import sqrt
from typing import Iterable, Optional, Sequence

import numpy as np

from blockopt.design import BlockDesign, DesignError, concurrence_matrix, incidence_matrix


@dataclass(frozen=True, eq=False)
class Multigraph:
    """Symmetric integer multiplicity matrix with zero diagonal.

    Vertices are ``0..n-1``; ``labels`` carries optional display names.
    """

    mult: np.ndarray
    labels: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        m = np.array(self.mult, dtype=np.int64)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("multiplicity matrix must be square")
        if np.any(np.diag(m) != 0):
            raise ValueError("loops are not allowed")
        if np.any(m != m.T) or np.any(m < 0):
            raise ValueError("multiplicities must be symmetric and non-negative")
        m.flags.writeable = False
        object.__setattr__(self, "mult", m)
        if self.labels is not None and len(self.labels) != m.shape[0]:
            raise ValueError("one label per vertex")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], labels=None) -> "Multigraph":
        m = np.zeros((n, n), dtype=np.int64)
        for i, j in edges:
            if i == j:
                raise ValueError(f"loop at vertex {i}")
            m[i, j] += 1
            m[j, i] += 1
        return cls(m, labels)

    @property
    def n(self) -> int:
        return self.mult.shape[0]

    @property
    def degrees(self) -> np.ndarray:
        return self.mult.sum(axis=1)

    @property
    def edge_count(self) -> int:
        return int(self.mult.sum() // 2)

    def edges(self) -> list[tuple[int, int]]:
        """Edge slots ``(i, j)`` with ``i < j``, repeated by multiplicity."""
        out = []
        n = self.n
        for i in range(n):
            for j in range(i + 1, n):
                out.extend([(i, j)] * int(self.mult[i, j]))
        return out

    def neighbours(self, i: int) -> list[int]:
        return np.flatnonzero(self.mult[i]).tolist()

    def with_edge(self, i: int, j: int, count: int = 1) -> "Multigraph":
        m = self.mult.copy()
        m[i, j] += count
        m[j, i] += count
        return Multigraph(m, self.labels)

    def __eq__(self, other) -> bool:
        return isinstance(other, Multigraph) and np.array_equal(self.mult, other.mult)

    def __hash__(self) -> int:
        return hash(self.mult.tobytes())

    def to_csv(self) -> str:
        labels = self.labels or tuple(str(i + 1) for i in range(self.n))
        buf = io.StringIO()
        buf.write(",".join(labels) + "\n")
        for row in self.mult:
            buf.write(",".join(str(int(x)) for x in row) + "\n")
        return buf.getvalue()


def concurrence_graph(d: BlockDesign) -> Multigraph:
    lam = concurrence_matrix(d)
    np.fill_diagonal(lam, 0)
    return Multigraph(lam, tuple(str(i) for i in range(1, d.v + 1)))


def levi_graph(d: BlockDesign) -> Multigraph:
    """Bipartite multigraph: treatments ``0..v-1`` then blocks ``v..v+b-1``."""
    n = incidence_matrix(d)
    v, b = n.shape
    m = np.zeros((v + b, v + b), dtype=np.int64)
    m[:v, v:] = n
    m[v:, :v] = n.T
    labels = tuple(str(i) for i in range(1, v + 1)) + tuple(f"B{j}" for j in range(1, b + 1))
    return Multigraph(m, labels)


def laplacian(g: Multigraph) -> np.ndarray:
    """Degree-diagonal minus multiplicity matrix (integer)."""
    return np.diag(g.degrees) - g.mult


def concurrence_laplacian(d: BlockDesign) -> np.ndarray:
    """Laplacian of the concurrence graph, checked against ``kR - N N^T``."""
    lap = laplacian(concurrence_graph(d))
    n = incidence_matrix(d)
    alt = d.k * np.diag(n.sum(axis=1)) - n @ n.T
    if not np.array_equal(lap, alt):
        raise AssertionError("concurrence Laplacian disagrees with kR - NN^T")
    return lap


def levi_laplacian(d: BlockDesign) -> np.ndarray:
    """Laplacian of the Levi graph, checked against the block form [[R, -N], [-N^T, kI]]."""
    lap = laplacian(levi_graph(d))
    n = incidence_matrix(d)
    alt = np.block([[np.diag(n.sum(axis=1)), -n], [-n.T, d.k * np.eye(d.b, dtype=np.int64)]])
    if not np.array_equal(lap, alt):
        raise AssertionError("Levi Laplacian disagrees with its block form")
    return lap


def components(g: Multigraph) -> list[list[int]]:
    seen = [False] * g.n
    out = []
    adj = [g.neighbours(i) for i in range(g.n)]
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        comp, stack = [s], [s]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    stack.append(w)
        out.append(sorted(comp))
    return out


def is_connected(g: Multigraph) -> bool:
    return len(components(g)) == 1


def distances(g: Multigraph, source: int) -> list[Optional[int]]:
    """Breadth-first distances from ``source`` (``None`` if unreachable)."""
    dist: list[Optional[int]] = [None] * g.n
    dist[source] = 0
    frontier = [source]
    while frontier:
        nxt = []
        for u in frontier:
            for w in g.neighbours(u):
                if dist[w] is None:
                    dist[w] = dist[u] + 1
                    nxt.append(w)
        frontier = nxt
    return dist


def edge_connectivity(g: Multigraph) -> int:
    """Minimum number of edges (with multiplicity) whose removal disconnects ``g``."""
    n = g.n
    if n < 2 or not is_connected(g):
        return 0
    m = g.mult
    best = None
    # vertex 0 fixed on one side; every cut appears once
    for mask in range(0, 1 << (n - 1)):
        side = [0] + [i + 1 for i in range(n - 1) if mask >> i & 1]
        if len(side) == n:
            continue
        other = [i for i in range(n) if i not in side]
        c = int(m[np.ix_(side, other)].sum())
        if best is None or c < best:
            best = c
    return best


def is_unicyclic(g: Multigraph) -> bool:
    return is_connected(g) and g.edge_count == g.n


def bridges(g: Multigraph) -> list[tuple[int, int]]:
    """Edges of multiplicity one whose removal disconnects ``g``."""
    out = []
    base = len(components(g))
    for i, j in set(g.edges()):
        if g.mult[i, j] == 1 and len(components(g.with_edge(i, j, -1))) > base:
            out.append((i, j))
    return sorted(out)


def pair_eigenvalues(r: int, k: int, phi: float) -> tuple[float, float]:
    """The two roots of ``(r - t)(k - t) = rk - phi``.

    Each concurrence-Laplacian eigenvalue ``phi != rk`` of an equireplicate
    design lifts to these two Levi-Laplacian eigenvalues.
    """
    if abs(phi - r * k) < 1e-12:
        raise DesignError("phi = rk is excluded from the eigenvalue pairing")
    # t^2 - (r + k) t + phi = 0
    s = r + k
    disc = s * s - 4 * phi
    if disc < 0:
        if disc > -1e-9:
            disc = 0.0
        else:
            raise DesignError(f"no real roots for phi={phi}")
    root = sqrt(disc)
    return ((s - root) / 2, (s + root) / 2)


def equireplication(d: BlockDesign) -> int:
    r = d.replication
    if not np.all(r == r[0]):
        raise DesignError("design is not equireplicate")
    return int(r[0])


def design_from_edges(v: int, edges: Sequence[tuple[int, int]]) -> BlockDesign:
    """Block-size-two design from 1-based edges; the design is its own concurrence graph."""
    return BlockDesign(v, [tuple(e) for e in edges])

