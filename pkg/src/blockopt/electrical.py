"""Exact electrical networks on multigraphs, the concurrence <-> Levi transformation,
and random-walk formulas for effective resistance.

Every edge is a one-ohm resistor.  All arithmetic is in ``Fraction``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Optional

from blockopt import _exact
from blockopt.design import BlockDesign, DesignError
from blockopt.graphs import Multigraph, concurrence_graph, is_connected, levi_graph


class NetworkError(DesignError):
    """Raised when a network problem is ill-posed or a solution fails its checks."""


def _check_pair(g: Multigraph, i: int, j: int) -> None:
    if i == j:
        raise NetworkError("battery terminals must be distinct")
    if not (0 <= i < g.n and 0 <= j < g.n):
        raise NetworkError(f"terminal out of range 0..{g.n - 1}")
    if not is_connected(g):
        raise NetworkError("graph is disconnected")


@dataclass(frozen=True)
class NetworkSolution:
    """Voltages on vertices and per-edge-slot currents for a battery across ``source``/``sink``.

    ``currents[(u, w)]`` is the current from ``u`` to ``w`` in each single edge
    joining them; the total flowing from ``u`` to ``w`` is that times the
    multiplicity.
    """

    graph: Multigraph
    source: int
    sink: int
    voltages: tuple[Fraction, ...]
    currents: dict

    def current(self, u: int, w: int) -> Fraction:
        return self.currents.get((u, w), Fraction(0))

    def outflow(self, u: int) -> Fraction:
        m = self.graph.mult
        return sum((self.currents[(u, w)] * int(m[u, w]) for w in self.graph.neighbours(u)),
                   Fraction(0))

    @property
    def resistance(self) -> Fraction:
        return (self.voltages[self.source] - self.voltages[self.sink]) / self.outflow(self.source)

    def check(self) -> None:
        """Raise ``NetworkError`` unless antisymmetry, Ohm's law and Kirchhoff's current law hold."""
        g = self.graph
        for (u, w), c in self.currents.items():
            if g.mult[u, w] == 0:
                if c != 0:
                    raise NetworkError(f"current {c} on non-edge ({u}, {w})")
                continue
            if self.currents.get((w, u)) != -c:
                raise NetworkError(f"current not antisymmetric on ({u}, {w})")
            if c != self.voltages[u] - self.voltages[w]:
                raise NetworkError(f"Ohm's law fails on ({u}, {w})")
        for u in range(g.n):
            for w in g.neighbours(u):
                if (u, w) not in self.currents:
                    raise NetworkError(f"no current recorded on edge ({u}, {w})")
        for u in range(g.n):
            if u not in (self.source, self.sink) and self.outflow(u) != 0:
                raise NetworkError(f"Kirchhoff's current law fails at vertex {u}")
        out = self.outflow(self.source)
        if out == 0 or self.outflow(self.sink) != -out:
            raise NetworkError("battery terminals do not carry opposite non-zero currents")

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for x in self.voltages) and \
            all(x.denominator == 1 for x in self.currents.values())


def _currents_from_voltages(g: Multigraph, volts) -> dict:
    cur = {}
    for u in range(g.n):
        for w in g.neighbours(u):
            cur[(u, w)] = volts[u] - volts[w]
    return cur


def _grounded_solve(g: Multigraph, ground: int, rhs: dict) -> list[Fraction]:
    """Solve ``L x = rhs`` with ``x[ground] = 0``."""
    keep = [u for u in range(g.n) if u != ground]
    m = g.mult
    deg = g.degrees
    rows = [[(int(deg[u]) if u == w else -int(m[u, w])) for w in keep] for u in keep]
    sol = _exact.solve(rows, [rhs.get(u, 0) for u in keep])
    x = [Fraction(0)] * g.n
    for u, val in zip(keep, sol):
        x[u] = val
    return x


def solve_network(g: Multigraph, i: int, j: int, integral: bool = True) -> NetworkSolution:
    """Current/voltage pair with ``V(i) = 0`` and current flowing from ``i`` to ``j``.

    With ``integral`` the solution is rescaled by the least common denominator
    so that all voltages and currents are integers.
    """
    _check_pair(g, i, j)
    # unit current in at i, out at j, grounded at i
    volts = _grounded_solve(g, i, {i: 1, j: -1})
    if integral:
        scale = lcm(*(val.denominator for val in volts))
        volts = [val * scale for val in volts]
    sol = NetworkSolution(g, i, j, tuple(volts), _currents_from_voltages(g, volts))
    return sol


def effective_resistance(g: Multigraph, i: int, j: int) -> Fraction:
    return solve_network(g, i, j, integral=False).resistance


def grounded_inverse(g: Multigraph) -> list[list[Fraction]]:
    """Inverse of the Laplacian with the last vertex deleted, padded with a zero row/column."""
    if not is_connected(g):
        raise NetworkError("graph is disconnected")
    n = g.n
    m = g.mult
    deg = g.degrees
    rows = [[(int(deg[u]) if u == w else -int(m[u, w])) for w in range(n - 1)] for u in range(n - 1)]
    inv = _exact.inverse(rows) if n > 1 else []
    return [row + [Fraction(0)] for row in inv] + [[Fraction(0)] * n]


def resistance_matrix(g: Multigraph) -> list[list[Fraction]]:
    """All pairwise effective resistances from one grounded inverse."""
    h = grounded_inverse(g)
    n = g.n
    return [[h[a][a] + h[c][c] - 2 * h[a][c] for c in range(n)] for a in range(n)]


def resistance_sum(g: Multigraph) -> Fraction:
    """Sum of ``R_ij`` over unordered pairs of distinct vertices."""
    h = grounded_inverse(g)
    n = g.n
    tr = sum((h[a][a] for a in range(n)), Fraction(0))
    tot = sum((x for row in h for x in row), Fraction(0))
    return n * tr - tot


def design_vbar(d: BlockDesign) -> Fraction:
    """Exact average pairwise variance (units of sigma^2): ``k * 2 * sum R_ij / (v(v-1))``."""
    g = concurrence_graph(d)
    return Fraction(2 * d.k) * resistance_sum(g) / (d.v * (d.v - 1))


def tjur_lift(d: BlockDesign, sol: NetworkSolution) -> NetworkSolution:
    """Transform a solution on the concurrence graph into one on the Levi graph.

    Treatment voltages are multiplied by ``k``, each block gets the sum of the
    voltages of its units' treatments, and the current from a unit's treatment
    into its block is the total current that unit sends to the rest of the
    block.  The result is checked, and its resistance is ``k`` times the input's.
    """
    g = concurrence_graph(d)
    if sol.graph != g:
        raise NetworkError("solution is not on this design's concurrence graph")
    sol.check()
    v, k = d.v, d.k
    levi = levi_graph(d)
    volts = [k * sol.voltages[t] for t in range(v)]
    currents = {}
    for jb, blk in enumerate(d.blocks):
        gamma = v + jb
        volts.append(sum((sol.voltages[t - 1] for t in blk), Fraction(0)))
        for t in set(blk):
            into = sum((sol.current(t - 1, w - 1) for w in blk if w != t), Fraction(0))
            currents[(t - 1, gamma)] = into
            currents[(gamma, t - 1)] = -into
    lifted = NetworkSolution(levi, sol.source, sol.sink, tuple(volts), currents)
    lifted.check()
    if lifted.resistance != k * sol.resistance:
        raise NetworkError("lifted resistance is not k times the concurrence resistance")
    return lifted


def tjur_project(d: BlockDesign, sol: NetworkSolution) -> NetworkSolution:
    """Inverse of :func:`tjur_lift`: divide treatment voltages by ``k`` and drop block vertices."""
    v, k = d.v, d.k
    levi = levi_graph(d)
    if sol.graph != levi:
        raise NetworkError("solution is not on this design's Levi graph")
    if sol.source >= v or sol.sink >= v:
        raise NetworkError("battery vertices must be treatment vertices")
    sol.check()
    volts = [sol.voltages[t] / k for t in range(v)]
    g = concurrence_graph(d)
    for jb, blk in enumerate(d.blocks):
        if sol.voltages[v + jb] != sum((volts[t - 1] for t in blk), Fraction(0)):
            raise NetworkError(f"block {jb + 1} voltage is not the sum of its treatment voltages")
        for t in set(blk):
            into = sum((volts[t - 1] - volts[w - 1] for w in blk), Fraction(0))
            if into != sol.current(t - 1, v + jb):
                raise NetworkError("Levi current is not the projected within-block current")
    projected = NetworkSolution(g, sol.source, sol.sink, tuple(volts), _currents_from_voltages(g, volts))
    projected.check()
    return projected


def _chain_rows(g: Multigraph, states: list[int]) -> list[list[int]]:
    # rows of I - P restricted to ``states``, each multiplied by the degree to stay integral
    m, deg = g.mult, g.degrees
    return [[(int(deg[u]) if u == w else 0) - int(m[u, w]) for w in states] for u in states]


def escape_probability(g: Multigraph, i: int, j: int) -> Fraction:
    """Probability that a walk from ``i`` reaches ``j`` before returning to ``i``."""
    _check_pair(g, i, j)
    m, deg = g.mult, g.degrees
    free = [u for u in range(g.n) if u not in (i, j)]
    # h(u) = P(hit j before i | start u); h(i) = 0, h(j) = 1
    h = dict(zip(free, _exact.solve(_chain_rows(g, free), [int(m[u, j]) for u in free]) if free else []))
    h[i], h[j] = Fraction(0), Fraction(1)
    return sum((int(m[i, w]) * h[w] for w in range(g.n)), Fraction(0)) / int(deg[i])


def sojourn(g: Multigraph, i: int, j: int) -> Fraction:
    """Expected number of visits to ``i`` (counting the start) of a walk from ``i`` before it hits ``j``."""
    _check_pair(g, i, j)
    live = [u for u in range(g.n) if u != j]
    # column i of (I - Q)^{-1}; its i-th entry is the expected visit count
    d_i = int(g.degrees[i])
    x = _exact.solve(_chain_rows(g, live), [d_i if u == i else 0 for u in live])
    return x[live.index(i)]


def random_walk_resistance(g: Multigraph, i: int, j: int) -> tuple[Fraction, Fraction]:
    """``(1 / (d_i P_esc(i->j)), S_i(i, j) / d_i)``; both equal the effective resistance."""
    d_i = int(g.degrees[i])
    return 1 / (d_i * escape_probability(g, i, j)), sojourn(g, i, j) / d_i


def hitting_probability(g: Multigraph, i: int, j: int, l: int) -> Fraction:
    """Probability that a walk from ``l`` reaches ``i`` before ``j``."""
    _check_pair(g, i, j)
    if l == i:
        return Fraction(1)
    if l == j:
        return Fraction(0)
    free = [u for u in range(g.n) if u not in (i, j)]
    sol = _exact.solve(_chain_rows(g, free), [int(g.mult[u, i]) for u in free])
    return sol[free.index(l)]


def voltage_as_hitting_probability(g: Multigraph, i: int, j: int, l: int) -> Fraction:
    """Voltage at ``l`` with 1 V at ``i`` and 0 V at ``j``, checked against the walk probability."""
    _check_pair(g, i, j)
    x = _grounded_solve(g, j, {i: 1, j: -1})
    volt = x[l] / x[i]
    walk = hitting_probability(g, i, j, l)
    if volt != walk:
        raise NetworkError(f"voltage {volt} differs from hitting probability {walk}")
    return volt


def foster_checks(g: Multigraph, rmat: Optional[list] = None) -> tuple[Fraction, Fraction]:
    """Foster's two sums, which equal ``n - 1`` and ``n - 2`` for a connected graph.

    The first sums ``R`` over edge slots.  The second sums ``R_ij / d_h`` over
    two-edge paths ``i ~ h ~ j`` with ``i != j``, each pair of edge slots
    counted once.
    """
    r = rmat if rmat is not None else resistance_matrix(g)
    m = g.mult
    n = g.n
    deg = g.degrees
    first = sum((int(m[a, c]) * r[a][c] for a in range(n) for c in range(a + 1, n)), Fraction(0))
    second = Fraction(0)
    for h in range(n):
        nb = g.neighbours(h)
        acc = Fraction(0)
        for x, a in enumerate(nb):
            for c in nb[x + 1:]:
                acc += int(m[a, h]) * int(m[h, c]) * r[a][c]
        second += acc / int(deg[h])
    return first, second
