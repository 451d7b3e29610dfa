"""Named designs and graph families, and the closed-form average-variance polynomials.

Graphs are returned as block-size-two designs (one block per edge), so every
family goes through the same design pipeline.
"""

from __future__ import annotations

from fractions import Fraction
from math import cos, pi, sin, sqrt
from typing import Optional

from blockopt.design import BlockDesign, DesignError
from blockopt.graphs import design_from_edges

FIGURES = {
    "fig1a": (15, [(1, 2, 3), (1, 4, 7), (2, 5, 8), (3, 6, 9), (4, 10, 13), (5, 11, 14), (6, 12, 15)]),
    "fig1b": (15, [(1, 2, 3), (1, 4, 5), (1, 6, 7), (1, 8, 9), (1, 10, 11), (1, 12, 13), (1, 14, 15)]),
    "fig2a": (5, [(1, 2, 3), (1, 3, 4), (1, 3, 5), (1, 4, 5), (2, 3, 4), (2, 3, 5), (2, 4, 5)]),
    "fig2b": (5, [(1, 1, 2), (1, 3, 4), (1, 3, 5), (1, 4, 5), (2, 3, 4), (2, 3, 5), (2, 4, 5)]),
    "fig3a": (7, [(1, 2, 4), (2, 3, 5), (3, 4, 6), (4, 5, 7), (5, 6, 1), (6, 7, 2), (7, 1, 3)]),
    "fig3b": (7, [(1, 2, 3), (2, 3, 4), (3, 4, 5), (4, 5, 6), (5, 6, 7), (6, 7, 1), (7, 1, 2)]),
}


def figure(name: str) -> BlockDesign:
    if name == "fig7":
        return c_family(6, 3, 6)
    try:
        v, blocks = FIGURES[name]
    except KeyError:
        raise DesignError(f"unknown figure design {name!r}") from None
    return BlockDesign(v, blocks)


def fano() -> BlockDesign:
    return figure("fig3a")


def cycle(v: int) -> BlockDesign:
    if v < 2:
        raise DesignError("cycle needs v >= 2")
    return design_from_edges(v, [(i, i % v + 1) for i in range(1, v + 1)])


def path(v: int) -> BlockDesign:
    return design_from_edges(v, [(i, i + 1) for i in range(1, v)])


def star(v: int) -> BlockDesign:
    """Centre 1 joined to each of ``2..v``."""
    return design_from_edges(v, [(1, i) for i in range(2, v + 1)])


def cycle_with_leaves(s: int, v: int) -> BlockDesign:
    """Cycle on ``1..s`` with ``v - s`` leaves attached to vertex 1 (``s = 2`` is a digon)."""
    if not 2 <= s <= v:
        raise DesignError(f"need 2 <= s <= v, got s={s}, v={v}")
    edges = [(i, i % s + 1) for i in range(1, s + 1)]
    edges += [(1, t) for t in range(s + 1, v + 1)]
    return design_from_edges(v, edges)


def doubled_star(v: int) -> BlockDesign:
    """Star with one edge doubled: a digon with ``v - 2`` leaves on one of its vertices."""
    return cycle_with_leaves(2, v)


def complete(v: int) -> BlockDesign:
    return design_from_edges(v, [(i, j) for i in range(1, v + 1) for j in range(i + 1, v + 1)])


def complete_bipartite(a: int, b: int) -> BlockDesign:
    return design_from_edges(a + b, [(i, a + j) for i in range(1, a + 1) for j in range(1, b + 1)])


def mobius_ladder(n: int) -> BlockDesign:
    """Vertices ``Z_n`` (``n`` even) with edges ``{i, i+1}`` and ``{i, i+n/2}``."""
    if n % 2 or n < 4:
        raise DesignError("Mobius ladder needs even n >= 4")
    edges = [(i + 1, (i + 1) % n + 1) for i in range(n)]
    edges += [(i + 1, i + n // 2 + 1) for i in range(n // 2)]
    return design_from_edges(n, edges)


def cube() -> BlockDesign:
    """3-cube on ``1..8``: vertex ``x + 1`` for bit-vectors ``x``."""
    edges = [(x + 1, (x ^ (1 << bit)) + 1) for x in range(8) for bit in range(3) if x < x ^ (1 << bit)]
    return design_from_edges(8, edges)


def cube_with_two_leaves() -> BlockDesign:
    """The cube on ``3..10`` (cube vertex 0 is labelled 3, its antipode 4) with leaves 1, 2 on 3."""
    relabel = {0: 3, 7: 4}
    others = iter(range(5, 11))
    for x in range(1, 7):
        relabel[x] = next(others)
    edges = [(relabel[x], relabel[x ^ (1 << bit)]) for x in range(8) for bit in range(3)
             if x < x ^ (1 << bit)]
    return design_from_edges(10, edges + [(1, 3), (2, 3)])


def queen_bee(b: int, k: int) -> BlockDesign:
    """Treatment 1 in every block, each block padded with ``k - 1`` fresh treatments."""
    if b < 1 or k < 2:
        raise DesignError("queen-bee design needs b >= 1, k >= 2")
    blocks = [[1] + list(range(2 + j * (k - 1), 2 + (j + 1) * (k - 1))) for j in range(b)]
    return BlockDesign(1 + b * (k - 1), blocks)


def c_family(b: int, k: int, s: int, variant: int = 1) -> BlockDesign:
    """A design in the class ``C(b, k, s)`` with ``v = b(k-1)`` treatments.

    For ``s >= 2`` the cycle treatments are ``1..s``; cycle block ``a`` holds
    treatments ``a`` and ``a+1 (mod s)`` plus ``k - 2`` fresh ones, and the
    other ``b - s`` blocks hold treatment 1 plus ``k - 1`` fresh ones.  For
    ``s = 1`` (``k >= 3``) variant 1 repeats treatment 1 in the first block and
    puts it in every block; variant 2 (``k = 3`` only) instead puts the singly
    occurring treatment of the non-binary block in every block.
    """
    if k < 2 or not 1 <= s <= b:
        raise DesignError(f"C(b,k,s) needs k >= 2 and 1 <= s <= b, got {(b, k, s)}")
    if s == 1 and k < 3:
        raise DesignError("C(b,k,1) needs k >= 3")
    nxt = iter(range(1, 10 ** 9))
    blocks = []
    if s >= 2:
        cyc = [next(nxt) for _ in range(s)]
        for a in range(s):
            blocks.append([cyc[a], cyc[(a + 1) % s]] + [next(nxt) for _ in range(k - 2)])
        hub = cyc[0]
    elif variant == 1:
        hub = next(nxt)
        blocks.append([hub, hub] + [next(nxt) for _ in range(k - 2)])
    elif variant == 2:
        if k != 3:
            raise DesignError("the second C(b,3,1) variant exists only for k = 3")
        twice = next(nxt)
        hub = next(nxt)
        blocks.append([twice, twice, hub])
    else:
        raise DesignError(f"unknown variant {variant}")
    for _ in range(b - s):
        blocks.append([hub] + [next(nxt) for _ in range(k - 1)])
    v = b * (k - 1)
    return BlockDesign(v, blocks)


def triangle_ring(b: int) -> BlockDesign:
    """``b`` triangles arranged in a cycle: ``C(b, 3, b)``."""
    return c_family(b, 3, b)


def generate(family: str, **params) -> BlockDesign:
    """Dispatch on a family tag; parameters are the keyword arguments of the generator."""
    table = {
        "cycle": lambda p: cycle(p["v"]),
        "path": lambda p: path(p["v"]),
        "star": lambda p: star(p["v"]),
        "doubled_star": lambda p: doubled_star(p["v"]),
        "cycle_with_leaves": lambda p: cycle_with_leaves(p["s"], p["v"]),
        "queen_bee": lambda p: queen_bee(p["b"], p["k"]),
        "C": lambda p: c_family(p["b"], p["k"], p["s"], p.get("variant", 1)),
        "mobius_ladder": lambda p: mobius_ladder(p.get("v", 8)),
        "cube": lambda p: cube(),
        "complete": lambda p: complete(p["v"]),
        "complete_bipartite": lambda p: complete_bipartite(p["a"], p["b"]),
        "triangle_ring": lambda p: triangle_ring(p["b"]),
        "fano": lambda p: fano(),
    }
    if family in table:
        try:
            return table[family](params)
        except KeyError as exc:
            raise DesignError(f"family {family!r} needs parameter {exc.args[0]!r}") from None
    return figure(family)


def g_small(s: int, v: int) -> int:
    """Twelve times the pairwise resistance sum of a length-``s`` cycle with ``v - s`` leaves on one vertex."""
    return -s ** 3 + 2 * v * s ** 2 + 13 * s - 12 * s * v + 12 * v ** 2 - 14 * v


def vbar_small(s: int, v: int) -> Fraction:
    return Fraction(g_small(s, v), 3 * v * (v - 1))


def g_general(s: int, b: int, k: int) -> int:
    """Six times the Levi-graph resistance sum between treatments for a design in ``C(b, k, s)``."""
    c = b * (k - 1) * (12 * b * (k - 1) - 5 * k - 4)
    return (-(k - 1) ** 2 * s ** 3 + 2 * b * (k - 1) ** 2 * s ** 2
            - (6 * b * k * (k - 1) - 4 * k ** 2 + 2 * k - 1) * s + c)


def a_optimal_cycle_length(v: int) -> set[int]:
    """Cycle lengths ``s`` in ``[2, v]`` minimising ``g_small``."""
    vals = {s: g_small(s, v) for s in range(2, v + 1)}
    best = min(vals.values())
    return {s for s, g in vals.items() if g == best}


def a_optimal_s(b: int, k: int) -> set[int]:
    """Argmin of ``g_general`` over ``s``; ``s = 1`` only exists for ``k >= 3``."""
    lo = 1 if k >= 3 else 2
    vals = {s: g_general(s, b, k) for s in range(lo, b + 1)}
    best = min(vals.values())
    return {s for s, g in vals.items() if g == best}


TABLE3 = {
    2: [2, 3, 4, 5, 6, 7, 8, 4, 4, 4, (3, 4), 3],
    3: [2, 3, 4, 5, 6, 3, 3, 3, 3, 3, 2, 2],
    4: [2, 3, 4, 5, 3, 2, 2, 2, 2, 2, 2, 2],
    5: [2, 3, 4, 5, 2, 2, 2, 2, 2, 2, 2, 2],
    6: [2, 3, 4, 2, 2, 2, 2, 2, 2, 2, 2, 2],
}


def table3(b: int, k: int) -> set[int]:
    """Printed optimal ``s`` for ``2 <= b <= 13``, ``2 <= k <= 6``."""
    entry = TABLE3[k][b - 2]
    return set(entry) if isinstance(entry, tuple) else {entry}


def c_family_spectrum(b: int, k: int) -> list[float]:
    """Closed-form non-trivial concurrence eigenvalues of ``C(b, k, b)``, sorted."""
    if b < 2 or k < 3:
        raise DesignError("closed form needs b >= 2, k >= 3 (k = 2 is the cycle)")
    vals = [float(k)] * (b * (k - 3))
    vals.append(2.0 * (k - 1))
    for n in range(1, b):
        ang = 2 * pi * n / b
        root = sqrt((k - 1) ** 2 - sin(ang) ** 2)
        vals += [k - cos(ang) - root, k - cos(ang) + root]
    return sorted(vals)


def smallest_c_family_eigenvalue(b: int, k: int) -> float:
    ang = 2 * pi / b
    return k - cos(ang) - sqrt((k - 1) ** 2 - sin(ang) ** 2)


def cycle_theta1(v: int) -> float:
    return 2 * (1 - cos(2 * pi / v))


def family_names() -> list[str]:
    return ["cycle", "path", "star", "doubled_star", "cycle_with_leaves", "queen_bee", "C",
            "mobius_ladder", "cube", "complete", "complete_bipartite", "triangle_ring", "fano",
            *FIGURES, "fig7"]


def check_member(family: str, d: BlockDesign, s: Optional[int] = None) -> bool:
    """Post-generation check that ``d`` has the family's defining property."""
    from blockopt.design import classify
    from blockopt.graphs import concurrence_graph, is_unicyclic, levi_graph, is_connected

    if family == "queen_bee":
        return classify(d).queen_bee
    if family in ("cycle", "cycle_with_leaves", "doubled_star"):
        return is_unicyclic(concurrence_graph(d))
    if family == "C":
        lg = levi_graph(d)
        return is_connected(lg) and lg.edge_count == lg.n and d.v == d.b * (d.k - 1)
    if family in ("fano", "fig3a"):
        return classify(d).balanced
    return is_connected(concurrence_graph(d))
