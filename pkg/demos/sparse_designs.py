"""
The sparsest connected designs: A, D and E pull in different directions
=======================================================================

With k = 2 and b = v - 1 every connected design is a tree; with b = v it
has exactly one cycle.  Exhaustive search shows which shapes each criterion
prefers, and the closed-form cycle-with-leaves polynomial predicts the A
winner without searching.
"""

import time

from blockopt.families import (a_optimal_cycle_length, a_optimal_s, c_family, cycle, cycle_with_leaves,
                               doubled_star, g_general, g_small, star, table3)
from blockopt.search import SearchSpace, isomorphic, optimize
from blockopt.spectral import A, D, E, criteria


def describe(d):
    v = d.v
    for s in range(2, v + 1):
        if isomorphic(d, cycle_with_leaves(s, v)):
            return "cycle of length %d with %d leaves on one vertex" % (s, v - s) if s < v else "the %d-cycle" % v
    return "other"


print("Trees (b = v - 1):")
for v in (5, 6, 7):
    space = SearchSpace(v, v - 1, 2)
    best = {str(c): optimize(space, c).best for c in (A, D, E)}
    print("  v=%d: A-best is a star: %s; E-best is a star: %s; D ties across all %d trees"
          % (v, isomorphic(best["A"][0].design, star(v)), isomorphic(best["E"][0].design, star(v)),
             len(best["D"])))

print("\nOne cycle (b = v):")
for v in (6, 7, 8):
    t0 = time.time()
    space = SearchSpace(v, v, 2)
    res = {str(c): optimize(space, c) for c in (A, D, E)}
    print("  v=%d  (%.1fs)" % (v, time.time() - t0))
    print("    A:", "; ".join(describe(e.design) for e in res["A"].best))
    print("      predicted cycle length:", sorted(a_optimal_cycle_length(v)),
          " g(s) =", [g_small(s, v) for s in range(2, v + 1)])
    print("    D:", "; ".join(describe(e.design) for e in res["D"].best))
    print("    E:", "; ".join(describe(e.design) for e in res["E"].best),
          " (doubled star among them: %s)" % any(isomorphic(e.design, doubled_star(v)) for e in res["E"].best))

print("\nAt v = 12 the polynomial ties the triangle and the square:", g_small(3, 12), g_small(4, 12))
for s in (3, 4):
    r = criteria(cycle_with_leaves(s, 12))
    print("  s=%d  A=%.12f  Vbar=%.12f" % (s, r.A_value, r.Vbar))
print("  the 12-cycle itself: A=%.6f" % criteria(cycle(12)).A_value)

print("\nLarger blocks, Levi graph with one cycle: best cycle length s in C(b, k, s)")
print("      " + " ".join("b=%-3d" % b for b in range(2, 14)))
for k in range(2, 7):
    row = []
    for b in range(2, 14):
        s = a_optimal_s(b, k)
        assert s == table3(b, k)
        row.append("/".join(map(str, sorted(s))).ljust(5))
    print("  k=%d " % k + " ".join(row))

b, k = 8, 3
print("\nC(%d,%d,s): g(s) =" % (b, k), [g_general(s, b, k) for s in range(1, b + 1)])
print("A values:", ["%.5f" % criteria(c_family(b, k, s)).A_value for s in range(1, b + 1)])
