"""
Resistance, variance and the Levi graph
=======================================

Six triangles joined in a ring, each with a pendant treatment, as a
block design with k = 3.  We put a battery across two treatments and
read off the variance of their estimated difference.
"""

from fractions import Fraction

import numpy as np

from blockopt.electrical import (effective_resistance, random_walk_resistance, solve_network,
                                 tjur_lift, tjur_project)
from blockopt.families import c_family
from blockopt.graphs import concurrence_graph, laplacian, levi_graph
from blockopt.spectral import pairwise_variances

spacer = "_" * 60

d = c_family(6, 3, 6)
print("design: v=%d b=%d k=%d" % (d.v, d.b, d.k))
for blk in d.blocks:
    print("  ", blk)

g = concurrence_graph(d)
# treatment 1 sits on the ring, treatment 9 hangs off a block three steps away
i, j = 0, 8

sol = solve_network(g, i, j)
print("\nintegral voltages with V(1) = 0:")
print("  ", [int(x) for x in sol.voltages])
print("current out of 1:", sol.outflow(i), " voltage drop:", sol.voltages[i] - sol.voltages[j])
print("R_ij =", sol.resistance)

print(spacer)
print("\nThe same pair on the Levi graph, by lifting the concurrence solution:")
lifted = tjur_lift(d, sol)
print("block voltages:", [int(x) for x in lifted.voltages[d.v:]])
print("R~_ij =", lifted.resistance, "= k * R_ij:", lifted.resistance == d.k * sol.resistance)
print("direct solve on the Levi graph:", effective_resistance(levi_graph(d), i, j))
back = tjur_project(d, lifted)
print("projecting back recovers the original voltages:", back.voltages == sol.voltages)

print(spacer)
print("\nVariance of the estimated difference, in units of sigma^2:")
V = pairwise_variances(laplacian(g), d.k)
print("  from the pseudo-inverse:", V[i, j])
print("  from k * R_ij:          ", float(d.k * sol.resistance), "=", d.k * sol.resistance)

print("\nRandom walks give the same number twice over:")
esc, soj = random_walk_resistance(g, i, j)
print("  1/(d_i P_esc) =", esc, "  S_i/d_i =", soj)

print(spacer)
print("\nAll pairwise variances, rounded:")
np.set_printoptions(precision=2, suppress=True, linewidth=120)
print(V)
print("largest:", Fraction(V.max()).limit_denominator(1000))
