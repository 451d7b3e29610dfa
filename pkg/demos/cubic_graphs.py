"""
Ranking all cubic multigraphs on eight vertices
===============================================

Twelve blocks of size two on eight treatments, every treatment used three
times: the designs are the connected cubic multigraphs on 8 vertices.
There are 20 of them up to isomorphism.
"""

import time

from blockopt.families import complete_bipartite, cube, mobius_ladder
from blockopt.graphs import concurrence_graph, edge_connectivity
from blockopt.search import SearchSpace, enumerate_designs, isomorphic, rank
from blockopt.spectral import A, D, E, criteria

t0 = time.time()
space = SearchSpace(8, 12, 2, equireplicate_only=True)
designs = enumerate_designs(space)
print("%d classes in %.1fs" % (len(designs), time.time() - t0))

names = {"Mobius ladder": mobius_ladder(8), "cube": cube()}


def tag(d):
    for name, ref in names.items():
        if isomorphic(d, ref):
            return name
    return ""


for crit in (A, D, E):
    res = rank(designs, crit)
    print("\n%s criterion, top five tie groups:" % crit)
    for gi, grp in enumerate(res.tie_groups[:5]):
        e = res.entries[grp[0]]
        tags = ", ".join(t for t in (tag(res.entries[i].design) for i in grp) if t)
        print("  %d. %.6f  lambda=%d  x%d  %s" % (gi + 1, crit.value(e.report), e.edge_connectivity,
                                                 len(grp), tags))

# K_{2,6} has edge-connectivity 2 and loses on A to every 3-edge-connected cubic graph
k26 = criteria(complete_bipartite(2, 6))
cubic3 = [criteria(d).A_value for d in designs if edge_connectivity(concurrence_graph(d)) == 3]
print("\nK_{2,6} (also 12 edges, not equireplicate): A = %.4f" % k26.A_value)
print("smallest A among edge-connectivity-3 cubic graphs: %.4f" % min(cubic3))
