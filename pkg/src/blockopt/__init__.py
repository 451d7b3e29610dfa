"""Optimality of incomplete-block designs through their concurrence and Levi graphs.

Designs are compared by the spectra of their information (Laplacian) matrices;
pairwise variances are effective resistances, so exact rational answers come
from electrical-network solves and spanning-tree counts.
"""

from blockopt.design import (BlockDesign, DesignError, block_defects, classify, concurrence_matrix,
                             format_design, incidence_matrix, parse_design)
from blockopt.graphs import Multigraph, concurrence_graph, laplacian, levi_graph
from blockopt.spectral import A, D, E, Criterion, CriteriaReport, Phi, criteria, dominates, phi_crossover
from blockopt.electrical import effective_resistance, resistance_matrix, solve_network
from blockopt.arboreal import spanning_tree_count
from blockopt.search import SearchSpace, canonical_form, enumerate_designs, optimize, theorem_checks

__all__ = [
    "BlockDesign", "DesignError", "block_defects", "classify", "concurrence_matrix", "format_design",
    "incidence_matrix", "parse_design", "Multigraph", "concurrence_graph", "laplacian", "levi_graph",
    "A", "D", "E", "Criterion", "CriteriaReport", "Phi", "criteria", "dominates", "phi_crossover",
    "effective_resistance", "resistance_matrix", "solve_network", "spanning_tree_count",
    "SearchSpace", "canonical_form", "enumerate_designs", "optimize", "theorem_checks",
]
