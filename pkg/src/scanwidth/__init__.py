"""Scanwidth of DAGs and phylogenetic networks: exact solvers, heuristics, layouts."""

from .graph import Digraph, validate
from .exact import brute_force, dp_solve, fpt_level_solve, recursive_solve
from .heuristics import cut_split_heuristic, greedy_heuristic, simulated_annealing
from .layouts import (
    TreeExtension,
    canonical_tree_extension,
    cutwidth_of_extension,
    scanwidth_of_extension,
    scanwidth_of_tree_extension,
)

__all__ = [
    "Digraph",
    "TreeExtension",
    "brute_force",
    "canonical_tree_extension",
    "cut_split_heuristic",
    "cutwidth_of_extension",
    "dp_solve",
    "fpt_level_solve",
    "greedy_heuristic",
    "recursive_solve",
    "scanwidth_of_extension",
    "scanwidth_of_tree_extension",
    "simulated_annealing",
    "validate",
]
