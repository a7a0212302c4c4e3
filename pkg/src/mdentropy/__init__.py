"""Monomer-dimer entropy laboratory: exact counts, bounds, cluster coefficients and series."""
from __future__ import annotations

__version__ = "0.1.0"

from .closed_forms import lambda1_exact, lamc_omega, mean_field
from .lattice import build_graph, matching_counts_bruteforce, matching_counts_transfer
from .bounds import chain, lower_bound, upper_bound_A, upper_bound_B
from .cluster import jbar, jbar_poly
from .series import saddle_solve, rearrange_in_p

__all__ = [
    "__version__",
    "build_graph",
    "chain",
    "jbar",
    "jbar_poly",
    "lambda1_exact",
    "lamc_omega",
    "lower_bound",
    "matching_counts_bruteforce",
    "matching_counts_transfer",
    "mean_field",
    "rearrange_in_p",
    "saddle_solve",
    "upper_bound_A",
    "upper_bound_B",
]
