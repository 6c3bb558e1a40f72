"""Spectral radius conditions for perfect k-matchings in t-connected graphs."""

from .graph import Graph, GraphInputError, UnsupportedError
from .io import parse_graph6, to_graph6
from .spectral import Tolerance, spectral_radius, char_poly, largest_real_root, quotient_matrix
from .matching import has_perfect_k_matching, has_fractional_pm_fast, has_fractional_pm_oracle
from .verify import TheoremRunConfig, verify_theorem

__all__ = [
    "Graph",
    "GraphInputError",
    "UnsupportedError",
    "parse_graph6",
    "to_graph6",
    "Tolerance",
    "spectral_radius",
    "char_poly",
    "largest_real_root",
    "quotient_matrix",
    "has_perfect_k_matching",
    "has_fractional_pm_fast",
    "has_fractional_pm_oracle",
    "TheoremRunConfig",
    "verify_theorem",
]
