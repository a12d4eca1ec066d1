"""Normal-surface kernels for knot- and link-manifolds."""

__version__ = "0.1.0"

from .coords import haken_sum, is_admissible, matching_system
from .enumeration import (
    ConeBasis,
    EnumerationBudget,
    ResourceBudgetExceeded,
    enumerate_fundamental_solutions,
    enumerate_vertex_solutions,
)
from .geometry import classify, reconstruct
from .slopes import Slope, boundary_frame, enumerate_short_slopes
from .triangulation import Triangulation, build_triangulation

__all__ = [
    "ConeBasis",
    "EnumerationBudget",
    "ResourceBudgetExceeded",
    "Slope",
    "Triangulation",
    "boundary_frame",
    "build_triangulation",
    "classify",
    "enumerate_fundamental_solutions",
    "enumerate_short_slopes",
    "enumerate_vertex_solutions",
    "haken_sum",
    "is_admissible",
    "matching_system",
    "reconstruct",
]
