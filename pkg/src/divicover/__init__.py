"""Persistent homology of finite metric spaces via divisive covers.

The pipeline: build a divisive cover of the space (``cover``), take the
filtered nerve of the cover (``nerve``), and compute its barcode over the
two-element field (``persistence``).  A brute-force filtration on small
inputs (``oracle``) provides reference barcodes and the interleaving
check that justifies the approximation.
"""

from .metric import FiniteMetricSpace, UsageError, diameter, distance, effective_delta, relative_radius
from .cover import (
    CoverElement,
    DivisionStrategy,
    DivisiveCover,
    IndivisibleSubset,
    decision_division,
    divisive_cover,
    ellipsoid_division,
    verify_delta_division,
)
from .nerve import FilteredComplex, build_nerve, complex_at
from .persistence import Barcode, betti_at, compute_persistence
from .oracle import cech_filtration, log_bottleneck, verify_interleaving
from .generators import generate_sphere, generate_torus

__version__ = "0.1.0"

__all__ = [
    "Barcode",
    "CoverElement",
    "DivisionStrategy",
    "DivisiveCover",
    "FilteredComplex",
    "FiniteMetricSpace",
    "IndivisibleSubset",
    "UsageError",
    "betti_at",
    "build_nerve",
    "cech_filtration",
    "complex_at",
    "compute_persistence",
    "decision_division",
    "diameter",
    "distance",
    "divisive_cover",
    "effective_delta",
    "ellipsoid_division",
    "generate_sphere",
    "generate_torus",
    "log_bottleneck",
    "relative_radius",
    "verify_delta_division",
    "verify_interleaving",
]
