"""Linear operators that transform polynomial stability between planar regions."""

from .polycore import ComplexPoly, compose, derivative, divide_exact, evaluate, multiply, roots
from .regions import (
    Annulus,
    ConvexComplement,
    Disk,
    HalfPlane,
    PolygonHull,
    PuncturedDisk,
    Sampled,
    is_stable,
    maps_into,
    random_stable_poly,
    scale_region,
    unit_disk,
)
from .operators import (
    OperatorTruncation,
    apply,
    compose_operators,
    make_dilation,
    make_pcd,
    make_product_composition,
    make_rank1,
    moments,
    rank_estimate,
)

__all__ = [
    "ComplexPoly", "compose", "derivative", "divide_exact", "evaluate", "multiply", "roots",
    "Annulus", "ConvexComplement", "Disk", "HalfPlane", "PolygonHull", "PuncturedDisk", "Sampled",
    "is_stable", "maps_into", "random_stable_poly", "scale_region", "unit_disk",
    "OperatorTruncation", "apply", "compose_operators", "make_dilation", "make_pcd",
    "make_product_composition", "make_rank1", "moments", "rank_estimate",
]
