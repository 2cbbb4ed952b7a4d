"""Exact obstructions to metrisability of three-dimensional projective structures."""

__version__ = "0.1.0"

from .algebra import Poly, divide_exact, evaluate, parse_poly
from .geometry import (
    ProjectiveChange,
    ProjectiveStructure,
    WeylStructure,
    curvature,
    levi_civita,
    weyl_v,
)
from .obstructions import Covariants, constraint_map, named_covariant, t_tensor, theorem2_tensors
from .tensor import Tensor, einsum

__all__ = [
    "Covariants", "Poly", "ProjectiveChange", "ProjectiveStructure", "Tensor", "WeylStructure",
    "constraint_map", "curvature", "divide_exact", "einsum", "evaluate", "levi_civita",
    "named_covariant", "parse_poly", "t_tensor", "theorem2_tensors", "weyl_v",
]
