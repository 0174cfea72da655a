"""Exact linear algebra and rational polyhedra"""

from coxcat.exact.matrix import (
    SnfResult,
    integer_kernel,
    lattice_solve,
    nullspace,
    rank,
    smith_normal_form,
    solve,
)
from coxcat.exact.polyhedron import (
    Equation,
    Inequality,
    LPResult,
    LPStatus,
    RationalPolyhedron,
)

__all__ = [
    "SnfResult",
    "integer_kernel",
    "lattice_solve",
    "nullspace",
    "rank",
    "smith_normal_form",
    "solve",
    "Equation",
    "Inequality",
    "LPResult",
    "LPStatus",
    "RationalPolyhedron",
]
