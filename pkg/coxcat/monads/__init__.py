"""Θ-twisted free complexes over the Cox ring"""

from coxcat.monads.complex import (
    ThetaComplex,
    complex_from_document,
    degree_zero_strand,
    restrict_to_face,
    validate_complex,
    vanishing_report,
)

__all__ = [
    "ThetaComplex",
    "complex_from_document",
    "degree_zero_strand",
    "restrict_to_face",
    "validate_complex",
    "vanishing_report",
]
