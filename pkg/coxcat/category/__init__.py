"""Θ_Cox, its endomorphism algebra and the Θ-transform checks"""

from coxcat.category.algebra import build_theta_cox, check_full_strong_exceptional, endomorphism_algebra
from coxcat.category.transform import transform_line_bundle, verify_theta_transform

__all__ = [
    "build_theta_cox",
    "check_full_strong_exceptional",
    "endomorphism_algebra",
    "transform_line_bundle",
    "verify_theta_transform",
]
