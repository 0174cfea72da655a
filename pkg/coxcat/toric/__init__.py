"""Fans, divisors, line-bundle cohomology and the secondary fan"""

from coxcat.toric.cohomology import line_bundle_cohomology
from coxcat.toric.divisor import ClassGroup, TorusDivisor
from coxcat.toric.fan import Fan, StackyFan, validate_fan
from coxcat.toric.gkz import SecondaryFan, secondary_fan

__all__ = [
    "ClassGroup",
    "Fan",
    "SecondaryFan",
    "StackyFan",
    "TorusDivisor",
    "line_bundle_cohomology",
    "secondary_fan",
    "validate_fan",
]
