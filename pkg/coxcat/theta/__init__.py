"""The Bondal–Thomsen collection"""

from coxcat.theta.collection import ThetaElement, Variant, enumerate_theta, order_theta
from coxcat.theta.sharpen import sharpened_reduction

__all__ = ["ThetaElement", "Variant", "enumerate_theta", "order_theta", "sharpened_reduction"]
