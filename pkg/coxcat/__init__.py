"""coxcat - exact computations for the Cox category of a toric variety"""

from coxcat.__version__ import __version__
from coxcat.core.errors import CoxcatError, InvariantError, PreconditionError, SchemaError
from coxcat.core.interfaces import IFormatter

__all__ = [
    "__version__",
    "CoxcatError",
    "IFormatter",
    "InvariantError",
    "PreconditionError",
    "SchemaError",
]
