"""Exact Cox-ring polynomials on top of sympy's sparse polynomial rings"""

from collections.abc import Sequence
from fractions import Fraction
from functools import lru_cache

from sympy import QQ, SympifyError, sympify
from sympy.polys.polyerrors import CoercionFailed
from sympy.polys.rings import PolyElement, PolyRing, ring

from coxcat.core.errors import SchemaError
from coxcat.exact.matrix import Vector

Matrix = tuple[tuple[PolyElement, ...], ...]


@lru_cache(maxsize=None)
def cox_ring(n_variables: int) -> PolyRing:
    """ℚ[x0, …, x{k−1}]"""
    names = ",".join(f"x{i}" for i in range(n_variables))
    return ring(names, QQ)[0]


def parse_polynomial(R: PolyRing, text: str | int) -> PolyElement:
    try:
        return R(sympify(str(text)))
    except (SympifyError, CoercionFailed, ValueError, TypeError) as e:
        raise SchemaError(f"cannot read {text!r} as a polynomial in {', '.join(map(str, R.symbols))}") from e


def terms(f: PolyElement) -> list[tuple[Vector, Fraction]]:
    """(exponent, coefficient) pairs in descending lex order"""
    return [
        (tuple(int(e) for e in monom), Fraction(int(c.numerator), int(c.denominator)))
        for monom, c in f.terms()
    ]


def monomial(R: PolyRing, exponent: Sequence[int], coefficient: int = 1) -> PolyElement:
    return R({tuple(int(e) for e in exponent): coefficient})


def matmul(R: PolyRing, a: Matrix, b: Matrix) -> Matrix:
    if not a or not b:
        return ()
    inner = len(b)
    return tuple(
        tuple(
            sum((a[i][k] * b[k][j] for k in range(inner)), R.zero)
            for j in range(len(b[0]))
        )
        for i in range(len(a))
    )


def is_zero_matrix(m: Matrix) -> bool:
    return all(not entry for row in m for entry in row)


def to_strings(m: Matrix) -> list[list[str]]:
    return [[str(entry) if entry else "0" for entry in row] for row in m]
