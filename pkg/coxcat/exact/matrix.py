"""Exact integer and rational linear algebra on top of sympy's DomainMatrix"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from sympy.polys.domains import GF, QQ, ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import smith_normal_decomp

from coxcat.core.errors import InvariantError

logger = logging.getLogger(__name__)

Number = int | Fraction
Vector = tuple[int, ...]
QVector = tuple[Fraction, ...]
Rows = Sequence[Sequence[Number]]


def _zz(rows: Rows, ncols: int | None = None) -> DomainMatrix:
    ncols = len(rows[0]) if rows else (ncols or 0)
    return DomainMatrix([[ZZ(int(x)) for x in row] for row in rows], (len(rows), ncols), ZZ)


def _qq(rows: Rows, ncols: int | None = None) -> DomainMatrix:
    ncols = len(rows[0]) if rows else (ncols or 0)
    data = []
    for row in rows:
        data.append([QQ(Fraction(x).numerator, Fraction(x).denominator) for x in row])
    return DomainMatrix(data, (len(rows), ncols), QQ)


def _frac(e: object) -> Fraction:
    num = getattr(e, "numerator", e)
    den = getattr(e, "denominator", 1)
    return Fraction(int(num), int(den))  # type: ignore[call-overload]


def _int_rows(dm: DomainMatrix) -> list[list[int]]:
    return [[int(e) for e in row] for row in dm.to_list()]


def _frac_rows(dm: DomainMatrix) -> list[list[Fraction]]:
    return [[_frac(e) for e in row] for row in dm.to_list()]


def transpose(rows: Rows) -> list[list[Number]]:
    return [list(col) for col in zip(*rows)]


def matmul(a: Rows, b: Rows) -> list[list[Number]]:
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), 0) for col in bt] for row in a]


def mat_vec(a: Rows, v: Sequence[Number]) -> list[Number]:
    return [sum((x * y for x, y in zip(row, v)), 0) for row in a]


def dot(u: Sequence[Number], v: Sequence[Number]) -> Number:
    return sum((x * y for x, y in zip(u, v)), 0)


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def rank(rows: Rows, characteristic: int = 0) -> int:
    """Rank over QQ, or over GF(p) when a prime characteristic is given"""
    if not rows or not rows[0]:
        return 0
    if characteristic:
        return int(_zz(rows).convert_to(GF(characteristic)).rank())
    return int(_qq(rows).rank())


def rref(rows: Rows) -> tuple[list[list[Fraction]], tuple[int, ...]]:
    if not rows:
        return [], ()
    reduced, pivots = _qq(rows).rref()
    return _frac_rows(reduced), tuple(pivots)


def nullspace(rows: Rows, ncols: int) -> list[QVector]:
    """Basis of the rational kernel, one vector per free column of the rref"""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    reduced, pivots = rref(rows)
    basis = []
    for free in (j for j in range(ncols) if j not in pivots):
        vec = [Fraction(0)] * ncols
        vec[free] = Fraction(1)
        for i, p in enumerate(pivots):
            vec[p] = -reduced[i][free]
        basis.append(tuple(vec))
    return basis


def solve(rows: Rows, rhs: Sequence[Number]) -> QVector | None:
    """Some rational solution of rows·x = rhs, free variables set to zero"""
    ncols = len(rows[0]) if rows else 0
    augmented = [list(row) + [b] for row, b in zip(rows, rhs)]
    reduced, pivots = rref(augmented)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for i, p in enumerate(pivots):
        x[p] = reduced[i][ncols]
    return tuple(x)


def determinant(rows: Rows) -> Fraction:
    if not rows:
        return Fraction(1)
    return _frac(_qq(rows).det())


def inverse(rows: Rows) -> list[list[Fraction]]:
    return _frac_rows(_qq(rows).inv())


def primitive(v: Sequence[int]) -> Vector:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    if g == 0:
        return tuple(int(x) for x in v)
    return tuple(int(x) // g for x in v)


def clear_denominators(v: Sequence[Number]) -> Vector:
    """Smallest positive integer multiple of a rational vector, made primitive"""
    den = 1
    for x in v:
        den = lcm(den, Fraction(x).denominator)
    return primitive([int(Fraction(x) * den) for x in v])


@dataclass(frozen=True)
class SnfResult:
    """A = U·D·V with left·A·right = D, left = U⁻¹ and right = V⁻¹"""

    U: tuple[tuple[int, ...], ...]
    D: tuple[tuple[int, ...], ...]
    V: tuple[tuple[int, ...], ...]
    left: tuple[tuple[int, ...], ...]
    right: tuple[tuple[int, ...], ...]
    rank: int

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0)))

    @property
    def invariants(self) -> tuple[int, ...]:
        return tuple(d for d in self.diagonal if d != 0)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.invariants if d > 1)


def _freeze(rows: Rows) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(x) for x in row) for row in rows)


def smith_normal_form(rows: Rows, ncols: int | None = None) -> SnfResult:
    """Smith normal form with nonnegative diagonal and recomposition check"""
    m = len(rows)
    n = len(rows[0]) if rows else (ncols or 0)
    if m == 0 or n == 0:
        zero = [[0] * n for _ in range(m)]
        return SnfResult(
            _freeze(identity(m)), _freeze(zero), _freeze(identity(n)),
            _freeze(identity(m)), _freeze(identity(n)), 0,
        )

    smf, s, t = smith_normal_decomp(_zz(rows))
    d, left, right = _int_rows(smf), _int_rows(s), _int_rows(t)
    for i in range(min(m, n)):
        if d[i][i] < 0:
            d[i][i] = -d[i][i]
            left[i] = [-x for x in left[i]]

    if matmul(matmul(left, rows), right) != d:
        raise InvariantError("Smith normal form does not recompose")
    r = sum(1 for i in range(min(m, n)) if d[i][i] != 0)
    if any(d[i][i] == 0 for i in range(r)):
        raise InvariantError("Smith normal form diagonal is not rank-ordered")

    U = [[int(x) for x in row] for row in inverse(left)]
    V = [[int(x) for x in row] for row in inverse(right)]
    return SnfResult(_freeze(U), _freeze(d), _freeze(V), _freeze(left), _freeze(right), r)


def integer_kernel(rows: Rows, ncols: int) -> list[Vector]:
    """Lattice basis of {x ∈ ℤⁿ : rows·x = 0}"""
    if not rows:
        return [tuple(int(i == j) for j in range(ncols)) for i in range(ncols)]
    snf = smith_normal_form(rows)
    cols = transpose(snf.right)
    return [tuple(int(x) for x in cols[j]) for j in range(snf.rank, ncols)]


def lattice_solve(rows: Rows, rhs: Sequence[int], ncols: int | None = None) -> Vector | None:
    """An integer solution of rows·x = rhs, or None"""
    n = len(rows[0]) if rows else (ncols or 0)
    if not rows:
        return tuple([0] * n)
    snf = smith_normal_form(rows)
    sb = mat_vec(snf.left, rhs)
    y = [0] * n
    for i, value in enumerate(sb):
        if i < snf.rank:
            q, rem = divmod(int(value), snf.D[i][i])
            if rem:
                return None
            y[i] = q
        elif value != 0:
            return None
    return tuple(int(x) for x in mat_vec(snf.right, y))


def is_unimodular(rows: Rows) -> bool:
    return abs(determinant(rows)) == 1
