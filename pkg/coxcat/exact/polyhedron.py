"""Rational polyhedra given by (possibly strict) inequalities, backed by PPL.

Closed systems become `ppl.C_Polyhedron`s, systems with strict rows become
`ppl.NNC_Polyhedron`s. Operations "on the closure" relax every strict row to a
non-strict one first.
"""

import logging
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import ceil, floor, gcd, lcm

import ppl

from coxcat.core.errors import PreconditionError, UnboundedError
from coxcat.exact.matrix import QVector, dot, nullspace

logger = logging.getLogger(__name__)

Number = int | Fraction
Box = Sequence[tuple[int, int]]


class LPStatus(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: LPStatus
    value: Fraction | None = None
    point: QVector | None = None

    @property
    def optimal(self) -> bool:
        return self.status is LPStatus.OPTIMAL


def _scaled(normal: Sequence[Fraction], offset: Fraction = Fraction(0)) -> tuple[list[int], int]:
    """Integer multiple of (normal, offset) with the same sign"""
    scale = lcm(offset.denominator, *(x.denominator for x in normal))
    return [int(x * scale) for x in normal], int(offset * scale)


def _expression(normal: Sequence[Fraction], offset: Fraction = Fraction(0)) -> ppl.Linear_Expression:
    """⟨normal, x⟩ − offset, scaled to integer coefficients"""
    coefficients, constant = _scaled(normal, offset)
    return ppl.Linear_Expression(coefficients, -constant)


def _generator_point(g: ppl.Generator, dim: int) -> QVector:
    divisor = int(g.divisor())
    coords = [Fraction(int(c), divisor) for c in g.coefficients()]
    return tuple(coords + [Fraction(0)] * (dim - len(coords)))


def _primitive(g: ppl.Generator, dim: int) -> tuple[int, ...]:
    coords = [int(c) for c in g.coefficients()]
    coords += [0] * (dim - len(coords))
    g_all = 0
    for x in coords:
        g_all = gcd(g_all, x)
    return tuple(x // g_all for x in coords)


@dataclass(frozen=True)
class Inequality:
    """⟨normal, x⟩ ≥ offset, or > offset when strict"""

    normal: QVector
    offset: Fraction
    strict: bool = False

    @classmethod
    def of(cls, normal: Iterable[Number], offset: Number, strict: bool = False) -> "Inequality":
        return cls(tuple(Fraction(x) for x in normal), Fraction(offset), strict)

    def holds(self, x: Sequence[Number]) -> bool:
        value = dot(self.normal, x)
        return value > self.offset if self.strict else value >= self.offset

    def closed(self) -> "Inequality":
        return Inequality(self.normal, self.offset, False)

    def constraint(self, relax: bool = False) -> ppl.Constraint:
        expr = _expression(self.normal, self.offset)
        return expr > 0 if self.strict and not relax else expr >= 0

    def integral(self) -> ppl.Constraint:
        """The same row on integer points: ⟨N, x⟩ > B becomes ⟨N, x⟩ ≥ B + 1"""
        coefficients, constant = _scaled(self.normal, self.offset)
        bound = constant + 1 if self.strict else constant
        return ppl.Linear_Expression(coefficients, -bound) >= 0


@dataclass(frozen=True)
class Equation:
    """⟨normal, x⟩ = offset"""

    normal: QVector
    offset: Fraction

    @classmethod
    def of(cls, normal: Iterable[Number], offset: Number) -> "Equation":
        return cls(tuple(Fraction(x) for x in normal), Fraction(offset))

    def constraint(self) -> ppl.Constraint:
        return _expression(self.normal, self.offset) == 0


@dataclass(frozen=True)
class RationalPolyhedron:
    dim: int
    inequalities: tuple[Inequality, ...] = ()
    equations: tuple[Equation, ...] = field(default=())

    def __post_init__(self) -> None:
        for c in (*self.inequalities, *self.equations):
            if len(c.normal) != self.dim:
                raise PreconditionError(
                    f"constraint of length {len(c.normal)} in a polyhedron of dimension {self.dim}"
                )

    @classmethod
    def from_constraints(
        cls,
        dim: int,
        inequalities: Iterable[Inequality] = (),
        equations: Iterable[Equation] = (),
    ) -> "RationalPolyhedron":
        return cls(dim, tuple(inequalities), tuple(equations))

    @classmethod
    def box(cls, bounds: Box) -> "RationalPolyhedron":
        n = len(bounds)
        ineqs = []
        for i, (lo, hi) in enumerate(bounds):
            e = [0] * n
            e[i] = 1
            ineqs.append(Inequality.of(e, lo))
            ineqs.append(Inequality.of([-x for x in e], -hi))
        return cls(n, tuple(ineqs))

    def intersect(self, other: "RationalPolyhedron") -> "RationalPolyhedron":
        return RationalPolyhedron(
            self.dim, self.inequalities + other.inequalities, self.equations + other.equations
        )

    def translate(self, shift: Sequence[Number]) -> "RationalPolyhedron":
        """The polyhedron P + shift"""
        return RationalPolyhedron(
            self.dim,
            tuple(
                Inequality(c.normal, c.offset + dot(c.normal, shift), c.strict)
                for c in self.inequalities
            ),
            tuple(Equation(c.normal, c.offset + dot(c.normal, shift)) for c in self.equations),
        )

    def closure(self) -> "RationalPolyhedron":
        return RationalPolyhedron(
            self.dim, tuple(c.closed() for c in self.inequalities), self.equations
        )

    @property
    def has_strict(self) -> bool:
        return any(c.strict for c in self.inequalities)

    def contains(self, x: Sequence[Number]) -> bool:
        return all(c.holds(x) for c in self.inequalities) and all(
            dot(e.normal, x) == e.offset for e in self.equations
        )

    # -- PPL views ----------------------------------------------------------

    def _ppl(self, relax: bool = False) -> ppl.C_Polyhedron | ppl.NNC_Polyhedron:
        strict = self.has_strict and not relax
        poly = (ppl.NNC_Polyhedron if strict else ppl.C_Polyhedron)(self.dim, "universe")
        for c in self.inequalities:
            poly.add_constraint(c.constraint(relax=not strict))
        for e in self.equations:
            poly.add_constraint(e.constraint())
        return poly

    def _closed(self) -> ppl.C_Polyhedron:
        return self._ppl(relax=True)

    def maximize(self, objective: Sequence[Number]) -> LPResult:
        """Maximize over the closure"""
        if self.dim == 0:
            if self.closure().contains(()):
                return LPResult(LPStatus.OPTIMAL, Fraction(0), ())
            return LPResult(LPStatus.INFEASIBLE)
        poly = self._closed()
        if poly.is_empty():
            return LPResult(LPStatus.INFEASIBLE)
        normal = tuple(Fraction(x) for x in objective)
        coefficients, _ = _scaled(normal)
        scale = lcm(*(x.denominator for x in normal))
        result = poly.maximize(ppl.Linear_Expression(coefficients, 0))
        if not result["bounded"]:
            return LPResult(LPStatus.UNBOUNDED)
        value = Fraction(int(result["sup_n"]), int(result["sup_d"])) / scale
        return LPResult(LPStatus.OPTIMAL, value, _generator_point(result["generator"], self.dim))

    def feasible(self) -> tuple[bool, QVector | None]:
        """Exact emptiness test, strict inequalities included, with a point of the set"""
        if self.dim == 0:
            return (True, ()) if self.contains(()) else (False, None)
        poly = self._ppl()
        if poly.is_empty():
            return False, None
        for g in poly.minimized_generators():
            if g.is_point():
                return True, _generator_point(g, self.dim)
        raise PreconditionError("nonempty polyhedron without a point generator")

    def is_empty(self) -> bool:
        if self.dim == 0:
            return not self.contains(())
        return self._ppl().is_empty()

    def coordinate_range(self, index: int) -> tuple[Fraction | None, Fraction | None] | None:
        """Closure bounds of one coordinate; None when the closure is empty"""
        e = [0] * self.dim
        e[index] = 1
        top = self.maximize(e)
        if top.status is LPStatus.INFEASIBLE:
            return None
        bottom = self.maximize([-x for x in e])
        hi = top.value if top.optimal else None
        lo = -bottom.value if bottom.optimal and bottom.value is not None else None
        return lo, hi

    def is_bounded(self) -> bool:
        if self.dim == 0:
            return True
        return self._closed().is_bounded()

    def integer_box(self) -> list[tuple[int, int]] | None:
        """Smallest integer box containing the closure, None when empty"""
        box = []
        for i in range(self.dim):
            bounds = self.coordinate_range(i)
            if bounds is None:
                return None
            lo, hi = bounds
            if lo is None or hi is None:
                raise UnboundedError("polyhedron is unbounded; supply an enumeration box")
            box.append((ceil(lo), floor(hi)))
        return box

    # -- lattice points -----------------------------------------------------

    def _fix_first(self, value: int) -> "RationalPolyhedron":
        return RationalPolyhedron(
            self.dim - 1,
            tuple(
                Inequality(c.normal[1:], c.offset - c.normal[0] * value, c.strict)
                for c in self.inequalities
            ),
            tuple(Equation(e.normal[1:], e.offset - e.normal[0] * value) for e in self.equations),
        )

    def _interval(self) -> Iterator[int]:
        lo: Fraction | None = None
        hi: Fraction | None = None
        for c in self.inequalities:
            a = c.normal[0]
            if a > 0:
                bound = c.offset / a
                lo = bound if lo is None else max(lo, bound)
            elif a < 0:
                bound = c.offset / a
                hi = bound if hi is None else min(hi, bound)
            elif not c.holds((0,)):
                return
        for e in self.equations:
            if e.normal[0] == 0:
                if e.offset != 0:
                    return
                continue
            value = e.offset / e.normal[0]
            lo = value if lo is None else max(lo, value)
            hi = value if hi is None else min(hi, value)
        if lo is None or hi is None:
            raise UnboundedError("polyhedron is unbounded; supply an enumeration box")
        for x in range(ceil(lo), floor(hi) + 1):
            if self.contains((x,)):
                yield x

    def _enumerate(self) -> Iterator[tuple[int, ...]]:
        if self.dim == 0:
            if self.contains(()):
                yield ()
            return
        if self.dim == 1:
            for x in self._interval():
                yield (x,)
            return
        bounds = self.coordinate_range(0)
        if bounds is None:
            return
        lo, hi = bounds
        if lo is None or hi is None:
            raise UnboundedError("polyhedron is unbounded; supply an enumeration box")
        for value in range(ceil(lo), floor(hi) + 1):
            for rest in self._fix_first(value)._enumerate():
                yield (value, *rest)

    def lattice_points(self, box: Box | None = None) -> list[tuple[int, ...]]:
        """Integer points in lexicographic order, restricted to box when given"""
        target = self.intersect(RationalPolyhedron.box(box)) if box is not None else self
        points = sorted(target._enumerate())
        logger.debug(f"Enumerated {len(points)} lattice points in dimension {self.dim}")
        return points

    # -- combinatorics ------------------------------------------------------

    def vertices(self) -> list[QVector]:
        """Point generators of the closure: its vertices when it is pointed"""
        if self.dim == 0:
            return [()] if self.contains(()) else []
        found = {
            _generator_point(g, self.dim)
            for g in self._closed().minimized_generators()
            if g.is_point()
        }
        return sorted(found)

    def recession_cone(self) -> "RationalPolyhedron":
        return RationalPolyhedron(
            self.dim,
            tuple(Inequality(c.normal, Fraction(0)) for c in self.inequalities),
            tuple(Equation(e.normal, Fraction(0)) for e in self.equations),
        )

    def lineality(self) -> list[QVector]:
        rows = [c.normal for c in self.inequalities] + [e.normal for e in self.equations]
        return nullspace(rows, self.dim) if rows else nullspace([], self.dim)

    def recession_rays(self) -> list[tuple[int, ...]]:
        """Primitive extreme rays of the (pointed) recession cone"""
        if self.lineality():
            raise PreconditionError("recession cone is not pointed")
        if self.dim == 0:
            return []
        rays = {
            _primitive(g, self.dim)
            for g in self.recession_cone()._closed().minimized_generators()
            if g.is_ray()
        }
        return sorted(rays)

    def implicit_equalities(self) -> list[int]:
        """Indices of inequalities that hold with equality on the whole closure"""
        if self._closed().is_empty():
            return []
        tight = []
        for i, c in enumerate(self.inequalities):
            # ⟨n, x⟩ ≥ offset everywhere, so it is an equation iff its maximum is offset
            result = self.maximize(c.normal)
            if result.optimal and result.value == c.offset:
                tight.append(i)
        return tight

    def dimension(self) -> int:
        """Affine dimension of the closure, -1 when empty"""
        if self.dim == 0:
            return 0 if self.contains(()) else -1
        poly = self._closed()
        if poly.is_empty():
            return -1
        return int(poly.affine_dimension())

    def count_lattice_points(self) -> int | None:
        """Number of lattice points; None when there are infinitely many"""
        if self.is_bounded():
            return len(self.lattice_points())
        return None if self.find_lattice_point() is not None else 0

    def find_lattice_point(self) -> tuple[int, ...] | None:
        """Some lattice point: the least one when bounded, a mixed-integer solution otherwise"""
        if self.is_bounded():
            points = self.lattice_points()
            return points[0] if points else None
        cs = ppl.Constraint_System()
        for c in self.inequalities:
            cs.insert(c.integral())
        for e in self.equations:
            cs.insert(e.constraint())
        variables = [ppl.Variable(i) for i in range(self.dim)]
        problem = ppl.MIP_Problem(self.dim, cs, 0)
        problem.add_to_integer_space_dimensions(ppl.Variables_Set(variables[0], variables[-1]))
        if not problem.is_satisfiable():
            return None
        point = _generator_point(problem.optimizing_point(), self.dim)
        if any(x.denominator != 1 for x in point):
            raise PreconditionError("integer program returned a fractional point")
        return tuple(int(x) for x in point)
