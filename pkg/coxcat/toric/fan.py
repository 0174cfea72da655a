"""Fans, stacky fans and generalized fans"""

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import gcd

from coxcat.core.errors import FanValidationError, FanViolation, PreconditionError
from coxcat.exact.matrix import Vector, clear_denominators, rank, solve
from coxcat.exact.polyhedron import Equation, Inequality, RationalPolyhedron

logger = logging.getLogger(__name__)

Cone = frozenset[int]


def _sorted_cones(cones: Iterable[Iterable[int]]) -> tuple[Cone, ...]:
    unique = {frozenset(c) for c in cones}
    return tuple(sorted(unique, key=lambda c: (len(c), sorted(c))))


@dataclass(frozen=True)
class Fan:
    """Rays in N = ℤ^rank and maximal cones as sets of ray indices.

    Rays not used by any cone are allowed; they keep Cox-ring indexing stable
    for chamber fans that contract some divisors.
    """

    rank: int
    rays: tuple[Vector, ...]
    cones: tuple[Cone, ...]

    @cached_property
    def used_rays(self) -> tuple[int, ...]:
        return tuple(sorted(set().union(*self.cones))) if self.cones else ()

    @cached_property
    def is_simplicial(self) -> bool:
        return all(rank([self.rays[i] for i in c]) == len(c) for c in self.cones if c)

    @cached_property
    def is_pure(self) -> bool:
        """Every maximal cone is full-dimensional"""
        return all(len(c) >= self.rank and rank([self.rays[i] for i in c]) == self.rank
                   for c in self.cones)

    @cached_property
    def faces(self) -> tuple[Cone, ...]:
        """All cones of a simplicial fan, including the zero cone"""
        if not self.is_simplicial:
            raise PreconditionError("faces are only enumerated for simplicial fans")
        found: set[Cone] = set()
        for cone in self.cones:
            for k in range(len(cone) + 1):
                found.update(frozenset(s) for s in combinations(sorted(cone), k))
        return _sorted_cones(found)

    def in_some_cone(self, subset: Iterable[int]) -> bool:
        s = frozenset(subset)
        return any(s <= c for c in self.cones)

    @cached_property
    def is_complete(self) -> bool:
        """Pure simplicial pseudomanifold without boundary"""
        if not self.cones or not self.is_pure or not self.is_simplicial:
            return False
        if self.rank == 0:
            return True
        walls: dict[Cone, int] = {}
        for cone in self.cones:
            for ray in cone:
                wall = cone - {ray}
                walls[wall] = walls.get(wall, 0) + 1
        return all(count == 2 for count in walls.values())

    def cone_coordinates(self, cone: Cone, v: Sequence[int | Fraction]) -> dict[int, Fraction] | None:
        """Coefficients of v in the rays of a simplicial cone, None if v is off its span"""
        indices = sorted(cone)
        if not indices:
            return {} if all(x == 0 for x in v) else None
        columns = [[self.rays[i][k] for i in indices] for k in range(self.rank)]
        x = solve(columns, list(v))
        if x is None:
            return None
        return dict(zip(indices, x))

    def contains_point(self, v: Sequence[int | Fraction]) -> bool:
        for cone in self.cones:
            coords = self.cone_coordinates(cone, v)
            if coords is not None and all(c >= 0 for c in coords.values()):
                return True
        return False

    def restrict(self, cones: Iterable[Cone]) -> "Fan":
        """Subfan generated by the given cones, same ray list"""
        return Fan(self.rank, self.rays, _sorted_cones(cones))


@dataclass(frozen=True)
class StackyFan:
    fan: Fan
    multipliers: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.multipliers) != len(self.fan.rays):
            raise PreconditionError("one multiplier per ray is required")
        if any(b <= 0 for b in self.multipliers):
            raise PreconditionError("multipliers must be positive")

    @classmethod
    def of(cls, fan: Fan) -> "StackyFan":
        return cls(fan, tuple(1 for _ in fan.rays))

    @cached_property
    def beta(self) -> tuple[Vector, ...]:
        return tuple(tuple(b * x for x in u) for b, u in zip(self.multipliers, self.fan.rays))

    @property
    def is_trivial(self) -> bool:
        return all(b == 1 for b in self.multipliers)


@dataclass(frozen=True)
class GeneralizedFan:
    """Fan whose cones share a lineality space L, stored through its quotient.

    `projection` maps N onto N/(N ∩ L) in the chosen basis; `ray_images` holds
    the image of every input ray under it.
    """

    lineality: tuple[Vector, ...]
    projection: tuple[Vector, ...]
    quotient: Fan
    contracted: frozenset[int]
    ray_images: tuple[Vector, ...] = field(default=())

    @property
    def lineality_dim(self) -> int:
        return len(self.lineality)


def _is_primitive(v: Sequence[int]) -> bool:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g == 1


def _strongly_convex(rays: list[Vector]) -> bool:
    """No nonzero nonnegative combination of the rays vanishes"""
    if not rays:
        return True
    k, n = len(rays), len(rays[0])
    # λ ≥ 0, Σ λ_i = 1, Σ λ_i r_i = 0
    combination = RationalPolyhedron.from_constraints(
        k,
        [Inequality.of([int(i == j) for j in range(k)], 0) for i in range(k)],
        [Equation.of([r[c] for r in rays], 0) for c in range(n)] + [Equation.of([1] * k, 1)],
    )
    return combination.is_empty()


def _meets_properly(fan_rays: Sequence[Vector], first: Cone, second: Cone) -> bool:
    """The two cones intersect in the cone over their common rays"""
    common = first & second
    left = sorted(first)
    right = sorted(second)
    n = len(fan_rays[0])
    k = len(left) + len(right)
    # a point of both cones that uses a ray outside the common face
    equations = [
        Equation.of([fan_rays[i][c] for i in left] + [-fan_rays[j][c] for j in right], 0)
        for c in range(n)
    ]
    equations.append(
        Equation.of([int(i not in common) for i in left] + [int(j not in common) for j in right], 1)
    )
    witness = RationalPolyhedron.from_constraints(
        k, [Inequality.of([int(i == j) for j in range(k)], 0) for i in range(k)], equations
    )
    return witness.is_empty()


def validate_fan(rank_n: int, rays: Sequence[Sequence[int]], cones: Iterable[Iterable[int]]) -> Fan:
    """Build a Fan, raising FanValidationError with every violation found"""
    ray_tuple = tuple(tuple(int(x) for x in r) for r in rays)
    cone_list = [frozenset(int(i) for i in c) for c in cones]
    violations: list[FanViolation] = []

    for i, ray in enumerate(ray_tuple):
        if len(ray) != rank_n:
            violations.append(
                FanViolation("dimension_mismatch", i, f"ray {i} has length {len(ray)}, expected {rank_n}")
            )
        elif not _is_primitive(ray):
            violations.append(FanViolation("non_primitive_ray", i, f"ray {i} = {ray} is not primitive"))
    if len(set(ray_tuple)) != len(ray_tuple):
        violations.append(FanViolation("non_primitive_ray", None, "duplicate ray generators"))

    for c_index, cone in enumerate(cone_list):
        bad = [i for i in cone if not 0 <= i < len(ray_tuple)]
        if bad:
            violations.append(
                FanViolation("bad_index", c_index, f"cone {c_index} uses unknown rays {sorted(bad)}")
            )
    if violations:
        raise FanValidationError(violations)

    for c_index, cone in enumerate(cone_list):
        if not _strongly_convex([ray_tuple[i] for i in sorted(cone)]):
            violations.append(
                FanViolation("not_strongly_convex", c_index, f"cone {sorted(cone)} contains a line")
            )
    if not violations:
        for (a, first), (b, second) in combinations(enumerate(cone_list), 2):
            if not _meets_properly(ray_tuple, first, second):
                violations.append(
                    FanViolation(
                        "bad_intersection",
                        (a, b),
                        f"cones {sorted(first)} and {sorted(second)} do not meet in a common face",
                    )
                )
    if violations:
        raise FanValidationError(violations)

    maximal = [c for c in cone_list if not any(c < other for other in cone_list)]
    fan = Fan(rank_n, ray_tuple, _sorted_cones(maximal))
    logger.debug(f"Validated fan with {len(ray_tuple)} rays and {len(fan.cones)} maximal cones")
    return fan


@dataclass(frozen=True)
class ConeRelation:
    """scale·v = Σ coefficients[τ]·u_τ over the rays of the minimal cone"""

    cone: Cone
    scale: int
    coefficients: tuple[tuple[int, int], ...]

    def coefficient(self, ray: int) -> int:
        return dict(self.coefficients).get(ray, 0)


def minimal_cone_relation(fan: Fan, v: Sequence[int]) -> ConeRelation:
    if not fan.is_simplicial:
        raise PreconditionError("minimal cone relations need a simplicial fan")
    for cone in fan.cones:
        coords = fan.cone_coordinates(cone, v)
        if coords is None or any(c < 0 for c in coords.values()):
            continue
        support = sorted(i for i, c in coords.items() if c > 0)
        scaled = clear_denominators([Fraction(1)] + [coords[i] for i in support])
        return ConeRelation(frozenset(support), scaled[0], tuple(zip(support, scaled[1:])))
    raise PreconditionError(f"vector {tuple(v)} lies outside the support of the fan")
