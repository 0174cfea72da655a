"""The Bondal–Thomsen collection Θ with witnesses, zonotopes and the effectivity order"""

import logging
import random
from collections.abc import Sequence
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from itertools import product
from math import ceil, floor, lcm

import networkx as nx

from coxcat.core.errors import InvariantError, PreconditionError
from coxcat.exact.matrix import QVector, Vector, dot
from coxcat.exact.polyhedron import Equation, Inequality, RationalPolyhedron
from coxcat.toric.divisor import ClassGroup, ClassVector, effective

logger = logging.getLogger(__name__)


class Variant(str, Enum):
    STANDARD = "standard"
    STAR = "star"


@dataclass(frozen=True)
class ThetaElement:
    """The class −d of O(−d) together with a witness θ, d = deg ⌈⟨θ, β(e_ρ)⟩⌉"""

    class_vector: ClassVector
    d: ClassVector
    theta: QVector
    variant: Variant = Variant.STANDARD
    chamber: int | None = None
    order: int | None = None

    def with_chamber(self, chamber: int) -> "ThetaElement":
        return replace(self, chamber=chamber)


def ceiling_vector(cg: ClassGroup, theta: Sequence[Fraction]) -> Vector:
    return tuple(ceil(dot(theta, b)) for b in cg.beta)


def witness_class(cg: ClassGroup, theta: Sequence[Fraction]) -> ClassVector:
    """d(θ) as a class"""
    return cg.degree(ceiling_vector(cg, theta))


def _slots(b: Sequence[int]) -> list[tuple[int, int]]:
    """Possible positions of ⟨θ, b⟩ for θ ∈ [0,1)ⁿ: (k, 0) is the value k, (k, 1) the interval (k, k+1)"""
    lo = sum(min(x, 0) for x in b)
    hi = sum(max(x, 0) for x in b)
    slots = []
    for k in range(lo, hi + 1):
        slots.append((k, 0))
        if k < hi:
            slots.append((k, 1))
    return slots


def _slot_constraints(b: Sequence[int], slot: tuple[int, int]) -> tuple[list[Inequality], list[Equation]]:
    k, open_interval = slot
    if not open_interval:
        return [], [Equation.of(b, k)]
    return [Inequality.of(b, k, strict=True), Inequality.of([-x for x in b], -(k + 1), strict=True)], []


def _cube(n: int) -> list[Inequality]:
    constraints = []
    for i in range(n):
        e = [int(i == j) for j in range(n)]
        constraints.append(Inequality.of(e, 0))
        constraints.append(Inequality.of([-x for x in e], -1, strict=True))
    return constraints


def _cells(cg: ClassGroup) -> list[QVector]:
    """One rational point per cell of {⟨θ, β(e_ρ)⟩ ∈ ℤ} inside [0,1)ⁿ"""
    n = cg.lattice_rank
    base = RationalPolyhedron(n, tuple(_cube(n)))
    cells: list[RationalPolyhedron] = [base]
    for b in sorted(set(cg.beta)):
        if not any(b):
            continue
        refined = []
        for cell in cells:
            for slot in _slots(b):
                ineqs, eqs = _slot_constraints(b, slot)
                candidate = RationalPolyhedron(
                    n, cell.inequalities + tuple(ineqs), cell.equations + tuple(eqs)
                )
                if candidate.feasible()[0]:
                    refined.append(candidate)
        cells = refined
    points = []
    for cell in cells:
        ok, point = cell.feasible()
        if not ok or point is None:
            raise InvariantError("an arrangement cell lost its interior point")
        points.append(tuple(point))
    logger.debug(f"Arrangement has {len(points)} cells in the unit cube")
    return points


def enumerate_theta(cg: ClassGroup, variant: Variant = Variant.STANDARD) -> list[ThetaElement]:
    """Θ, one element per class, keeping the lexicographically least witness"""
    best: dict[ClassVector, QVector] = {}
    for theta in _cells(cg):
        d = witness_class(cg, theta)
        if d not in best or theta < best[d]:
            best[d] = theta

    elements = []
    for d, theta in best.items():
        if variant is Variant.STAR:
            cls = cg.add(cg.canonical, d)
        else:
            cls = cg.neg(d)
        elements.append(ThetaElement(cls, d, theta, variant))
    elements.sort(key=lambda e: (sum(e.d), e.d))
    logger.debug(f"Θ has {len(elements)} elements")
    return elements


def theta_membership(cg: ClassGroup, c: Sequence[int]) -> tuple[bool, QVector | None]:
    """Whether c = Σ ⌊⟨−θ, β(e_ρ)⟩⌋ D_ρ for some θ, with such a θ"""
    lift = cg.lift(c)
    n = cg.lattice_rank
    inequalities = []
    for b, l in zip(cg.beta, lift):
        # l ≤ ⟨−θ, b⟩ < l + 1
        inequalities.append(Inequality.of([-x for x in b], l))
        inequalities.append(Inequality.of(b, -l - 1, strict=True))
    ok, theta = RationalPolyhedron(n, tuple(inequalities)).feasible()
    if not ok or theta is None:
        return False, None
    theta = tuple(theta)
    if cg.neg(witness_class(cg, theta)) != cg.normalize(c):
        raise InvariantError(f"membership witness for {tuple(c)} does not reproduce it")
    return True, theta


def frobenius_oracle(cg: ClassGroup, level: int) -> set[ClassVector]:
    """{−d(θ) : θ ∈ (1/ℓ)M / M}"""
    if level < 1:
        raise PreconditionError("the Frobenius level must be a positive integer")
    n = cg.lattice_rank
    found = set()
    for point in product(range(level), repeat=n):
        theta = tuple(Fraction(x, level) for x in point)
        found.add(cg.neg(witness_class(cg, theta)))
    return found


def denominator_bound(elements: Sequence[ThetaElement]) -> int:
    """lcm of the witness denominators"""
    bound = 1
    for e in elements:
        for x in e.theta:
            bound = lcm(bound, Fraction(x).denominator)
    return bound


def order_theta(
    cg: ClassGroup,
    elements: Sequence[ThetaElement],
    seed: int | None = None,
    by_effectivity: bool = True,
) -> list[ThetaElement]:
    """Topological order of effectivity: d_j − d_i is never effective for i > j

    With by_effectivity off the canonical (Σd, d) order is kept and the seed is ignored.
    """
    if not by_effectivity:
        canonical = sorted(elements, key=lambda e: (sum(e.d), e.d))
        logger.debug(f"Θ kept in canonical order on {len(canonical)} elements")
        return [replace(e, order=position) for position, e in enumerate(canonical)]

    graph = nx.DiGraph()
    graph.add_nodes_from(range(len(elements)))
    for a, first in enumerate(elements):
        for b, second in enumerate(elements):
            if a != b and effective(cg, cg.sub(first.d, second.d))[0]:
                graph.add_edge(b, a)

    if seed is None:
        keys = {i: (sum(e.d), e.d) for i, e in enumerate(elements)}
    else:
        shuffled = list(range(len(elements)))
        random.Random(seed).shuffle(shuffled)
        keys = {i: (shuffled[i],) for i in range(len(elements))}
    try:
        ordering = list(nx.lexicographical_topological_sort(graph, key=lambda i: keys[i]))
    except nx.NetworkXUnfeasible as e:
        raise InvariantError("effectivity relation on Θ has a cycle") from e
    return [replace(elements[i], order=position) for position, i in enumerate(ordering)]


def is_triangular(cg: ClassGroup, ordered: Sequence[ThetaElement]) -> list[tuple[int, int]]:
    """Pairs (i, j), i > j, where d_j − d_i is effective"""
    return [
        (i, j)
        for i in range(len(ordered))
        for j in range(i)
        if effective(cg, cg.sub(ordered[j].d, ordered[i].d))[0]
    ]


class Interval(str, Enum):
    HALF_OPEN = "half_open"  # (−1, 0]
    CLOSED = "closed"  # [−1, 0]
    OPEN = "open"  # (−1, 0)


@dataclass(frozen=True)
class Zonotope:
    """{Σ a_ρ deg(x_ρ) : a_ρ in the generator's interval} in Cl_ℝ"""

    generators: tuple[Vector, ...]
    intervals: tuple[Interval, ...]

    @classmethod
    def of(cls, generators: Sequence[Vector], interval: Interval) -> "Zonotope":
        return cls(tuple(generators), tuple(interval for _ in generators))

    @property
    def rank(self) -> int:
        return len(self.generators[0]) if self.generators else 0

    def _polyhedron(self, c: Sequence[int | Fraction]) -> RationalPolyhedron:
        k = len(self.generators)
        inequalities = []
        for i, interval in enumerate(self.intervals):
            e = [int(i == j) for j in range(k)]
            inequalities.append(Inequality.of(e, -1, strict=interval is not Interval.CLOSED))
            inequalities.append(Inequality.of([-x for x in e], 0, strict=interval is Interval.OPEN))
        equations = [
            Equation.of([g[j] for g in self.generators], c[j]) for j in range(self.rank)
        ]
        return RationalPolyhedron(k, tuple(inequalities), tuple(equations))

    def contains(self, c: Sequence[int | Fraction]) -> bool:
        if not self.generators:
            return all(x == 0 for x in c)
        return not self._polyhedron(c).is_empty()

    def bounding_box(self) -> list[tuple[int, int]]:
        return [
            (
                floor(sum(min(-g[j], 0) for g in self.generators)),
                ceil(sum(max(-g[j], 0) for g in self.generators)),
            )
            for j in range(self.rank)
        ]

    def lattice_points(self) -> list[Vector]:
        box = RationalPolyhedron.box(self.bounding_box())
        return [p for p in box.lattice_points() if self.contains(p)]
