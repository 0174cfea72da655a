"""Θ_Cox assembly, the endomorphism algebra A_Θ and the exceptionality verdict"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field

from coxcat.core.errors import InvariantError, PreconditionError
from coxcat.exact.matrix import Vector
from coxcat.theta.collection import ThetaElement, is_triangular
from coxcat.toric.cohomology import hom_theta
from coxcat.toric.divisor import ClassGroup, TorusDivisor, support_function
from coxcat.toric.gkz import SecondaryFan, chamber_cohomology, chamber_of

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WallAgreement:
    """Support functions of a wall element compared on two chamber fans"""

    element: tuple[int, ...]
    chambers: tuple[int, int]
    rays_checked: int
    passed: bool


@dataclass(frozen=True)
class ThetaCox:
    elements: tuple[ThetaElement, ...]
    agreements: tuple[WallAgreement, ...] = ()


def _agreement(gkz: SecondaryFan, e: ThetaElement, i: int, j: int) -> WallAgreement:
    cg = gkz.class_group
    a = TorusDivisor(cg.lift(e.d))
    first, second = gkz.chamber(i).stacky, gkz.chamber(j).stacky
    f_i, f_j = support_function(first, a), support_function(second, a)
    rays = sorted(set(first.fan.used_rays) | set(second.fan.used_rays))
    checked = 0
    passed = True
    for rho in rays:
        v = first.beta[rho]
        if not (first.fan.contains_point(v) and second.fan.contains_point(v)):
            continue
        checked += 1
        if f_i(v, first.fan) != f_j(v, second.fan):
            passed = False
    return WallAgreement(e.class_vector, (i, j), checked, passed)


def build_theta_cox(gkz: SecondaryFan, theta: Sequence[ThetaElement]) -> ThetaCox:
    """Assign each −d ∈ Θ the chamber containing d, lowest id on walls"""
    assigned = []
    agreements = []
    for e in theta:
        face = chamber_of(gkz, e.d)
        if face.chamber_id is not None:
            assigned.append(e.with_chamber(face.chamber_id))
            continue
        chambers = sorted(face.adjacent)
        if not chambers:
            raise InvariantError(f"class {e.d} lies in no chamber closure")
        for k, i in enumerate(chambers):
            for j in chambers[k + 1:]:
                check = _agreement(gkz, e, i, j)
                if not check.passed:
                    raise InvariantError(
                        f"support functions of {e.d} disagree on chambers {i} and {j}"
                    )
                agreements.append(check)
        assigned.append(e.with_chamber(chambers[0]))
        logger.debug(f"Wall element {e.class_vector} assigned to chamber {chambers[0]}")
    return ThetaCox(tuple(assigned), tuple(agreements))


@dataclass(frozen=True)
class EndAlgebra:
    """dims[i][j] = dim Hom(E_i → E_j), E_i = O(−d_i) in the chosen order"""

    class_group: ClassGroup
    elements: tuple[ThetaElement, ...]
    dims: tuple[tuple[int | None, ...], ...]
    bases: dict[tuple[int, int], tuple[Vector, ...] | None] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.elements)

    def compose(self, i: int, j: int, k: int, f: int, g: int) -> int:
        """Index in Hom(E_i → E_k) of basis element g ∘ f, f ∈ Hom(E_i → E_j), g ∈ Hom(E_j → E_k)"""
        first, second, target = self.bases[(i, j)], self.bases[(j, k)], self.bases[(i, k)]
        if first is None or second is None or target is None:
            raise PreconditionError("composition is only tabulated for finite Hom spaces")
        product = tuple(x + y for x, y in zip(first[f], second[g]))
        try:
            return target.index(product)
        except ValueError as e:
            raise InvariantError(f"product monomial {product} is missing from Hom({i}, {k})") from e


def endomorphism_algebra(cg: ClassGroup, ordered: Sequence[ThetaElement]) -> EndAlgebra:
    dims = []
    bases: dict[tuple[int, int], tuple[Vector, ...] | None] = {}
    for i, source in enumerate(ordered):
        row = []
        for j, target in enumerate(ordered):
            hom = hom_theta(cg, source.d, source.theta, target.d, target.theta)
            row.append(hom.dimension)
            bases[(i, j)] = hom.basis
        dims.append(tuple(row))
    logger.debug(f"Endomorphism algebra on {len(ordered)} objects")
    return EndAlgebra(cg, tuple(ordered), tuple(dims), bases)


@dataclass(frozen=True)
class Violation:
    kind: str
    pair: tuple[int, int]
    message: str


@dataclass(frozen=True)
class ExceptionalVerdict:
    passed: bool
    mode: str
    pairs_checked: int
    violations: tuple[Violation, ...] = ()


def has_complete_chambers(gkz: SecondaryFan) -> bool:
    """Whether every chamber fan is complete, so that Θ is ordered by effectivity"""
    return all(c.fan.is_complete for c in gkz.chambers)


def check_full_strong_exceptional(
    alg: EndAlgebra, gkz: SecondaryFan, characteristic: int = 0
) -> ExceptionalVerdict:
    """End = k, triangularity, and Ext concentrated in degree 0 on the chamber of the source"""
    complete = has_complete_chambers(gkz)
    mode = "full strong exceptional" if complete else "tilting"
    violations: list[Violation] = []
    n = len(alg)

    if complete:
        for i in range(n):
            if alg.dims[i][i] != 1:
                violations.append(Violation("endomorphisms", (i, i), f"End has dimension {alg.dims[i][i]}"))
        for i, j in is_triangular(alg.class_group, alg.elements):
            violations.append(
                Violation("triangularity", (i, j), f"Hom({j} → {i}) is nonzero against the order")
            )

    for i, source in enumerate(alg.elements):
        if source.chamber is None:
            raise PreconditionError("elements must be assigned to chambers first")
        for j, target in enumerate(alg.elements):
            c = alg.class_group.sub(source.d, target.d)
            table = chamber_cohomology(gkz, source.chamber, c, characteristic)
            if not table.higher_vanishes:
                violations.append(
                    Violation("higher_ext", (i, j), f"H^{{>0}} = {table.dims[1:]} on chamber {source.chamber}")
                )
            if table.dims[0] != alg.dims[i][j]:
                violations.append(
                    Violation(
                        "adjunction",
                        (i, j),
                        f"H⁰ = {table.dims[0]} on the chamber but Hom has dimension {alg.dims[i][j]}",
                    )
                )
    verdict = ExceptionalVerdict(not violations, mode, n * n, tuple(violations))
    logger.debug(f"Exceptionality check ({mode}): {'pass' if verdict.passed else 'fail'} on {n * n} pairs")
    return verdict
