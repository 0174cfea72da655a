"""Primitive collections and single-wall reduction of Θ"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from itertools import combinations

from coxcat.core.errors import InvariantError, PreconditionError
from coxcat.exact.matrix import Vector, clear_denominators, dot, nullspace, primitive
from coxcat.theta.collection import Interval, ThetaElement, Zonotope, theta_membership
from coxcat.toric.divisor import ClassGroup, ClassVector
from coxcat.toric.fan import Fan, minimal_cone_relation
from coxcat.toric.gkz import Face, SecondaryFan, arrangement_hyperplanes

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PrimitiveCollection:
    """Σ circuit[ρ]·u_ρ = 0 with circuit[ρ] > 0 exactly on P"""

    rays: frozenset[int]
    circuit: tuple[int, ...]


def primitive_collections(fan: Fan) -> list[PrimitiveCollection]:
    if not fan.is_simplicial:
        raise PreconditionError("primitive collections need a simplicial fan")
    faces = set(fan.faces)
    found: list[frozenset[int]] = []
    for size in range(2, len(fan.used_rays) + 1):
        for subset in combinations(fan.used_rays, size):
            s = frozenset(subset)
            if s in faces or any(p <= s for p in found):
                continue
            if all(s - {rho} in faces for rho in s):
                found.append(s)

    collections = []
    for p in found:
        total = [sum(fan.rays[rho][i] for rho in p) for i in range(fan.rank)]
        circuit = [0] * len(fan.rays)
        if fan.contains_point(total):
            relation = minimal_cone_relation(fan, total)
            for rho in p:
                circuit[rho] += relation.scale
            for tau, c in relation.coefficients:
                circuit[tau] -= c
        else:
            # sum outside the support: fall back to a kernel vector on P
            (kernel,) = nullspace([[fan.rays[rho][i] for rho in sorted(p)] for i in range(fan.rank)], len(p))
            for rho, c in zip(sorted(p), clear_denominators(kernel)):
                circuit[rho] = c
        collections.append(PrimitiveCollection(p, primitive(circuit)))
    return collections


@dataclass(frozen=True)
class KoszulStep:
    subset: tuple[int, ...]
    twist: ClassVector
    wall_degree: int
    in_theta: bool


@dataclass(frozen=True)
class KoszulCertificate:
    element: ClassVector
    steps: tuple[KoszulStep, ...]

    @property
    def passed(self) -> bool:
        by_size: dict[int, set[int]] = {}
        for step in self.steps:
            by_size.setdefault(len(step.subset), set()).add(step.wall_degree)
        sizes = sorted(by_size)
        increasing = all(
            max(by_size[a]) < min(by_size[b]) for a, b in zip(sizes, sizes[1:])
        )
        return increasing and all(s.in_theta for s in self.steps)


@dataclass(frozen=True)
class SharpenReport:
    wall: int | None
    interior: bool
    collection: frozenset[int] = frozenset()
    wall_degrees: tuple[int, ...] = ()
    reduced: tuple[ClassVector, ...] = ()
    kept: tuple[ClassVector, ...] = ()
    koszul: tuple[KoszulCertificate, ...] = ()
    collection_matches: bool = True
    notes: tuple[str, ...] = field(default=())


def wall_functional(gkz: SecondaryFan, chamber_id: int, wall: Face) -> Vector:
    """Primitive ℓ on Cl_ℝ vanishing on the wall and positive on the chamber"""
    cg = gkz.class_group
    r = cg.free_rank
    degrees = [cg.free_part(d) for d in cg.degrees]
    point = wall.sample[:r]
    # the sample of a codimension-one face lies on exactly one arrangement hyperplane
    candidates = [h for h in arrangement_hyperplanes(degrees, r) if dot(h, point) == 0]
    if wall.dimension != r - 1 or len(candidates) != 1:
        raise PreconditionError(f"face {wall.id} is not a wall of the secondary fan")
    (ell,) = candidates
    sample = gkz.chamber(chamber_id).sample[:r]
    if dot(ell, sample) < 0:
        ell = tuple(-x for x in ell)
    if dot(ell, sample) == 0:
        raise InvariantError("wall functional vanishes on the chamber sample")
    return ell


def koszul_degrees(
    cg: ClassGroup, c: Sequence[int], collection: Sequence[int], ell: Sequence[int]
) -> KoszulCertificate:
    """Twists of K_P(−d) for the class c = −d, each checked against Θ"""
    steps = []
    members = sorted(collection)
    for size in range(len(members) + 1):
        for subset in combinations(members, size):
            twist = cg.normalize(c)
            for rho in subset:
                twist = cg.sub(twist, cg.degrees[rho])
            steps.append(
                KoszulStep(
                    subset,
                    twist,
                    -int(dot(ell, cg.free_part(twist))),
                    theta_membership(cg, twist)[0],
                )
            )
    return KoszulCertificate(cg.normalize(c), tuple(steps))


def sharpened_reduction(
    gkz: SecondaryFan, chamber_id: int, wall: Face, theta: Sequence[ThetaElement]
) -> SharpenReport:
    """Remove Θ_Γ° = Z₋° ∩ Cl from Θ for one interior wall of a chamber"""
    cg = gkz.class_group
    if cg.torsion:
        raise PreconditionError("wall reduction needs a torsion-free class group")
    if len(wall.adjacent) < 2 or chamber_id not in wall.adjacent:
        logger.info(f"Face {wall.id} is not an interior wall of chamber {chamber_id}")
        return SharpenReport(
            wall.id,
            False,
            kept=tuple(e.class_vector for e in theta),
            notes=("wall is not interior to the secondary fan; nothing is removed",),
        )

    ell = wall_functional(gkz, chamber_id, wall)
    wall_degrees = tuple(int(dot(ell, cg.free_part(d))) for d in cg.degrees)
    collection = frozenset(rho for rho, b in enumerate(wall_degrees) if b > 0)

    fan = gkz.chamber(chamber_id).fan
    matches = any(
        pc.rays == collection and pc.circuit == wall_degrees for pc in primitive_collections(fan)
    )
    if not matches:
        logger.warning(
            f"Wall degrees {wall_degrees} do not match a primitive collection of chamber {chamber_id}"
        )

    others = [cg.degrees[rho] for rho in range(cg.n_rays) if rho not in collection]
    open_part = Zonotope.of(others, Interval.OPEN)
    reduced = tuple(sorted(tuple(p) for p in open_part.lattice_points()))
    kept = tuple(e.class_vector for e in theta if e.class_vector not in reduced)

    certificates = tuple(koszul_degrees(cg, c, collection, ell) for c in reduced)
    for cert in certificates:
        if not cert.passed:
            raise InvariantError(f"Koszul complex of {cert.element} leaves Θ or fails to descend")
    logger.debug(f"Wall {wall.id} removes {len(reduced)} elements of Θ")
    return SharpenReport(
        wall.id, True, collection, wall_degrees, reduced, kept, certificates, matches
    )
