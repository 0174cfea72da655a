"""Common stacky refinement of several simplicial fans with the same support"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import lcm

from coxcat.core.errors import InvariantError, PreconditionError
from coxcat.exact.matrix import Vector, inverse, matmul, nullspace, rank
from coxcat.exact.polyhedron import Inequality, RationalPolyhedron
from coxcat.toric.fan import Cone, ConeRelation, Fan, StackyFan, minimal_cone_relation

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChartMap:
    """Certificate that the refinement maps to one input fan.

    `phi` has one row per ray of the input fan and one column per refinement
    ray, with β_input·phi = β_refinement.
    """

    fan: Fan
    relations: tuple[ConeRelation, ...]
    phi: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class Refinement:
    stacky: StackyFan
    charts: tuple[ChartMap, ...]

    @property
    def fan(self) -> Fan:
        return self.stacky.fan


def _facet_normals(fan: Fan, cone: Cone) -> list[tuple[Fraction, ...]]:
    indices = sorted(cone)
    basis = [fan.rays[i] for i in indices]
    columns = [[basis[j][k] for j in range(len(basis))] for k in range(fan.rank)]
    return [tuple(row) for row in inverse(columns)]


def _intersection_rays(fan_a: Fan, a: Cone, fan_b: Fan, b: Cone) -> list[Vector] | None:
    n = fan_a.rank
    inequalities = [Inequality(m, Fraction(0)) for m in _facet_normals(fan_a, a)]
    inequalities += [Inequality(m, Fraction(0)) for m in _facet_normals(fan_b, b)]
    cone = RationalPolyhedron(n, tuple(inequalities))
    if cone.dimension() < n:
        return None
    return cone.recession_rays()


def _facets(rays: Sequence[Vector], members: frozenset[int], dim: int) -> list[frozenset[int]]:
    """Facets of the cone spanned by the member rays, as member subsets"""
    ordered = sorted(members)
    found: set[frozenset[int]] = set()
    for subset in combinations(ordered, dim - 1):
        vectors = [rays[i] for i in subset]
        if vectors and rank(vectors) != dim - 1:
            continue
        for m in nullspace(vectors, len(rays[0])) if vectors else []:
            values = {i: sum(Fraction(x) * y for x, y in zip(m, rays[i])) for i in ordered}
            if all(v == 0 for v in values.values()):
                continue
            if all(v >= 0 for v in values.values()) or all(v <= 0 for v in values.values()):
                found.add(frozenset(i for i, v in values.items() if v == 0))
                break
    return sorted(found, key=sorted)


def _pulling_triangulation(rays: Sequence[Vector], members: frozenset[int], dim: int) -> list[frozenset[int]]:
    if len(members) == dim:
        return [members]
    apex = min(members)
    cones = []
    for facet in _facets(rays, members, dim):
        if apex in facet:
            continue
        for simplex in _pulling_triangulation(rays, facet, dim - 1):
            cones.append(simplex | {apex})
    return cones


def _refine_pair(first: Fan, second: Fan) -> Fan:
    rays: list[Vector] = list(first.rays)
    index = {r: i for i, r in enumerate(rays)}
    pieces: list[list[Vector]] = []
    for a in first.cones:
        for b in second.cones:
            extreme = _intersection_rays(first, a, second, b)
            if extreme is not None:
                pieces.append(extreme)
    for ray in sorted({r for piece in pieces for r in piece} - set(index)):
        index[ray] = len(rays)
        rays.append(ray)

    cones: list[frozenset[int]] = []
    for piece in pieces:
        members = frozenset(index[r] for r in piece)
        if len(members) == first.rank:
            cones.append(members)
        else:
            cones.extend(_pulling_triangulation(rays, members, first.rank))
    return Fan(first.rank, tuple(rays), tuple(sorted(set(cones), key=sorted)))


def _inside(fan: Fan, cone: Cone, v: Vector) -> bool:
    coords = fan.cone_coordinates(cone, v)
    return coords is not None and all(x >= 0 for x in coords.values())


def _check_refines(fine: Fan, coarse: Fan) -> None:
    for cone in fine.cones:
        generators = [fine.rays[i] for i in cone]
        if not any(all(_inside(coarse, c, g) for g in generators) for c in coarse.cones):
            raise InvariantError(f"refinement cone {sorted(cone)} is not inside a cone of the input")


def common_stacky_refinement(fans: Sequence[Fan]) -> Refinement:
    """Simplicial Λ refining every input, with multipliers c_ρ = lcm_i a_{ρi}"""
    if not fans:
        raise PreconditionError("at least one fan is required")
    for fan in fans:
        if not fan.is_simplicial:
            raise PreconditionError("refinement inputs must be simplicial")
        if not fan.is_pure:
            raise PreconditionError("refinement inputs must have full-dimensional maximal cones")
    for fan in fans[1:]:
        if fan.rank != fans[0].rank:
            raise PreconditionError("support mismatch: fans live in different lattices")
        for u in (fans[0].rays[i] for i in fans[0].used_rays):
            if not fan.contains_point(u):
                raise PreconditionError(f"support mismatch: ray {u} is not in every fan")
        for u in (fan.rays[i] for i in fan.used_rays):
            if not fans[0].contains_point(u):
                raise PreconditionError(f"support mismatch: ray {u} is not in every fan")

    refined = fans[0]
    for fan in fans[1:]:
        refined = _refine_pair(refined, fan)

    relations = [
        tuple(
            minimal_cone_relation(fan, ray) if fan.contains_point(ray) else ConeRelation(frozenset(), 1, ())
            for ray in refined.rays
        )
        for fan in fans
    ]
    multipliers = tuple(
        lcm(*(rel[rho].scale for rel in relations)) for rho in range(len(refined.rays))
    )
    stacky = StackyFan(refined, multipliers)

    charts = []
    for fan, rels in zip(fans, relations):
        _check_refines(refined, fan)
        phi = [[0] * len(refined.rays) for _ in fan.rays]
        for rho, rel in enumerate(rels):
            for tau, a_tau in rel.coefficients:
                phi[tau][rho] = multipliers[rho] // rel.scale * a_tau
        beta_in = [[fan.rays[t][k] for t in range(len(fan.rays))] for k in range(fan.rank)]
        image = matmul(beta_in, phi)
        for rho in refined.used_rays:
            if [row[rho] for row in image] != list(stacky.beta[rho]):
                raise InvariantError(f"stacky refinement certificate fails on ray {rho}")
        charts.append(ChartMap(fan, rels, tuple(tuple(row) for row in phi)))

    logger.debug(
        f"Common refinement has {len(refined.used_rays)} rays and {len(refined.cones)} cones"
    )
    return Refinement(stacky, tuple(charts))
