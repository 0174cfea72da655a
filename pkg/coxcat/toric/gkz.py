"""The secondary fan: chambers with their fans, and faces with generalized-fan data.

Cells come from the hyperplane arrangement spanned by the degree vectors inside
the effective cone. Arrangement cells can be finer than the chamber complex, so
cells are merged by which cones pos{deg(x_ρ) : ρ ∈ S} contain them in their
relative interior.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations

import networkx as nx

from coxcat.core.errors import NonGenericError, PreconditionError
from coxcat.exact.matrix import (
    QVector,
    Vector,
    clear_denominators,
    dot,
    integer_kernel,
    nullspace,
    primitive,
    rank,
    solve,
)
from coxcat.exact.polyhedron import Equation, Inequality, RationalPolyhedron
from coxcat.toric.cohomology import CohomologyTable, line_bundle_cohomology
from coxcat.toric.divisor import ClassGroup, ClassVector, TorusDivisor, cox_polyhedron, rays_from_pairing
from coxcat.toric.fan import Fan, GeneralizedFan, StackyFan, validate_fan

logger = logging.getLogger(__name__)

Signature = frozenset[tuple[int, ...]]


@dataclass(frozen=True)
class Chamber:
    id: int
    sample: ClassVector
    rays: tuple[Vector, ...]
    fan: Fan
    irrelevant: tuple[frozenset[int], ...]
    stacky: StackyFan


@dataclass(frozen=True)
class Face:
    id: int
    sample: ClassVector
    dimension: int
    generalized: GeneralizedFan
    chamber_id: int | None = None
    adjacent: tuple[int, ...] = ()

    @property
    def is_chamber(self) -> bool:
        return self.chamber_id is not None


@dataclass(frozen=True)
class SecondaryFan:
    class_group: ClassGroup
    chambers: tuple[Chamber, ...]
    faces: tuple[Face, ...]
    signatures: tuple[Signature, ...] = field(default=(), repr=False)

    @cached_property
    def walls(self) -> nx.Graph:
        """Chambers joined along shared codimension-one faces"""
        graph = nx.Graph()
        graph.add_nodes_from(c.id for c in self.chambers)
        r = self.class_group.free_rank
        for face in self.faces:
            if face.dimension == r - 1 and len(face.adjacent) == 2:
                graph.add_edge(*face.adjacent, face=face.id)
        return graph

    def chamber(self, chamber_id: int) -> Chamber:
        return self.chambers[chamber_id]

    def face(self, face_id: int) -> Face:
        return self.faces[face_id]

    def interior_walls(self, chamber_id: int) -> list[Face]:
        """Codimension-one faces of a chamber shared with another chamber"""
        return [
            self.faces[data["face"]]
            for _, _, data in sorted(self.walls.edges(chamber_id, data=True))
        ]


def _free_degrees(cg: ClassGroup) -> list[Vector]:
    return [cg.free_part(d) for d in cg.degrees]


def arrangement_hyperplanes(degrees: Sequence[Vector], r: int) -> list[Vector]:
    if r == 1:
        return [(1,)]
    found: set[Vector] = set()
    for subset in combinations(range(len(degrees)), r - 1):
        vectors = [degrees[i] for i in subset]
        if rank(vectors) != r - 1:
            continue
        (normal,) = nullspace(vectors, r)
        h = clear_denominators(normal)
        if next(x for x in h if x != 0) < 0:
            h = tuple(-x for x in h)
        found.add(h)
    return sorted(found)


def _in_cone(generators: Sequence[Vector], x: Sequence[int | Fraction]) -> bool:
    """x ∈ pos(generators)"""
    k = len(generators)
    if not k:
        return all(v == 0 for v in x)
    polyhedron = RationalPolyhedron(
        k,
        tuple(Inequality.of([int(i == j) for j in range(k)], 0) for i in range(k)),
        tuple(Equation.of([g[j] for g in generators], x[j]) for j in range(len(x))),
    )
    return not polyhedron.is_empty()


def _cone_coordinates(degrees: Sequence[Vector], subset: Sequence[int], x: Sequence[int | Fraction]) -> QVector | None:
    columns = [[degrees[i][j] for i in subset] for j in range(len(x))]
    lam = solve(columns, list(x))
    if lam is None or any(dot(row, lam) != v for row, v in zip(columns, x)):
        return None
    return lam


def _independent_subsets(degrees: Sequence[Vector], r: int) -> list[tuple[int, ...]]:
    subsets = []
    for size in range(1, r + 1):
        for s in combinations(range(len(degrees)), size):
            if rank([degrees[i] for i in s]) == size:
                subsets.append(s)
    return subsets


def _signature(degrees: Sequence[Vector], subsets: Sequence[tuple[int, ...]], x: Sequence[int | Fraction]) -> Signature:
    """Independent subsets S with x in the relative interior of pos(deg S)"""
    inside = []
    for s in subsets:
        lam = _cone_coordinates(degrees, s, x)
        if lam is not None and all(v > 0 for v in lam):
            inside.append(s)
    return frozenset(inside)


def _arrangement_cells(hyperplanes: Sequence[Vector], r: int) -> list[tuple[int, QVector]]:
    """(dimension, relative-interior point) for every cell of the arrangement"""
    cells: list[list[tuple[Vector, int]]] = [[]]
    for h in hyperplanes:
        refined = []
        for cell in cells:
            for sign in (1, 0, -1):
                candidate = cell + [(h, sign)]
                if _cell_polyhedron(candidate, r).feasible()[0]:
                    refined.append(candidate)
        cells = refined
    result = []
    for cell in cells:
        ok, point = _cell_polyhedron(cell, r).feasible()
        assert ok and point is not None
        zeros = [h for h, s in cell if s == 0]
        result.append((r - (rank(zeros) if zeros else 0), point))
    return result


def _cell_polyhedron(cell: Sequence[tuple[Vector, int]], r: int) -> RationalPolyhedron:
    inequalities = [
        Inequality.of([sign * x for x in h], 0, strict=True) for h, sign in cell if sign
    ]
    equations = [Equation.of(h, 0) for h, sign in cell if not sign]
    return RationalPolyhedron(r, tuple(inequalities), tuple(equations))


def _as_class(cg: ClassGroup, point: Sequence[int | Fraction]) -> ClassVector:
    free = clear_denominators(point) if any(point) else tuple(0 for _ in point)
    return tuple(free) + tuple(0 for _ in cg.torsion)


def fan_of_point(cg: ClassGroup, d: Sequence[int | Fraction], rays: Sequence[Vector] | None = None) -> Fan:
    """GIT fan of a generic class: σ is a cone iff d ∈ relint pos{deg x_ρ : ρ ∉ σ}"""
    degrees = _free_degrees(cg)
    r = cg.free_rank
    point = list(d[:r])
    if rays is None:
        rays = rays_from_pairing(cg.beta)[0]
    k = len(degrees)
    n = len(rays[0]) if rays else 0

    for basis in combinations(range(k), r):
        if rank([degrees[i] for i in basis]) != r:
            continue
        lam = _cone_coordinates(degrees, basis, point)
        if lam is not None and all(v >= 0 for v in lam) and any(v == 0 for v in lam):
            raise NonGenericError(
                f"class {tuple(d)} lies on a wall of the secondary fan; use face_data"
            )

    cones = []
    for sigma in combinations(range(k), n):
        if rank([rays[i] for i in sigma]) != n:
            continue
        complement = [i for i in range(k) if i not in sigma]
        if rank([degrees[i] for i in complement]) != r:
            continue
        lam = _cone_coordinates(degrees, complement, point)
        if lam is not None and all(v > 0 for v in lam):
            cones.append(sigma)
    if not cones:
        raise PreconditionError(f"class {tuple(d)} is not in the interior of the effective cone")
    return validate_fan(n, rays, cones)


def _quotient_fan(
    n: int, beta: Sequence[Vector], lineality: list[Vector], tight_sets: list[frozenset[int]]
) -> tuple[tuple[Vector, ...], Fan, tuple[Vector, ...]]:
    projection = tuple(integer_kernel(lineality, n)) if lineality else tuple(
        tuple(int(i == j) for j in range(n)) for i in range(n)
    )
    q = len(projection)
    images = tuple(tuple(int(dot(row, b)) for row in projection) for b in beta)

    rays: list[Vector] = []
    cones = []
    for tight in tight_sets:
        generators = sorted({primitive(images[i]) for i in tight if any(images[i])})
        extreme = [
            g for g in generators if not _in_cone([h for h in generators if h != g], g)
        ]
        members = []
        for g in extreme:
            if g not in rays:
                rays.append(g)
            members.append(rays.index(g))
        cones.append(frozenset(members))
    if q == 0:
        return projection, Fan(0, (), (frozenset(),)), images
    maximal = {c for c in cones if not any(c < other for other in cones)}
    return projection, Fan(q, tuple(rays), tuple(sorted(maximal, key=sorted))), images


def face_data(cg: ClassGroup, d: Sequence[int], a: Sequence[int] | None = None) -> GeneralizedFan:
    """Normal quasi-fan of the section polyhedron of a lift of d"""
    a = tuple(a) if a is not None else cg.lift(d)
    if cg.degree(a) != cg.normalize(d):
        raise PreconditionError(f"lift {a} does not have class {tuple(d)}")
    polyhedron = cox_polyhedron(cg, a)
    if polyhedron.is_empty():
        raise PreconditionError(f"class {tuple(d)} is not effective")
    n = cg.lattice_rank

    implicit = set(polyhedron.implicit_equalities())
    lineality_rows = [cg.beta[i] for i in sorted(implicit)]
    # saturation of span{β_ρ : ρ tight on all of P}
    lineality = integer_kernel(integer_kernel(lineality_rows, n), n) if lineality_rows else []

    contracted = set()
    for rho, b in enumerate(cg.beta):
        result = polyhedron.maximize([-x for x in b])
        if result.optimal and result.value is not None and -result.value > -a[rho]:
            contracted.add(rho)

    tight_sets = []
    for vertex in polyhedron.vertices():
        tight_sets.append(
            frozenset(
                rho for rho, b in enumerate(cg.beta)
                if dot(vertex, b) == -a[rho] and rho not in implicit
            )
        )
    projection, quotient, images = _quotient_fan(n, cg.beta, lineality, tight_sets)
    logger.debug(
        f"Face of {tuple(d)}: lineality {len(lineality)}, contracted {sorted(contracted)}"
    )
    return GeneralizedFan(
        tuple(lineality), projection, quotient, frozenset(contracted), images
    )


def secondary_fan(cg: ClassGroup) -> SecondaryFan:
    """Chamber complex of the degree vectors inside the effective cone"""
    r = cg.free_rank
    if r < 1:
        raise PreconditionError("the class group has rank 0; there is no secondary fan")
    degrees = _free_degrees(cg)
    if rank(degrees) != r:
        raise PreconditionError("degrees do not span the class group")

    subsets = _independent_subsets(degrees, r)
    pieces: dict[Signature, tuple[int, QVector]] = {}
    for dim, point in _arrangement_cells(arrangement_hyperplanes(degrees, r), r):
        if not _in_cone(degrees, point):
            continue
        sig = _signature(degrees, subsets, point)
        if sig not in pieces or pieces[sig][0] < dim:
            pieces[sig] = (dim, point)

    ordered = sorted(pieces.items(), key=lambda item: (item[1][0], _as_class(cg, item[1][1])))
    rays, multipliers = rays_from_pairing(cg.beta)

    chamber_cells = [(sig, point) for sig, (dim, point) in ordered if dim == r]
    chambers = []
    for cid, (sig, point) in enumerate(chamber_cells):
        sample = _as_class(cg, point)
        fan = fan_of_point(cg, sample, rays)
        irrelevant = tuple(
            frozenset(i for i in range(len(degrees)) if i not in cone) for cone in fan.cones
        )
        chambers.append(Chamber(cid, sample, (), fan, irrelevant, StackyFan(fan, multipliers)))

    def closure_contains(chamber_sig: Signature, x: QVector) -> bool:
        for s in chamber_sig:
            if len(s) != r:
                continue
            lam = _cone_coordinates(degrees, s, x)
            if lam is None or any(v < 0 for v in lam):
                return False
        return True

    faces = []
    for fid, (sig, (dim, point)) in enumerate(ordered):
        adjacent = tuple(
            cid for cid, (csig, _) in enumerate(chamber_cells) if closure_contains(csig, point)
        )
        chamber_id = next((c for c, (csig, _) in enumerate(chamber_cells) if csig == sig), None)
        sample = _as_class(cg, point)
        faces.append(Face(fid, sample, dim, face_data(cg, sample), chamber_id, adjacent))

    chambers = [
        Chamber(
            c.id,
            c.sample,
            tuple(f.sample[:r] for f in faces if f.dimension == 1 and c.id in f.adjacent),
            c.fan,
            c.irrelevant,
            c.stacky,
        )
        for c in chambers
    ]
    logger.info(f"Found {len(chambers)} chambers and {len(faces)} faces")
    return SecondaryFan(cg, tuple(chambers), tuple(faces), tuple(sig for sig, _ in ordered))


def chamber_of(gkz: SecondaryFan, c: Sequence[int]) -> Face:
    """The cell of the secondary fan containing the class; a chamber's own face when generic"""
    cg = gkz.class_group
    degrees = _free_degrees(cg)
    point = list(cg.free_part(cg.normalize(c)))
    if not _in_cone(degrees, point):
        raise PreconditionError(f"class {tuple(c)} is not effective")
    sig = _signature(degrees, _independent_subsets(degrees, cg.free_rank), point)
    for face, face_sig in zip(gkz.faces, gkz.signatures):
        if face_sig == sig:
            return face
    raise PreconditionError(f"class {tuple(c)} lies in no cell of the secondary fan")


def chamber_cohomology(
    gkz: SecondaryFan, chamber_id: int, c: Sequence[int], characteristic: int = 0
) -> CohomologyTable:
    """H^*(𝒳_i, O(c)) on a chamber stack through any torus-invariant lift"""
    chamber = gkz.chamber(chamber_id)
    a = gkz.class_group.lift(c)
    return line_bundle_cohomology(chamber.stacky, TorusDivisor(a), characteristic)
