"""Line-bundle cohomology on toric stacks and Hom spaces between Θ-twists.

H^p(O(D)) = ⨁_m H̃^{p−1}(V_{D,m}) where V_{D,m} is the full subcomplex of the
fan's nerve on the rays with ⟨m, β(e_ρ)⟩ < −a_ρ. Weights giving the same ray
set are counted together as lattice points of one polyhedron.
"""

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import ceil, floor

from coxcat.core.errors import InvariantError, PreconditionError
from coxcat.exact.matrix import QVector, Vector, dot, rank, solve
from coxcat.exact.polyhedron import Inequality, RationalPolyhedron
from coxcat.toric.divisor import (
    ClassGroup,
    ClassVector,
    TorusDivisor,
    is_nef,
    monomials,
    section_polyhedron,
)
from coxcat.toric.fan import Cone, Fan, StackyFan

logger = logging.getLogger(__name__)

Simplex = frozenset[int]


def _close(faces: Iterable[Iterable[int]]) -> set[Simplex]:
    closed: set[Simplex] = {frozenset()}
    for face in faces:
        f = sorted(face)
        for k in range(len(f) + 1):
            closed.update(frozenset(s) for s in combinations(f, k))
    return closed


def _boundary(faces_p: list[Simplex], faces_q: list[Simplex]) -> list[list[int]]:
    """Matrix of ∂: C_p → C_{p−1}, rows indexed by faces_q"""
    position = {f: i for i, f in enumerate(faces_q)}
    matrix = [[0] * len(faces_p) for _ in faces_q]
    for j, face in enumerate(faces_p):
        for k, vertex in enumerate(sorted(face)):
            matrix[position[face - {vertex}]][j] = (-1) ** k
    return matrix


def reduced_homology(faces: Iterable[Iterable[int]], characteristic: int = 0) -> tuple[int, ...]:
    """Reduced Betti numbers (b̃_{−1}, b̃_0, …) over the prime field"""
    closed = _close(faces)
    top = max(len(f) for f in closed) - 1
    by_dim: dict[int, list[Simplex]] = {
        p: sorted((f for f in closed if len(f) == p + 1), key=sorted) for p in range(-1, top + 1)
    }
    ranks: dict[int, int] = {}
    for p in range(0, top + 1):
        matrix = _boundary(by_dim[p], by_dim[p - 1])
        ranks[p] = rank(matrix, characteristic) if by_dim[p] else 0
    betti = []
    for p in range(-1, top + 1):
        b = len(by_dim[p]) - ranks.get(p, 0) - ranks.get(p + 1, 0)
        betti.append(b)
    return tuple(betti)


@lru_cache(maxsize=256)
def _full_subcomplex_homology(
    cones: tuple[Cone, ...], vertices: frozenset[int], characteristic: int
) -> tuple[int, ...]:
    faces = [c & vertices for c in cones]
    return reduced_homology(faces, characteristic)


@dataclass(frozen=True)
class WeightComplex:
    """V_{D,m} as the ray set it is spanned by, with its reduced homology"""

    rays: frozenset[int]
    betti: tuple[int, ...]
    weights: int | None
    sample: tuple[int, ...] | None = None

    def contributes(self, p: int) -> int:
        index = p  # b̃_{p−1} sits at position p
        return self.betti[index] if 0 <= index < len(self.betti) else 0


@dataclass(frozen=True)
class CohomologyTable:
    dims: tuple[int | None, ...]
    complexes: tuple[WeightComplex, ...] = field(default=())
    outside_pullback: bool = False

    def h(self, p: int) -> int | None:
        return self.dims[p] if 0 <= p < len(self.dims) else 0

    @property
    def higher_vanishes(self) -> bool:
        return all(d == 0 for d in self.dims[1:])

    def contributing(self, p: int) -> list[WeightComplex]:
        return [c for c in self.complexes if c.contributes(p)]


def _as_stacky(sf: StackyFan | Fan) -> StackyFan:
    return StackyFan.of(sf) if isinstance(sf, Fan) else sf


def _weight_region(
    sf: StackyFan, D: TorusDivisor, vertices: frozenset[int]
) -> RationalPolyhedron:
    inequalities = []
    for rho in sf.fan.used_rays:
        b = sf.beta[rho]
        a = D.coefficients[rho]
        if rho in vertices:
            # ⟨m, β⟩ < −a on integers
            inequalities.append(Inequality.of([-x for x in b], a + 1))
        else:
            inequalities.append(Inequality.of(b, -a))
    return RationalPolyhedron(sf.fan.rank, tuple(inequalities))


def line_bundle_cohomology(
    sf: StackyFan | Fan, D: TorusDivisor, characteristic: int = 0
) -> CohomologyTable:
    """h^p(O(D)) for p = 0..n; None marks an infinite-dimensional group"""
    sf = _as_stacky(sf)
    fan = sf.fan
    if not fan.is_simplicial:
        raise PreconditionError("line bundle cohomology needs a simplicial fan")
    if len(D) != len(fan.rays):
        raise PreconditionError("divisor length does not match the ray count")

    outside = any(D.coefficients[r] % sf.multipliers[r] for r in fan.used_rays)
    if outside:
        logger.warning("divisor is not pulled back from the coarse space; using the β-pairing formula")

    n = fan.rank
    dims: list[int | None] = [0] * (n + 1)
    complexes = []
    used = fan.used_rays
    for size in range(len(used) + 1):
        for subset in combinations(used, size):
            vertices = frozenset(subset)
            betti = _full_subcomplex_homology(fan.cones, vertices, characteristic)
            if not any(betti):
                continue
            region = _weight_region(sf, D, vertices)
            count = region.count_lattice_points()
            if count == 0:
                continue
            sample = region.find_lattice_point()
            complexes.append(WeightComplex(vertices, betti, count, sample))
            for p in range(n + 1):
                b = betti[p] if p < len(betti) else 0
                if not b:
                    continue
                if count is None or dims[p] is None:
                    dims[p] = None
                else:
                    dims[p] = dims[p] + b * count  # type: ignore[operator]
            logger.debug(f"V = {sorted(vertices)} contributes betti {betti} on {count} weights")

    h0 = section_polyhedron(sf, D).count_lattice_points()
    if h0 != dims[0]:
        raise InvariantError(f"h⁰ = {dims[0]} disagrees with {h0} section lattice points")
    return CohomologyTable(tuple(dims), tuple(complexes), outside)


def local_vertices(sf: StackyFan | Fan, D: TorusDivisor) -> list[QVector]:
    """m_σ solving ⟨m_σ, β(e_ρ)⟩ = −a_ρ on each maximal cone"""
    sf = _as_stacky(sf)
    found = []
    for cone in sf.fan.cones:
        rows = [sf.beta[i] for i in sorted(cone)]
        m = solve(rows, [-D.coefficients[i] for i in sorted(cone)])
        if m is not None:
            found.append(m)
    return found


def weight_box(sf: StackyFan | Fan, D: TorusDivisor, margin: int = 1) -> list[tuple[int, int]]:
    """Integer box around the local vertices, expanded by a margin"""
    sf = _as_stacky(sf)
    verts = local_vertices(sf, D) or [tuple(Fraction(0) for _ in range(sf.fan.rank))]
    return [
        (floor(min(v[i] for v in verts)) - margin, ceil(max(v[i] for v in verts)) + margin)
        for i in range(sf.fan.rank)
    ]


def cech_box(sf: StackyFan | Fan, D: TorusDivisor, margin: int = 1) -> list[tuple[int, int]]:
    """weight_box widened to every bounded weight region with nonzero reduced homology

    Weights of finite-dimensional cohomology on a non-complete fan can sit away
    from the local vertices.
    """
    sf = _as_stacky(sf)
    box = weight_box(sf, D, margin)
    used = sf.fan.used_rays
    for size in range(len(used) + 1):
        for subset in combinations(used, size):
            vertices = frozenset(subset)
            if not any(_full_subcomplex_homology(sf.fan.cones, vertices, 0)):
                continue
            region = _weight_region(sf, D, vertices)
            if not region.is_bounded():
                continue
            extra = region.integer_box()
            if extra is not None:
                box = [(min(lo, a), max(hi, b)) for (lo, hi), (a, b) in zip(box, extra)]
    return box


def cech_cohomology(
    sf: StackyFan | Fan,
    D: TorusDivisor,
    box: Sequence[tuple[int, int]] | None = None,
    characteristic: int = 0,
) -> tuple[int, ...]:
    """Čech cohomology over the affine cover by maximal cones, weight by weight in a box"""
    sf = _as_stacky(sf)
    fan = sf.fan
    n = fan.rank
    box = list(box) if box is not None else cech_box(sf, D)
    cones = list(fan.cones)
    tuples: dict[int, list[tuple[int, ...]]] = {
        p: list(combinations(range(len(cones)), p + 1)) for p in range(n + 2)
    }
    meets: dict[tuple[int, ...], frozenset[int]] = {}
    for p in tuples:
        for t in tuples[p]:
            common = frozenset(cones[t[0]])
            for i in t[1:]:
                common &= cones[i]
            meets[t] = common

    dims = [0] * (n + 1)
    for m in RationalPolyhedron.box(box).lattice_points():
        sections = {r for r in fan.used_rays if dot(m, sf.beta[r]) >= -D.coefficients[r]}
        basis = {p: [t for t in tuples[p] if meets[t] <= sections] for p in tuples}
        ranks = {}
        for p in range(n + 1):
            source, target = basis[p], basis[p + 1]
            position = {t: i for i, t in enumerate(target)}
            matrix = [[0] * len(source) for _ in target]
            for j, t in enumerate(source):
                for big in target:
                    if set(t) <= set(big):
                        missing = next(i for i, x in enumerate(big) if x not in t)
                        matrix[position[big]][j] = (-1) ** missing
            ranks[p] = rank(matrix, characteristic) if source and target else 0
        for p in range(n + 1):
            dims[p] += len(basis[p]) - ranks[p] - ranks.get(p - 1, 0)
    return tuple(dims)


@dataclass(frozen=True)
class HomSpace:
    dimension: int | None
    basis: tuple[Vector, ...] | None


def ceiling_divisor(beta: Sequence[Vector], theta: Sequence[Fraction]) -> Vector:
    """d(θ)_ρ = ⌈⟨θ, β(e_ρ)⟩⌉"""
    return tuple(ceil(dot(theta, b)) for b in beta)


def hom_theta(
    cg: ClassGroup,
    d: Sequence[int],
    theta: Sequence[Fraction],
    d_prime: Sequence[int],
    theta_prime: Sequence[Fraction],
) -> HomSpace:
    """Hom(O(−d), O(−d′)) as #(P_d ∩ (M − θ′)) and as the monomials of degree d − d′"""
    witness = ceiling_divisor(cg.beta, theta)
    if cg.degree(witness) != cg.normalize(d):
        raise PreconditionError(f"witness {tuple(theta)} does not realize the class {tuple(d)}")
    if cg.degree(ceiling_divisor(cg.beta, theta_prime)) != cg.normalize(d_prime):
        raise PreconditionError(f"witness {tuple(theta_prime)} does not realize {tuple(d_prime)}")

    shifted = RationalPolyhedron(
        cg.lattice_rank,
        tuple(
            Inequality.of(b, dot(theta_prime, b) - w) for b, w in zip(cg.beta, witness)
        ),
    )
    count = shifted.count_lattice_points()
    basis = monomials(cg, cg.sub(d, d_prime))
    other = None if basis is None else len(basis)
    if count != other:
        raise InvariantError(
            f"Hom count {count} from P_d ∩ (M − θ′) disagrees with {other} monomials"
        )
    return HomSpace(count, None if basis is None else tuple(basis))


@dataclass(frozen=True)
class HomzeroReport:
    passed: bool
    h0: int | None
    predicted: int | None
    higher: tuple[int | None, ...]
    offending: tuple[tuple[int, ...], ...] = ()


def verify_homzero(
    sf: StackyFan | Fan, A: TorusDivisor, theta: Sequence[Fraction], characteristic: int = 0
) -> HomzeroReport:
    """h⁰(O(A − d)) = #(P_A ∩ (M − θ)) and h^{>0}(O(A − d)) = 0 for nef A"""
    sf = _as_stacky(sf)
    if not is_nef(sf, A):
        raise PreconditionError("verify_homzero needs a nef divisor A")
    d = ceiling_divisor(sf.beta, theta)
    table = line_bundle_cohomology(sf, A - TorusDivisor(d), characteristic)
    predicted = translated_count(sf, A, theta)
    offending = tuple(
        c.sample for p in range(1, len(table.dims)) for c in table.contributing(p) if c.sample
    )
    passed = table.dims[0] == predicted and table.higher_vanishes
    return HomzeroReport(passed, table.dims[0], predicted, table.dims[1:], offending)


def class_cohomology(
    sf: StackyFan | Fan, cg: ClassGroup, c: ClassVector, characteristic: int = 0
) -> CohomologyTable:
    """Cohomology of O(c) for a class of the Cox grading, through any lift"""
    return line_bundle_cohomology(sf, TorusDivisor(cg.lift(c)), characteristic)


def translated_count(sf: StackyFan | Fan, A: TorusDivisor, theta: Sequence[Fraction]) -> int | None:
    """#(P_A ∩ (M − θ)) over the rays the fan uses"""
    sf = _as_stacky(sf)
    shifted = RationalPolyhedron(
        sf.fan.rank,
        tuple(
            Inequality.of(sf.beta[r], dot(theta, sf.beta[r]) - A.coefficients[r])
            for r in sf.fan.used_rays
        ),
    )
    return shifted.count_lattice_points()
