"""Class groups, torus-invariant divisors, support functions and section polyhedra"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import gcd

from coxcat.core.errors import InvariantError, PreconditionError, SchemaError
from coxcat.exact.matrix import (
    QVector,
    Vector,
    determinant,
    dot,
    integer_kernel,
    inverse,
    lattice_solve,
    mat_vec,
    matmul,
    nullspace,
    rank,
    smith_normal_form,
    solve,
    transpose,
)
from coxcat.exact.polyhedron import Inequality, RationalPolyhedron
from coxcat.toric.fan import Cone, Fan, StackyFan

logger = logging.getLogger(__name__)

ClassVector = tuple[int, ...]


@dataclass(frozen=True)
class ClassGroup:
    """Presentation of Cl as ℤ^r ⊕ ⨁ ℤ/t_i with the degree map on ℤ^{rays}.

    `beta` holds the rows β(e_ρ) ∈ ℤⁿ of the pairing M → ℤ^{rays}; the degree
    map kills exactly its image.
    """

    free_rank: int
    torsion: tuple[int, ...]
    free_matrix: tuple[tuple[int, ...], ...]
    torsion_matrix: tuple[tuple[int, ...], ...]
    beta: tuple[Vector, ...]
    index: int = 1

    @property
    def n_rays(self) -> int:
        return len(self.beta)

    @property
    def lattice_rank(self) -> int:
        return len(self.beta[0]) if self.beta else 0

    def normalize(self, c: Sequence[int]) -> ClassVector:
        r = self.free_rank
        free = tuple(int(x) for x in c[:r])
        tors = tuple(int(x) % t for x, t in zip(c[r:], self.torsion))
        return free + tors

    def degree(self, a: Sequence[int]) -> ClassVector:
        free = mat_vec(self.free_matrix, a) if self.free_matrix else []
        tors = mat_vec(self.torsion_matrix, a) if self.torsion_matrix else []
        return self.normalize([int(x) for x in free] + [int(x) for x in tors])

    @cached_property
    def degrees(self) -> tuple[ClassVector, ...]:
        return tuple(
            self.degree([int(i == rho) for i in range(self.n_rays)]) for rho in range(self.n_rays)
        )

    def free_part(self, c: Sequence[int]) -> tuple[int, ...]:
        return tuple(int(x) for x in c[: self.free_rank])

    def add(self, c: Sequence[int], e: Sequence[int]) -> ClassVector:
        return self.normalize([x + y for x, y in zip(c, e)])

    def sub(self, c: Sequence[int], e: Sequence[int]) -> ClassVector:
        return self.normalize([x - y for x, y in zip(c, e)])

    def neg(self, c: Sequence[int]) -> ClassVector:
        return self.normalize([-x for x in c])

    @property
    def zero(self) -> ClassVector:
        return tuple([0] * (self.free_rank + len(self.torsion)))

    @cached_property
    def canonical(self) -> ClassVector:
        """ω = −Σ deg(x_ρ)"""
        total = self.zero
        for d in self.degrees:
            total = self.add(total, d)
        return self.neg(total)

    def lift(self, c: Sequence[int]) -> Vector:
        """Some a ∈ ℤ^{rays} with degree(a) = c"""
        k, t = self.n_rays, len(self.torsion)
        rows = [list(row) + [0] * t for row in self.free_matrix]
        for i, row in enumerate(self.torsion_matrix):
            rows.append(list(row) + [self.torsion[j] if j == i else 0 for j in range(t)])
        solution = lattice_solve(rows, list(self.normalize(c)), k + t)
        if solution is None:
            raise PreconditionError(f"class {tuple(c)} is not in the image of the degree map")
        a = solution[:k]
        if self.degree(a) != self.normalize(c):
            raise InvariantError(f"lift of {tuple(c)} does not reproduce the class")
        return a

    def principal(self, m: Sequence[int]) -> Vector:
        """(⟨m, β(e_ρ)⟩)_ρ"""
        return tuple(int(dot(m, b)) for b in self.beta)

    def check_exact(self) -> None:
        for j in range(self.lattice_rank):
            column = [b[j] for b in self.beta]
            if any(self.degree(column)):
                raise InvariantError("degree map does not vanish on the pairing")

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_pairing(
        cls, beta: Sequence[Sequence[int]], degrees: Sequence[Sequence[int]] | None = None
    ) -> "ClassGroup":
        """Cl = coker(M → ℤ^{rays}), m ↦ (⟨m, β(e_ρ)⟩)"""
        beta_t = tuple(tuple(int(x) for x in row) for row in beta)
        k = len(beta_t)
        if degrees is not None:
            return cls._with_grading(beta_t, degrees)

        snf = smith_normal_form(beta_t)
        r = k - snf.rank
        free_rows = [list(snf.left[i]) for i in range(snf.rank, k)]
        tors_rows, tors = [], []
        for i in range(snf.rank):
            d = snf.D[i][i]
            if d > 1:
                tors.append(d)
                tors_rows.append([x % d for x in snf.left[i]])

        for subset in combinations(reversed(range(k)), r):
            chosen = sorted(subset)
            block = [[row[j] for j in chosen] for row in free_rows]
            if r and abs(determinant(block)) == 1:
                change = [[int(x) for x in row] for row in inverse(block)]
                free_rows = [[int(x) for x in row] for row in matmul(change, free_rows)]
                break

        group = cls(
            r,
            tuple(tors),
            tuple(tuple(row) for row in free_rows),
            tuple(tuple(row) for row in tors_rows),
            beta_t,
        )
        group.check_exact()
        logger.debug(f"Class group of rank {r} with torsion {tuple(tors)}")
        return group

    @classmethod
    def _with_grading(cls, beta: tuple[Vector, ...], degrees: Sequence[Sequence[int]]) -> "ClassGroup":
        k = len(beta)
        if len(degrees) != k:
            raise SchemaError("one degree per ray is required")
        r = len(degrees[0]) if degrees else 0
        free_rows = tuple(tuple(int(degrees[rho][i]) for rho in range(k)) for i in range(r))
        group = cls(r, (), free_rows, (), beta)
        try:
            group.check_exact()
        except InvariantError as e:
            raise SchemaError("degrees do not vanish on the pairing of the rays") from e
        if r and smith_normal_form(free_rows).invariants != (1,) * r:
            raise SchemaError("degrees are not surjective onto the class group")
        for v in integer_kernel(free_rows, k) if r else []:
            if lattice_solve(beta, list(v), len(beta[0])) is None:
                raise SchemaError("degrees do not present the class group of the pairing")
        if r + rank(beta) != k:
            raise SchemaError("degrees do not present the class group of the pairing")
        return group

    @classmethod
    def from_degrees(
        cls, degrees: Sequence[Sequence[int]], torsion: Sequence[int] = ()
    ) -> "ClassGroup":
        """Cox-data mode: recover the pairing as a basis of the degree kernel"""
        k = len(degrees)
        t = len(torsion)
        width = len(degrees[0]) if degrees else 0
        r = width - t
        if r < 0:
            raise SchemaError("degree vectors are shorter than the torsion part")
        free_rows = [[int(degrees[rho][i]) for rho in range(k)] for i in range(r)]
        tors_rows = [[int(degrees[rho][r + i]) % torsion[i] for rho in range(k)] for i in range(t)]

        augmented = [row + [0] * t for row in free_rows]
        for i, row in enumerate(tors_rows):
            augmented.append(row + [-torsion[j] if j == i else 0 for j in range(t)])
        generators = [v[:k] for v in integer_kernel(augmented, k + t)] if augmented else [
            tuple(int(i == j) for j in range(k)) for i in range(k)
        ]
        basis = _lattice_basis(generators, k)
        beta = tuple(tuple(v[rho] for v in basis) for rho in range(k))

        index = 1
        if free_rows:
            free_snf = smith_normal_form(free_rows)
            if free_snf.rank < r:
                raise SchemaError("degrees do not span the class group")
            for d in free_snf.invariants:
                index *= d
        if index != 1:
            logger.warning(f"degree map has image of index {index} in its saturation")

        group = cls(
            r,
            tuple(int(x) for x in torsion),
            tuple(tuple(row) for row in free_rows),
            tuple(tuple(row) for row in tors_rows),
            beta,
            index,
        )
        group.check_exact()
        return group


def _lattice_basis(generators: Sequence[Sequence[int]], k: int) -> list[Vector]:
    """Basis of the lattice spanned by the generators"""
    if not generators:
        return []
    columns = transpose(generators)
    snf = smith_normal_form(columns)
    u = [list(row) for row in snf.U]
    basis = []
    for i in range(snf.rank):
        d = snf.D[i][i]
        basis.append(tuple(int(u[row][i]) * d for row in range(k)))
    return basis


def rays_from_pairing(beta: Sequence[Vector]) -> tuple[tuple[Vector, ...], tuple[int, ...]]:
    """Split β(e_ρ) = b_ρ·u_ρ into primitive rays and multipliers"""
    rays, multipliers = [], []
    for b in beta:
        g = 0
        for x in b:
            g = gcd(g, x)
        if g == 0:
            raise PreconditionError("a variable has degree zero pairing; it is not a ray")
        rays.append(tuple(x // g for x in b))
        multipliers.append(g)
    return tuple(rays), tuple(multipliers)


def class_group(source: StackyFan | Fan | Sequence[Sequence[int]], torsion: Sequence[int] = ()) -> ClassGroup:
    """Class group of a (stacky) fan, or of raw Cox degrees"""
    if isinstance(source, Fan):
        source = StackyFan.of(source)
    if isinstance(source, StackyFan):
        return ClassGroup.from_pairing(source.beta)
    return ClassGroup.from_degrees(source, torsion)


@dataclass(frozen=True)
class TorusDivisor:
    coefficients: tuple[int, ...]

    @classmethod
    def of(cls, coefficients: Sequence[int]) -> "TorusDivisor":
        return cls(tuple(int(x) for x in coefficients))

    def __add__(self, other: "TorusDivisor") -> "TorusDivisor":
        return TorusDivisor(tuple(x + y for x, y in zip(self.coefficients, other.coefficients)))

    def __sub__(self, other: "TorusDivisor") -> "TorusDivisor":
        return TorusDivisor(tuple(x - y for x, y in zip(self.coefficients, other.coefficients)))

    def __neg__(self) -> "TorusDivisor":
        return TorusDivisor(tuple(-x for x in self.coefficients))

    def __len__(self) -> int:
        return len(self.coefficients)


@dataclass(frozen=True)
class SupportFunction:
    """F(v) = ⟨m_σ, v⟩ on each maximal cone σ"""

    forms: tuple[tuple[Cone, QVector], ...]

    def form(self, cone: Cone) -> QVector:
        return dict(self.forms)[cone]

    def __call__(self, v: Sequence[int | Fraction], fan: Fan) -> Fraction:
        for cone, m in self.forms:
            coords = fan.cone_coordinates(cone, v)
            if coords is not None and all(c >= 0 for c in coords.values()):
                return Fraction(dot(m, v))
        raise PreconditionError(f"{tuple(v)} is outside the support")


def _as_stacky(sf: StackyFan | Fan) -> StackyFan:
    return StackyFan.of(sf) if isinstance(sf, Fan) else sf


def support_function(sf: StackyFan | Fan, D: TorusDivisor) -> SupportFunction:
    """Solve ⟨m_σ, β(e_τ)⟩ = −a_τ on every maximal cone"""
    sf = _as_stacky(sf)
    fan = sf.fan
    forms = []
    for cone in fan.cones:
        indices = sorted(cone)
        rows = [sf.beta[i] for i in indices]
        m = solve(rows, [-D.coefficients[i] for i in indices]) if rows else tuple(
            Fraction(0) for _ in range(fan.rank)
        )
        if m is None or any(dot(r, m) != -D.coefficients[i] for r, i in zip(rows, indices)):
            raise PreconditionError(f"divisor is not ℚ-Cartier on cone {indices}")
        forms.append((cone, tuple(m)))
    return SupportFunction(tuple(forms))


def is_nef(sf: StackyFan | Fan, D: TorusDivisor) -> bool:
    """Concavity: ⟨m_σ, β(e_ρ)⟩ ≥ −a_ρ for every maximal σ and every ray of the fan"""
    sf = _as_stacky(sf)
    F = support_function(sf, D)
    for _, m in F.forms:
        for rho in sf.fan.used_rays:
            if dot(m, sf.beta[rho]) < -D.coefficients[rho]:
                return False
    return True


def section_polyhedron(
    sf: StackyFan | Fan, D: TorusDivisor, all_rays: bool = False
) -> RationalPolyhedron:
    """{m : ⟨m, β(e_ρ)⟩ ≥ −a_ρ} over the rays used by the fan, or over every ray

    β(e_ρ) = b_ρ·u_ρ. On the stack, D_ρ is the divisor of the Cox variable x_ρ and
    div(χ^m) = Σ ⟨m, β(e_ρ)⟩ D_ρ, so the multipliers enter here. With trivial
    multipliers this is the usual {⟨m, u_ρ⟩ ≥ −a_ρ} of the coarse variety.
    """
    sf = _as_stacky(sf)
    indices = range(len(sf.beta)) if all_rays else sf.fan.used_rays
    return RationalPolyhedron(
        sf.fan.rank,
        tuple(Inequality.of(sf.beta[rho], -D.coefficients[rho]) for rho in indices),
    )


def cox_polyhedron(cg: ClassGroup, a: Sequence[int]) -> RationalPolyhedron:
    """Section polyhedron over every variable of the Cox ring"""
    return RationalPolyhedron(
        cg.lattice_rank,
        tuple(Inequality.of(b, -x) for b, x in zip(cg.beta, a)),
    )


def effective(cg: ClassGroup, c: Sequence[int]) -> tuple[bool, Vector | None]:
    """Whether some monomial has degree c, with its exponent vector"""
    a = cg.lift(c)
    point = cox_polyhedron(cg, a).find_lattice_point()
    if point is None:
        return False, None
    exponent = tuple(x + p for x, p in zip(a, cg.principal(point)))
    if any(e < 0 for e in exponent) or cg.degree(exponent) != cg.normalize(c):
        raise InvariantError(f"monomial witness for {tuple(c)} is inconsistent")
    return True, exponent


def monomials(cg: ClassGroup, c: Sequence[int]) -> list[Vector] | None:
    """Exponent vectors of all monomials of degree c, None when infinitely many"""
    a = cg.lift(c)
    polyhedron = cox_polyhedron(cg, a)
    if not polyhedron.is_bounded():
        return None if polyhedron.find_lattice_point() is not None else []
    return sorted(
        (tuple(x + p for x, p in zip(a, cg.principal(m))) for m in polyhedron.lattice_points()),
        reverse=True,
    )


def is_semiprojective(sf: StackyFan | Fan) -> bool:
    """Convex full-dimensional support and a strictly concave support function"""
    sf = _as_stacky(sf)
    fan = sf.fan
    if not fan.is_pure or not fan.is_simplicial:
        return False

    walls: dict[Cone, list[Cone]] = {}
    for cone in fan.cones:
        for rho in cone:
            walls.setdefault(cone - {rho}, []).append(cone)
    for wall, owners in walls.items():
        if len(owners) != 1:
            continue
        (owner,) = owners
        inside = next(iter(owner - wall))
        normal = _wall_normal(fan, wall, inside)
        if any(dot(normal, fan.rays[rho]) < 0 for rho in fan.used_rays):
            return False

    used = fan.used_rays
    position = {rho: i for i, rho in enumerate(used)}
    inequalities = []
    for cone in fan.cones:
        indices = sorted(cone)
        basis_inv = inverse([list(sf.beta[i]) for i in indices])
        for rho in used:
            if rho in cone:
                continue
            # ⟨m_σ, β_ρ⟩ + a_ρ > 0 with m_σ = −B⁻¹ a_σ
            coeff = [Fraction(0)] * len(used)
            weights = [
                sum((basis_inv[k][j] * sf.beta[rho][k] for k in range(fan.rank)), Fraction(0))
                for j in range(len(indices))
            ]
            for j, i in enumerate(indices):
                coeff[position[i]] -= weights[j]
            coeff[position[rho]] += 1
            inequalities.append(Inequality(tuple(coeff), Fraction(0), strict=True))
    if not inequalities:
        return True
    ok, _ = RationalPolyhedron(len(used), tuple(inequalities)).feasible()
    if not ok:
        logger.warning("No strictly concave support function exists; fan is not semiprojective")
    return ok


def _wall_normal(fan: Fan, wall: Cone, inside: int) -> QVector:
    rows = [fan.rays[i] for i in sorted(wall)]
    (normal,) = nullspace(rows, fan.rank)
    if dot(normal, fan.rays[inside]) < 0:
        normal = tuple(-x for x in normal)
    return normal


def is_projective(sf: StackyFan | Fan) -> bool:
    sf = _as_stacky(sf)
    return sf.fan.is_complete and is_semiprojective(sf)


def serre_dual(D: TorusDivisor) -> TorusDivisor:
    """K − D with K = −Σ D_ρ"""
    return TorusDivisor(tuple(-1 - a for a in D.coefficients))
