"""Θ-graded free complexes over the Cox ring and their restrictions to GKZ faces.

Cohomological degrees increase along differentials. A term S(c) records its
twist c; an entry of a map S(a) → S(b) is a polynomial of degree b − a. The
matrix of d^p has one row per summand of C^{p+1} and one column per summand
of C^p.
"""

import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import ceil

from sympy.polys.rings import PolyElement, PolyRing

from coxcat.core.config import ComplexDocument
from coxcat.core.errors import PreconditionError, SchemaError
from coxcat.exact.matrix import QVector, Vector, dot, lattice_solve, rank
from coxcat.monads.polynomial import (
    Matrix,
    cox_ring,
    is_zero_matrix,
    matmul,
    monomial,
    parse_polynomial,
)
from coxcat.monads.polynomial import terms as polynomial_terms
from coxcat.theta.collection import theta_membership
from coxcat.toric.divisor import ClassGroup, ClassVector, monomials
from coxcat.toric.fan import GeneralizedFan
from coxcat.toric.gkz import Face, SecondaryFan

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Term:
    twist: ClassVector
    multiplicity: int = 1


@dataclass(frozen=True)
class ThetaComplex:
    class_group: ClassGroup
    ring: PolyRing
    terms: dict[int, tuple[Term, ...]]
    differentials: dict[int, Matrix] = field(default_factory=dict)
    name: str = ""

    @classmethod
    def build(
        cls,
        cg: ClassGroup,
        terms: Mapping[int, Sequence[Term]],
        differentials: Mapping[int, Sequence[Sequence[PolyElement]]] | None = None,
        name: str = "",
    ) -> "ThetaComplex":
        R = cox_ring(cg.n_rays)
        normalized = {
            p: tuple(Term(cg.normalize(t.twist), t.multiplicity) for t in ts)
            for p, ts in sorted(terms.items())
            if ts
        }
        maps = {p: tuple(tuple(row) for row in m) for p, m in sorted((differentials or {}).items())}
        return cls(cg, R, normalized, maps, name)

    @property
    def degrees(self) -> list[int]:
        return sorted(self.terms)

    def summands(self, p: int) -> list[ClassVector]:
        """Twists of C^p with multiplicity, in order"""
        return [t.twist for t in self.terms.get(p, ()) for _ in range(t.multiplicity)]

    def differential(self, p: int) -> Matrix:
        """d^p : C^p → C^{p+1}, the zero matrix when absent"""
        if p in self.differentials:
            return self.differentials[p]
        rows, cols = len(self.summands(p + 1)), len(self.summands(p))
        return tuple(tuple(self.ring.zero for _ in range(cols)) for _ in range(rows))


@dataclass(frozen=True)
class ComplexViolation:
    kind: str
    degree: int
    message: str


@dataclass(frozen=True)
class ComplexVerdict:
    valid: bool
    violations: tuple[ComplexViolation, ...] = ()


def _entry_degree_violations(C: ThetaComplex, p: int) -> list[ComplexViolation]:
    cg = C.class_group
    sources, targets = C.summands(p), C.summands(p + 1)
    matrix = C.differentials[p]
    if len(matrix) != len(targets) or any(len(row) != len(sources) for row in matrix):
        return [
            ComplexViolation(
                "shape",
                p,
                f"d^{p} should be {len(targets)}×{len(sources)}",
            )
        ]
    found = []
    for i, b in enumerate(targets):
        for j, a in enumerate(sources):
            expected = cg.sub(b, a)
            for exponent, _ in polynomial_terms(matrix[i][j]):
                if cg.degree(exponent) != expected:
                    found.append(
                        ComplexViolation(
                            "degree",
                            p,
                            f"entry ({i}, {j}) has a monomial of degree {cg.degree(exponent)}, expected {expected}",
                        )
                    )
    return found


def validate_complex(C: ThetaComplex) -> ComplexVerdict:
    """Entry degrees match the twists and consecutive differentials compose to zero"""
    violations: list[ComplexViolation] = []
    for p in sorted(C.differentials):
        violations.extend(_entry_degree_violations(C, p))
    if not any(v.kind == "shape" for v in violations):
        for p in sorted(C.differentials):
            if p + 1 in C.differentials:
                square = matmul(C.ring, C.differentials[p + 1], C.differentials[p])
                if not is_zero_matrix(square):
                    violations.append(
                        ComplexViolation("square", p, f"d^{p + 1} ∘ d^{p} is not zero")
                    )
    verdict = ComplexVerdict(not violations, tuple(violations))
    logger.debug(f"Complex {C.name or '<unnamed>'}: {'valid' if verdict.valid else 'invalid'}")
    return verdict


# -- restriction to faces of the secondary fan -------------------------------


@dataclass(frozen=True)
class RestrictedTerm:
    twist: ClassVector
    restricted: ClassVector
    multiplicity: int = 1


@dataclass(frozen=True)
class RestrictedComplex:
    face: int
    terms: dict[int, tuple[RestrictedTerm, ...]]
    differentials: dict[int, Matrix]
    dropped: tuple[ClassVector, ...] = ()
    squares_to_zero: bool = True


@lru_cache(maxsize=None)
def _face_class_group(images: tuple[Vector, ...]) -> ClassGroup | None:
    if not images:
        return None
    return ClassGroup.from_pairing(images)


def _survivors(generalized: GeneralizedFan) -> list[int]:
    return [
        rho
        for rho, image in enumerate(generalized.ray_images)
        if rho not in generalized.contracted and any(image)
    ]


def _into_annihilator(generalized: GeneralizedFan, theta: Sequence[Fraction]) -> QVector | None:
    """θ − m ∈ L^⊥ for some m ∈ M, or None when θ ∉ L^⊥ + M"""
    if not generalized.lineality:
        return tuple(Fraction(x) for x in theta)
    values = [dot(row, theta) for row in generalized.lineality]
    if any(Fraction(v).denominator != 1 for v in values):
        return None
    m = lattice_solve(generalized.lineality, [int(v) for v in values], len(theta))
    if m is None:
        return None
    return tuple(Fraction(t) - x for t, x in zip(theta, m))


def restricted_class(
    cg: ClassGroup, face: Face, twist: Sequence[int], witness: Sequence[Fraction] | None = None
) -> ClassVector | None:
    """The class of S(twist)|_{X_Γ}, None when the restriction vanishes"""
    if witness is None:
        member, witness = theta_membership(cg, twist)
        if not member or witness is None:
            raise PreconditionError(f"term S{tuple(twist)} is not in Θ")
    generalized = face.generalized
    shifted = _into_annihilator(generalized, witness)
    if shifted is None:
        return None
    survivors = _survivors(generalized)
    group = _face_class_group(tuple(generalized.ray_images[rho] for rho in survivors))
    if group is None:
        return ()
    coefficients = [-ceil(dot(shifted, cg.beta[rho])) for rho in survivors]
    return group.degree(coefficients)


def restrict_to_face(
    C: ThetaComplex,
    face: Face,
    witnesses: Mapping[ClassVector, Sequence[Fraction]] | None = None,
) -> RestrictedComplex:
    """Drop summands with θ ∉ L^⊥ + M and delete their rows and columns"""
    cg = C.class_group
    witnesses = witnesses or {}
    kept: dict[int, list[int]] = {}
    terms_out: dict[int, tuple[RestrictedTerm, ...]] = {}
    dropped: list[ClassVector] = []
    for p in C.degrees:
        index = 0
        survivors: list[RestrictedTerm] = []
        kept[p] = []
        for term in C.terms[p]:
            image = restricted_class(cg, face, term.twist, witnesses.get(term.twist))
            if image is None:
                dropped.append(term.twist)
            else:
                survivors.append(RestrictedTerm(term.twist, image, term.multiplicity))
                kept[p].extend(range(index, index + term.multiplicity))
            index += term.multiplicity
        if survivors:
            terms_out[p] = tuple(survivors)

    maps: dict[int, Matrix] = {}
    for p, matrix in C.differentials.items():
        rows, cols = kept.get(p + 1, []), kept.get(p, [])
        if rows and cols:
            maps[p] = tuple(tuple(matrix[i][j] for j in cols) for i in rows)

    squares = all(
        is_zero_matrix(matmul(C.ring, maps[p + 1], maps[p])) for p in maps if p + 1 in maps
    )
    if not squares:
        logger.warning(f"Restriction to face {face.id} does not square to zero as polynomials")
    return RestrictedComplex(face.id, terms_out, maps, tuple(dropped), squares)


def restriction_table(
    C: ThetaComplex, gkz: SecondaryFan, faces: Iterable[int] | None = None
) -> dict[ClassVector, dict[int, ClassVector | None]]:
    """Restriction of every distinct term to every selected face"""
    cg = C.class_group
    selected = [gkz.face(i) for i in faces] if faces is not None else list(gkz.faces)
    twists = list(dict.fromkeys(t.twist for p in C.degrees for t in C.terms[p]))
    table: dict[ClassVector, dict[int, ClassVector | None]] = {}
    for twist in twists:
        member, witness = theta_membership(cg, twist)
        if not member:
            raise PreconditionError(f"term S{twist} is not in Θ")
        table[twist] = {face.id: restricted_class(cg, face, twist, witness) for face in selected}
    return table


# -- degree-zero strands ------------------------------------------------------


@dataclass(frozen=True)
class Strand:
    dims: dict[int, int]
    ranks: dict[int, int]
    cohomology: dict[int, int]


def _basis(cg: ClassGroup, twist: Sequence[int]) -> list[Vector]:
    basis = monomials(cg, twist)
    if basis is None:
        raise PreconditionError(f"S{tuple(twist)} has an infinite-dimensional degree-zero part")
    return basis


def degree_zero_strand(C: ThetaComplex, characteristic: int = 0) -> Strand:
    """[C]₀ with exact ranks of the differentials on monomial bases"""
    cg = C.class_group
    bases = {p: [_basis(cg, twist) for twist in C.summands(p)] for p in C.degrees}
    dims = {p: sum(len(b) for b in bases[p]) for p in C.degrees}

    ranks: dict[int, int] = {}
    for p, matrix in C.differentials.items():
        source, target = bases.get(p, []), bases.get(p + 1, [])
        offsets, position = [], 0
        for b in target:
            offsets.append(position)
            position += len(b)
        index = [{e: offsets[i] + k for k, e in enumerate(b)} for i, b in enumerate(target)]
        columns = []
        for j, block in enumerate(source):
            for exponent in block:
                column = [Fraction(0)] * position
                for i in range(len(target)):
                    for shift, coefficient in polynomial_terms(matrix[i][j]):
                        product = tuple(x + y for x, y in zip(exponent, shift))
                        column[index[i][product]] += coefficient
                columns.append(column)
        if characteristic and any(x.denominator != 1 for column in columns for x in column):
            raise PreconditionError("positive characteristic needs integer coefficients")
        if characteristic:
            columns = [[int(x) for x in column] for column in columns]
        ranks[p] = rank(columns, characteristic) if columns and position else 0

    cohomology = {p: dims[p] - ranks.get(p, 0) - ranks.get(p - 1, 0) for p in C.degrees}
    logger.debug(f"Strand dims {dims}, cohomology {cohomology}")
    return Strand(dims, ranks, cohomology)


@dataclass(frozen=True)
class FaceVanishing:
    face: int
    passed: bool
    offending_degrees: tuple[int, ...] = ()
    dropped: tuple[ClassVector, ...] = ()


@dataclass(frozen=True)
class VanishingReport:
    passed: bool
    faces_checked: int
    offending_degrees: tuple[int, ...] = ()
    faces: tuple[FaceVanishing, ...] = ()
    notes: tuple[str, ...] = ()

    @property
    def failing_faces(self) -> list[int]:
        return [f.face for f in self.faces if not f.passed]


def vanishing_report(C: ThetaComplex, gkz: SecondaryFan) -> VanishingReport:
    """R^{>0}π_Γ* vanishes on a face when C|_{X_Γ} has no terms in positive degree

    The overall verdict asks this of C itself, which covers every face at once.
    """
    offending = tuple(p for p in C.degrees if p > 0)
    notes = ["acyclicity over S is not verified"]
    faces = []
    for face in gkz.faces:
        restricted = restrict_to_face(C, face)
        positive = tuple(p for p in sorted(restricted.terms) if p > 0)
        faces.append(FaceVanishing(face.id, not positive, positive, restricted.dropped))
        if not restricted.terms:
            notes.append(f"the complex restricts to zero on face {face.id}")
    report = VanishingReport(not offending, len(faces), offending, tuple(faces), tuple(notes))
    if offending and len(report.failing_faces) < len(faces):
        logger.info(
            f"Positive terms of {C.name or '<unnamed>'} survive on faces {report.failing_faces} only"
        )
    return report


def koszul_complex(cg: ClassGroup, collection: Iterable[int], c: Sequence[int]) -> ThetaComplex:
    """K_P twisted by S(c): S(c − Σ_{ρ∈I} deg x_ρ) in degree −|I|"""
    members = sorted(collection)
    R = cox_ring(cg.n_rays)

    def twist(subset: Sequence[int]) -> ClassVector:
        result = cg.normalize(c)
        for rho in subset:
            result = cg.sub(result, cg.degrees[rho])
        return result

    subsets = {k: list(combinations(members, k)) for k in range(len(members) + 1)}
    terms_by_degree: dict[int, list[Term]] = {}
    for k, level in subsets.items():
        terms_by_degree[-k] = [Term(twist(s)) for s in level]

    maps: dict[int, list[list[PolyElement]]] = {}
    for k in range(1, len(members) + 1):
        sources, targets = subsets[k], subsets[k - 1]
        matrix = [[R.zero for _ in sources] for _ in targets]
        for j, s in enumerate(sources):
            for position, rho in enumerate(s):
                face = s[:position] + s[position + 1:]
                exponent = [0] * cg.n_rays
                exponent[rho] = 1
                matrix[targets.index(face)][j] = monomial(R, exponent, (-1) ** position)
        maps[-k] = matrix
    return ThetaComplex.build(cg, terms_by_degree, maps, name=f"koszul{tuple(members)}")


def complex_from_document(cg: ClassGroup, doc: ComplexDocument) -> ThetaComplex:
    """Parse polynomial strings in x0..x{k−1} and assemble the complex"""
    R = cox_ring(cg.n_rays)
    terms_by_degree = {
        int(p): [Term(tuple(t.twist), t.multiplicity) for t in specs] for p, specs in doc.terms.items()
    }
    for p, specs in terms_by_degree.items():
        for term in specs:
            if len(term.twist) != cg.free_rank + len(cg.torsion):
                raise SchemaError(f"term S{term.twist} in degree {p} has the wrong length")
    maps = {
        int(p): [[parse_polynomial(R, entry) for entry in row] for row in matrix]
        for p, matrix in doc.differentials.items()
    }
    return ThetaComplex.build(cg, terms_by_degree, maps, doc.name)
