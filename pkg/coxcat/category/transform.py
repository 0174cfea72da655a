"""Θ-transform checks between chamber stacks.

Both directions go through the common stacky refinement X̃ of the two chamber
fans. Sections of π_i*O(E) over π_j⁻¹(U_σ) are compared with sections of O(E)
over U_σ, and cohomology of π_j*A ⊗ π_i*O(E) is tested against nef A on 𝒳_j.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from math import ceil, floor

from coxcat.core.errors import CoxcatError, PreconditionError
from coxcat.exact.matrix import dot
from coxcat.exact.polyhedron import Inequality, RationalPolyhedron
from coxcat.theta.collection import ThetaElement
from coxcat.toric.cohomology import ceiling_divisor, line_bundle_cohomology, translated_count
from coxcat.toric.divisor import TorusDivisor, section_polyhedron, support_function
from coxcat.toric.fan import StackyFan
from coxcat.toric.gkz import SecondaryFan, chamber_of
from coxcat.toric.refinement import Refinement, common_stacky_refinement

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChartCheck:
    cone: tuple[int, ...]
    recession_equal: bool
    missing: tuple[tuple[int, ...], ...] = ()
    extra: tuple[tuple[int, ...], ...] = ()

    @property
    def passed(self) -> bool:
        return self.recession_equal and not self.missing and not self.extra

    @property
    def deficit(self) -> bool:
        """Pulled-back sections form a strictly smaller semigroup: an ideal-sheaf symptom"""
        return bool(self.missing) and not self.extra


@dataclass(frozen=True)
class BatteryCheck:
    nef_class: tuple[int, ...]
    dims: tuple[int | None, ...]
    predicted: int | None = None

    @property
    def higher_vanishes(self) -> bool:
        return all(d == 0 for d in self.dims[1:])

    @property
    def passed(self) -> bool:
        return self.higher_vanishes and (self.predicted is None or self.dims[0] == self.predicted)


@dataclass(frozen=True)
class StarCheck:
    weights: int
    failures: tuple[tuple[tuple[int, ...], int], ...] = ()

    @property
    def passed(self) -> bool:
        return not self.failures


@dataclass(frozen=True)
class TransformReport:
    source: int
    target: int
    class_vector: tuple[int, ...]
    charts: tuple[ChartCheck, ...] = ()
    star: StarCheck | None = None
    battery: tuple[BatteryCheck, ...] = ()
    notes: tuple[str, ...] = field(default=())

    @property
    def passed(self) -> bool:
        return (
            all(c.passed for c in self.charts)
            and (self.star is None or self.star.passed)
            and all(b.passed for b in self.battery)
        )

    @property
    def higher_cohomology_nonzero(self) -> bool:
        return any(not b.higher_vanishes for b in self.battery)


def _pullback(refinement: Refinement, source: StackyFan, E: TorusDivisor) -> TorusDivisor:
    """π*E on X̃: coefficient −F_E(β̃(e_ρ)) on every refinement ray in the support"""
    F = support_function(source, E)
    fine = refinement.stacky
    coefficients = []
    for rho, b in enumerate(fine.beta):
        if rho in fine.fan.used_rays:
            value = F(b, source.fan)
            if value.denominator != 1:
                raise PreconditionError("pullback of a non-Cartier divisor along a stacky refinement")
            coefficients.append(-int(value))
        else:
            coefficients.append(0)
    return TorusDivisor(tuple(coefficients))


def _box(polyhedra: Sequence[RationalPolyhedron], margin: int = 1) -> list[tuple[int, int]]:
    n = polyhedra[0].dim
    vertices = [v for p in polyhedra for v in p.vertices()] or [tuple(Fraction(0) for _ in range(n))]
    rays = [r for p in polyhedra if not p.is_bounded() for r in p.recession_rays()]
    box = []
    for i in range(n):
        lo = min(v[i] for v in vertices) + sum(min(r[i], 0) for r in rays)
        hi = max(v[i] for v in vertices) + sum(max(r[i], 0) for r in rays)
        box.append((floor(lo) - margin, ceil(hi) + margin))
    return box


def _same_cone(first: RationalPolyhedron, second: RationalPolyhedron) -> bool:
    a, b = first.recession_cone(), second.recession_cone()
    rays_a = a.recession_rays() if not a.lineality() else None
    rays_b = b.recession_rays() if not b.lineality() else None
    if rays_a is None or rays_b is None:
        return rays_a is rays_b
    return all(b.contains(r) for r in rays_a) and all(a.contains(r) for r in rays_b)


def _chart_checks(
    refinement: Refinement, target_index: int, source: StackyFan, target: StackyFan, E: TorusDivisor
) -> list[ChartCheck]:
    F = support_function(source, E)
    fine = refinement.stacky
    relations = refinement.charts[target_index].relations
    n = fine.fan.rank
    checks = []
    for sigma in target.fan.cones:
        over = [
            rho for rho in fine.fan.used_rays if relations[rho].cone and relations[rho].cone <= sigma
        ]
        pulled = RationalPolyhedron(
            n, tuple(Inequality.of(fine.beta[rho], F(fine.beta[rho], source.fan)) for rho in over)
        )
        local = RationalPolyhedron(
            n,
            tuple(Inequality.of(target.beta[rho], -E.coefficients[rho]) for rho in sorted(sigma)),
        )
        same = _same_cone(pulled, local)
        box = _box([pulled, local])
        a = set(pulled.lattice_points(box))
        b = set(local.lattice_points(box))
        checks.append(
            ChartCheck(tuple(sorted(sigma)), same, tuple(sorted(b - a)), tuple(sorted(a - b)))
        )
        logger.debug(f"Chart {sorted(sigma)}: {len(b - a)} missing, {len(a - b)} extra")
    return checks


def nef_battery(gkz: SecondaryFan, chamber_id: int, size: int) -> list[tuple[int, ...]]:
    """Extremal nef classes of a chamber and their pairwise sums"""
    cg = gkz.class_group
    torsion = tuple(0 for _ in cg.torsion)
    rays = [tuple(r) + torsion for r in gkz.chamber(chamber_id).rays]
    classes = list(rays)
    for a, b in combinations_with_replacement(range(len(rays)), 2):
        classes.append(cg.add(rays[a], rays[b]))
    unique = list(dict.fromkeys(classes))
    return unique[:size]


def _battery(
    gkz: SecondaryFan,
    refinement: Refinement,
    source: StackyFan,
    j: int,
    E: TorusDivisor,
    size: int,
    theta: Sequence[Fraction] | None,
    characteristic: int,
) -> list[BatteryCheck]:
    cg = gkz.class_group
    target = gkz.chamber(j).stacky
    pulled_e = _pullback(refinement, source, E)
    results = []
    for nef in nef_battery(gkz, j, size):
        A = TorusDivisor(cg.lift(nef))
        total = _pullback(refinement, target, A) + pulled_e
        table = line_bundle_cohomology(refinement.stacky, total, characteristic)
        predicted = translated_count(target, A, theta) if theta is not None else None
        results.append(BatteryCheck(nef, table.dims, predicted))
    return results


def _source_polytope(source: StackyFan, theta: Sequence[Fraction]) -> RationalPolyhedron:
    """P_d = {k : ⟨k, u_ρ⟩ ≥ ⌊−⟨θ, u_ρ⟩⌋} over the rays of the source fan"""
    return RationalPolyhedron(
        source.fan.rank,
        tuple(
            Inequality.of(source.beta[rho], floor(-dot(theta, source.beta[rho])))
            for rho in source.fan.used_rays
        ),
    )


def _star_check(
    gkz: SecondaryFan, i: int, j: int, theta: Sequence[Fraction], size: int
) -> StarCheck:
    """P_d ∖ (P_A − m) is empty or star-shaped around −θ.

    A point y of P_d cut off by the facet α of P_A − m has ⟨y + m, u_α⟩ < −a_α.
    The difference is star-shaped around −θ when every such facet also cuts
    off −θ, and nonempty differences must contain −θ.
    """
    cg = gkz.class_group
    source, target = gkz.chamber(i).stacky, gkz.chamber(j).stacky
    P_d = _source_polytope(source, theta)
    lowest: dict[int, Fraction | None] = {}
    for alpha in target.fan.used_rays:
        result = P_d.maximize([-x for x in target.beta[alpha]])
        lowest[alpha] = -result.value if result.optimal and result.value is not None else None

    weights = 0
    failures = []
    for nef in nef_battery(gkz, j, size):
        a = cg.lift(nef)
        P_A = section_polyhedron(target, TorusDivisor(a))
        for m in RationalPolyhedron.box(_box([P_A, P_d.translate(theta)], margin=2)).lattice_points():
            weights += 1
            for alpha in target.fan.used_rays:
                u = target.beta[alpha]
                bound = -a[alpha] - dot(m, u)
                if lowest[alpha] is None or lowest[alpha] < bound:
                    if dot(m, u) - dot(theta, u) >= -a[alpha]:
                        failures.append((tuple(m), alpha))
    logger.debug(f"Star-shapedness tested on {weights} weights, {len(failures)} failures")
    return StarCheck(weights, tuple(failures))


def _assigned_to(gkz: SecondaryFan, c: Sequence[int], i: int) -> bool:
    return i in chamber_of(gkz, c).adjacent


def verify_theta_transform(
    gkz: SecondaryFan,
    i: int,
    j: int,
    element: ThetaElement,
    nef_battery_size: int = 6,
    characteristic: int = 0,
) -> TransformReport:
    """π_{j*}π_i* O(−d) = O(−d) for −d ∈ Θ with d in the closure of chamber i"""
    if not _assigned_to(gkz, element.d, i):
        raise PreconditionError(
            f"{element.d} is not in chamber {i}; use transform_line_bundle for diagnostics"
        )
    if i == j:
        return TransformReport(i, j, element.class_vector, notes=("identity transform",))

    cg = gkz.class_group
    source, target = gkz.chamber(i).stacky, gkz.chamber(j).stacky
    refinement = common_stacky_refinement([source.fan, target.fan])
    E = TorusDivisor(tuple(-x for x in ceiling_divisor(cg.beta, element.theta)))
    charts = _chart_checks(refinement, 1, source, target, E)
    star = _star_check(gkz, i, j, element.theta, nef_battery_size)
    battery = _battery(
        gkz, refinement, source, j, E, nef_battery_size, element.theta, characteristic
    )
    report = TransformReport(i, j, element.class_vector, tuple(charts), star, tuple(battery))
    logger.debug(
        f"Θ-transform {element.class_vector} from chamber {i} to {j}: "
        f"{'pass' if report.passed else 'fail'}"
    )
    return report


def transform_line_bundle(
    gkz: SecondaryFan,
    i: int,
    j: int,
    c: Sequence[int],
    nef_battery_size: int = 6,
    characteristic: int = 0,
) -> TransformReport:
    """Chart and cohomology diagnostics for O(c) moved from chamber i to chamber j"""
    cg = gkz.class_group
    c = cg.normalize(c)
    source, target = gkz.chamber(i).stacky, gkz.chamber(j).stacky
    refinement = common_stacky_refinement([source.fan, target.fan])
    E = TorusDivisor(cg.lift(c))
    charts = _chart_checks(refinement, 1, source, target, E)
    battery = _battery(gkz, refinement, source, j, E, nef_battery_size, None, characteristic)
    notes = []
    if any(chart.deficit for chart in charts):
        notes.append("R⁰ has a strictly smaller chart semigroup: an ideal sheaf, not a line bundle")
    if any(not b.higher_vanishes for b in battery):
        notes.append("nonzero higher cohomology")
    return TransformReport(i, j, c, tuple(charts), None, tuple(battery), tuple(notes))


@dataclass(frozen=True)
class VanishingRow:
    class_vector: tuple[int, ...]
    assigned: int | None
    source: int
    target: int
    higher_vanishes: bool | None
    error: str | None = None


def uniform_vanishing_sweep(
    gkz: SecondaryFan,
    theta: Sequence[ThetaElement],
    nef_battery_size: int = 6,
    characteristic: int = 0,
) -> list[VanishingRow]:
    """Higher-cohomology checks for −d ∈ Θ moved out of chambers other than its own"""
    rows = []
    ids = [c.id for c in gkz.chambers]
    for element in theta:
        for i in ids:
            if i == element.chamber:
                continue
            for j in ids:
                try:
                    report = transform_line_bundle(
                        gkz, i, j, element.class_vector, nef_battery_size, characteristic
                    )
                    rows.append(
                        VanishingRow(element.class_vector, element.chamber, i, j, not report.higher_cohomology_nonzero)
                    )
                except CoxcatError as e:
                    rows.append(VanishingRow(element.class_vector, element.chamber, i, j, None, str(e)))
    logger.info(f"Uniform vanishing sweep ran {len(rows)} transforms")
    return rows

