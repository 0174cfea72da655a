"""Command-line interface for coxcat"""

import functools
import logging
import sys
from collections.abc import Callable
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any

import click

import coxcat.formatters  # noqa: F401  registers the built-in formatters
from coxcat import examples
from coxcat.__version__ import __version__
from coxcat.category.algebra import (
    build_theta_cox,
    check_full_strong_exceptional,
    endomorphism_algebra,
    has_complete_chambers,
)
from coxcat.category.transform import (
    transform_line_bundle,
    uniform_vanishing_sweep,
    verify_theta_transform,
)
from coxcat.core.config import (
    ComplexDocument,
    InputDocument,
    RunSettings,
    canonical_digest,
    load_complex,
    load_input,
    load_settings,
)
from coxcat.core.errors import CoxcatError, PreconditionError, SchemaError
from coxcat.core.registry import registry
from coxcat.core.report import Report
from coxcat.core.variety import Variety, variety_from_document
from coxcat.monads.complex import (
    ThetaComplex,
    complex_from_document,
    degree_zero_strand,
    restrict_to_face,
    restriction_table,
    validate_complex,
    vanishing_report,
)
from coxcat.monads.polynomial import to_strings
from coxcat.plotting import fan_figure, secondary_fan_figure, theta_figure, zonotope_figure
from coxcat.theta.collection import (
    ThetaElement,
    Variant,
    denominator_bound,
    enumerate_theta,
    frobenius_oracle,
    order_theta,
)
from coxcat.theta.sharpen import sharpened_reduction
from coxcat.toric.divisor import ClassGroup
from coxcat.toric.gkz import SecondaryFan, chamber_of, secondary_fan

logger = logging.getLogger(__name__)


@dataclass
class Session:
    """Everything a command needs once the input has been read"""

    document: InputDocument
    variety: Variety
    settings: RunSettings
    output: str | None
    fmt: str

    @property
    def class_group(self) -> ClassGroup:
        return self.variety.class_group

    def digest(self, *extra: ComplexDocument) -> str:
        return canonical_digest(self.document, *extra) if extra else self.document.digest()


def input_options(f: Callable[..., Any]) -> Callable[..., Any]:
    """--input/--example plus the shared run flags"""
    options = [
        click.option("--input", "input_path", type=click.Path(), help="Variety YAML file"),
        click.option("--example", default=None, help="Built-in example name instead of --input"),
        click.option("--output", default=None, type=click.Path(), help="Write the report here"),
        click.option("--format", "fmt", default="yaml", help="Report format"),
        click.option("--order", default=None, type=int, help="Tie-break seed for the Θ order"),
        click.option("--char", default=None, type=int, help="Field characteristic"),
        click.option("--nef-battery", default=None, type=int, help="Nef twists per transform"),
    ]
    for option in reversed(options):
        f = option(f)
    return f


def handle_errors(f: Callable[..., Any]) -> Callable[..., Any]:
    """Turn CoxcatError into '✗ message' and the class exit code"""

    @functools.wraps(f)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return f(*args, **kwargs)
        except CoxcatError as e:
            click.echo(f"✗ {e}", err=True)
            sys.exit(e.exit_code)

    return wrapper


def _session(
    ctx: click.Context,
    input_path: str | None,
    example: str | None,
    output: str | None,
    fmt: str,
    order: int | None,
    char: int | None,
    nef_battery: int | None,
    fallback: InputDocument | None = None,
) -> Session:
    if input_path and example:
        raise SchemaError("give either --input or --example, not both")
    if input_path:
        document = load_input(input_path)
    elif example:
        document = examples.variety(example)
    elif fallback is not None:
        document = fallback
    else:
        raise SchemaError("an input is required: --input PATH or --example NAME")
    registry.get_formatter(fmt)
    settings = ctx.obj["settings"].merged(
        order_seed=order, characteristic=char, nef_battery=nef_battery
    )
    return Session(document, variety_from_document(document), settings, output, fmt)


def _emit(session: Session, report: Report) -> None:
    text = registry.get_formatter(session.fmt).format(report.to_dict())
    if session.output:
        Path(session.output).write_text(text)
        logger.info(f"Report written to {session.output}")
    else:
        click.echo(text, nl=not text.endswith("\n"))


def _parse_class(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace("(", "").replace(")", "").split(","))
    except ValueError as e:
        raise SchemaError(f"--class expects comma-separated integers, got {text!r}") from e


def _ordered_theta(session: Session, gkz: SecondaryFan) -> list[ThetaElement]:
    cg = session.class_group
    assigned = build_theta_cox(gkz, enumerate_theta(cg)).elements
    return order_theta(
        cg, assigned, session.settings.order_seed, by_effectivity=has_complete_chambers(gkz)
    )


def _order_kind(gkz: SecondaryFan) -> str:
    return "effectivity" if has_complete_chambers(gkz) else "none imposed"


def _element_data(e: ThetaElement) -> dict[str, Any]:
    return {
        "class": e.class_vector,
        "d": e.d,
        "witness": e.theta,
        "chamber": e.chamber,
        "order": e.order,
    }


@click.group()
@click.version_option(version=__version__)
@click.option("--settings", "settings_path", default=None, type=click.Path(), help="coxcat.yaml")
@click.option("--log-level", default=None, help="Override the configured log level")
@click.pass_context
def cli(ctx: click.Context, settings_path: str | None, log_level: str | None):
    """coxcat - the Cox category of a toric variety, computed exactly"""
    try:
        settings = load_settings(settings_path)
    except CoxcatError as e:
        click.echo(f"✗ {e}", err=True)
        sys.exit(e.exit_code)
    level = (log_level or settings.logging.level).upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.INFO), format=settings.logging.format
    )
    if settings.plugins:
        registry.discover_plugins(settings.plugins_dir)
    ctx.ensure_object(dict)
    ctx.obj["settings"] = settings


@cli.command()
@input_options
@click.option("--star", is_flag=True, help="Use Θ* = {ω + d} instead of Θ")
@click.option("--frobenius", default=None, type=int, help="Level ℓ oracle cross-check")
@click.pass_context
@handle_errors
def theta(ctx, star, frobenius, **options):
    """Enumerate Θ with witnesses, chambers and order"""
    session = _session(ctx, **options)
    cg = session.class_group
    gkz = secondary_fan(cg)
    ordered = _ordered_theta(session, gkz)
    if star:
        ordered = [
            replace(e, class_vector=cg.add(cg.canonical, e.d), variant=Variant.STAR)
            for e in ordered
        ]
    result: dict[str, Any] = {
        "variant": Variant.STAR if star else Variant.STANDARD,
        "count": len(ordered),
        "elements": [_element_data(e) for e in ordered],
        "order": _order_kind(gkz),
        "order_seed": session.settings.order_seed,
        "denominator_bound": denominator_bound(ordered),
    }
    level = frobenius or session.settings.frobenius
    if level:
        oracle = frobenius_oracle(cg, level)
        agreement = oracle == {cg.neg(e.d) for e in ordered}
        result["frobenius"] = {"level": level, "oracle agreement": agreement}
        if not agreement:
            logger.warning(f"Frobenius oracle at level {level} disagrees with the enumeration")
    _emit(session, Report(command="theta", input_digest=session.digest(), result=result))
    click.echo(f"✓ Θ has {len(ordered)} elements", err=True)


@cli.command()
@input_options
@click.pass_context
@handle_errors
def gkz(ctx, **options):
    """Chambers, faces and walls of the secondary fan"""
    session = _session(ctx, **options)
    fan = secondary_fan(session.class_group)
    result = {
        "chambers": len(fan.chambers),
        "faces": len(fan.faces),
        "chamber_data": [
            {
                "id": c.id,
                "sample": c.sample,
                "rays": c.rays,
                "cones": [sorted(cone) for cone in c.fan.cones],
                "irrelevant": [sorted(s) for s in c.irrelevant],
            }
            for c in fan.chambers
        ],
        "face_data": [
            {
                "id": f.id,
                "sample": f.sample,
                "dimension": f.dimension,
                "chamber": f.chamber_id,
                "adjacent": f.adjacent,
                "lineality": f.generalized.lineality_dim,
                "contracted": sorted(f.generalized.contracted),
            }
            for f in fan.faces
        ],
        "walls": [
            {"chambers": [a, b], "face": data["face"]}
            for a, b, data in sorted(fan.walls.edges(data=True))
        ],
    }
    _emit(session, Report(command="gkz", input_digest=session.digest(), result=result))
    click.echo(f"✓ chambers: {len(fan.chambers)}", err=True)


@cli.command()
@input_options
@click.pass_context
@handle_errors
def homs(ctx, **options):
    """Hom dimensions between the Θ_Cox objects in order"""
    session = _session(ctx, **options)
    fan = secondary_fan(session.class_group)
    alg = endomorphism_algebra(session.class_group, _ordered_theta(session, fan))
    result = {
        "objects": [e.class_vector for e in alg.elements],
        "dims": [["infinite" if d is None else d for d in row] for row in alg.dims],
        "order": _order_kind(fan),
        "order_seed": session.settings.order_seed,
    }
    _emit(session, Report(command="homs", input_digest=session.digest(), result=result))
    click.echo(f"✓ Hom table on {len(alg)} objects", err=True)


@cli.command("check-exceptional")
@input_options
@click.pass_context
@handle_errors
def check_exceptional(ctx, **options):
    """Full strong exceptionality (or tilting) of Θ_Cox"""
    session = _session(ctx, **options)
    fan = secondary_fan(session.class_group)
    alg = endomorphism_algebra(session.class_group, _ordered_theta(session, fan))
    verdict = check_full_strong_exceptional(alg, fan, session.settings.characteristic)
    result = {
        "verdict": "pass" if verdict.passed else "fail",
        "mode": verdict.mode,
        "pairs": verdict.pairs_checked,
        "order": _order_kind(fan),
        "order_seed": session.settings.order_seed,
    }
    report = Report(
        command="check-exceptional",
        input_digest=session.digest(),
        result=result,
        certificates=[{"violation": v} for v in verdict.violations],
    )
    _emit(session, report)
    mark = "✓" if verdict.passed else "✗"
    click.echo(f"{mark} verdict: {result['verdict']} ({verdict.pairs_checked} pairs)", err=True)


@cli.command()
@input_options
@click.option("--source", default=None, type=int, help="Source chamber i")
@click.option("--target", default=None, type=int, help="Target chamber j")
@click.option("--class", "class_text", default=None, help="Diagnose O(c) for this class")
@click.option("--uniform", is_flag=True, help="Run the uniform higher vanishing sweep")
@click.pass_context
@handle_errors
def transform(ctx, source, target, class_text, uniform, **options):
    """Θ-transform checks between chambers"""
    session = _session(ctx, **options)
    settings = session.settings
    fan = secondary_fan(session.class_group)
    ids = [c.id for c in fan.chambers]
    for chosen in (source, target):
        if chosen is not None and chosen not in ids:
            raise PreconditionError(f"there is no chamber {chosen}")

    if class_text is not None:
        i = source if source is not None else ids[0]
        j = target if target is not None else ids[-1]
        report = transform_line_bundle(
            fan, i, j, _parse_class(class_text), settings.nef_battery, settings.characteristic
        )
        h1 = any(len(b.dims) > 1 and b.dims[1] != 0 for b in report.battery)
        result = {
            "mode": "diagnostic",
            "source": i,
            "target": j,
            "class": report.class_vector,
            "R0 deficit": any(c.deficit for c in report.charts),
            "H1": "nonzero" if h1 else "zero",
            "notes": report.notes,
        }
        _emit(
            session,
            Report(
                command="transform",
                input_digest=session.digest(),
                result=result,
                certificates=[{"report": report}],
            ),
        )
        click.echo(f"✓ H1: {result['H1']}", err=True)
        return

    ordered = _ordered_theta(session, fan)
    if uniform or settings.uniform_vanishing:
        rows = uniform_vanishing_sweep(fan, ordered, settings.nef_battery, settings.characteristic)
        nonzero = [r for r in rows if r.higher_vanishes is False]
        result = {"mode": "uniform", "runs": len(rows), "nonzero": len(nonzero)}
        _emit(
            session,
            Report(
                command="transform",
                input_digest=session.digest(),
                result=result,
                certificates=[{"row": r} for r in rows],
            ),
        )
        click.echo(f"✓ uniform sweep: {len(rows)} runs, {len(nonzero)} nonzero", err=True)
        return

    reports = []
    for element in ordered:
        for i in ids if source is None else [source]:
            if i not in chamber_of(fan, element.d).adjacent:
                continue
            for j in ids if target is None else [target]:
                reports.append(
                    verify_theta_transform(
                        fan, i, j, element, settings.nef_battery, settings.characteristic
                    )
                )
    failed = [r for r in reports if not r.passed]
    result = {
        "mode": "verify",
        "checks": len(reports),
        "order": _order_kind(fan),
        "failed": [(r.class_vector, r.source, r.target) for r in failed],
        "verdict": "pass" if not failed else "fail",
    }
    _emit(
        session,
        Report(
            command="transform",
            input_digest=session.digest(),
            result=result,
            certificates=[{"report": r} for r in reports],
        ),
    )
    mark = "✓" if not failed else "✗"
    click.echo(f"{mark} transform: {len(reports)} checks, {len(failed)} failed", err=True)


@cli.command()
@input_options
@click.option("--chamber", default=0, type=int, help="Chamber whose walls are crossed")
@click.option("--wall", default=None, type=int, help="Face id of a single wall")
@click.pass_context
@handle_errors
def sharpen(ctx, chamber, wall, **options):
    """Remove Θ_Γ° for one wall, or for every interior wall of a chamber"""
    session = _session(ctx, **options)
    fan = secondary_fan(session.class_group)
    elements = enumerate_theta(session.class_group)
    if chamber not in range(len(fan.chambers)):
        raise PreconditionError(f"there is no chamber {chamber}")
    if wall is not None and wall not in range(len(fan.faces)):
        raise PreconditionError(f"there is no face {wall}")
    walls = [fan.face(wall)] if wall is not None else fan.interior_walls(chamber)
    reports = [sharpened_reduction(fan, chamber, w, elements) for w in walls]
    result = {
        "chamber": chamber,
        "walls": [
            {
                "wall": r.wall,
                "interior": r.interior,
                "collection": r.collection,
                "wall_degrees": r.wall_degrees,
                "reduced": r.reduced,
                "kept": r.kept,
                "collection_matches": r.collection_matches,
                "notes": r.notes,
            }
            for r in reports
        ],
    }
    certificates = [{"wall": r.wall, "koszul": r.koszul} for r in reports]
    _emit(
        session,
        Report(
            command="sharpen",
            input_digest=session.digest(),
            result=result,
            certificates=certificates,
        ),
    )
    removed = sum(len(r.reduced) for r in reports)
    click.echo(f"✓ sharpen: {len(reports)} walls, {removed} elements removed", err=True)


@cli.command()
@input_options
@click.option(
    "--target",
    "figure",
    type=click.Choice(["secondary-fan", "zonotope", "theta", "fan"]),
    default="secondary-fan",
    help="What to draw",
)
@click.pass_context
@handle_errors
def plot(ctx, figure, **options):
    """Write an SVG picture"""
    session = _session(ctx, **options)
    cg = session.class_group
    title = f"{session.document.name} {figure}".strip()
    if figure == "fan":
        if session.variety.stacky is None:
            raise PreconditionError("the fan picture needs an input with rays and cones")
        svg = fan_figure(session.variety.stacky.fan, title).render()
    elif figure == "zonotope":
        svg = zonotope_figure(cg, title).render()
    else:
        if cg.free_rank != 2:
            raise PreconditionError("plot supports rank 2 only")
        gkz = secondary_fan(cg)
        if figure == "theta":
            svg = theta_figure(cg, _ordered_theta(session, gkz), title).render()
        else:
            svg = secondary_fan_figure(gkz, title).render()
    if session.output:
        Path(session.output).write_text(svg)
    else:
        click.echo(svg, nl=False)
    click.echo(f"✓ {figure} figure written", err=True)


# -- monads ------------------------------------------------------------------


def complex_options(f: Callable[..., Any]) -> Callable[..., Any]:
    f = click.option("--complex-example", default=None, help="Built-in complex name")(f)
    f = click.option("--complex", "complex_path", type=click.Path(), help="Complex YAML file")(f)
    return input_options(f)


def _complex_session(
    ctx: click.Context, complex_path: str | None, complex_example: str | None, **options: Any
) -> tuple[Session, ComplexDocument, ThetaComplex]:
    if complex_path and complex_example:
        raise SchemaError("give either --complex or --complex-example, not both")
    fallback = None
    if complex_path:
        document = load_complex(complex_path)
    elif complex_example:
        fallback, document = examples.complex_example(complex_example)
    else:
        raise SchemaError("a complex is required: --complex PATH or --complex-example NAME")
    session = _session(ctx, fallback=fallback, **options)
    C = complex_from_document(session.class_group, document)
    return session, document, C


@cli.group()
def monad():
    """Θ-twisted free complexes: validate, restrict, strand, vanishing"""
    pass


@monad.command("validate")
@complex_options
@click.pass_context
@handle_errors
def monad_validate(ctx, complex_path, complex_example, **options):
    """Entry degrees and d² = 0"""
    session, document, C = _complex_session(ctx, complex_path, complex_example, **options)
    verdict = validate_complex(C)
    result = {
        "name": C.name,
        "valid": verdict.valid,
        "terms": {p: [(t.twist, t.multiplicity) for t in ts] for p, ts in C.terms.items()},
    }
    report = Report(
        command="monad validate",
        input_digest=session.digest(document),
        result=result,
        certificates=[{"violation": v} for v in verdict.violations],
    )
    _emit(session, report)
    mark = "✓" if verdict.valid else "✗"
    click.echo(f"{mark} complex {'valid' if verdict.valid else 'invalid'}", err=True)


@monad.command("restrict")
@complex_options
@click.option("--face", "faces", multiple=True, type=int, help="Face ids (default: all)")
@click.pass_context
@handle_errors
def monad_restrict(ctx, complex_path, complex_example, faces, **options):
    """Restriction of the complex to faces of the secondary fan"""
    session, document, C = _complex_session(ctx, complex_path, complex_example, **options)
    fan = secondary_fan(session.class_group)
    selected = list(faces) if faces else [f.id for f in fan.faces]
    for i in selected:
        if i not in range(len(fan.faces)):
            raise PreconditionError(f"there is no face {i}")
    restricted = [restrict_to_face(C, fan.face(i)) for i in selected]
    result = {
        "table": restriction_table(C, fan, selected),
        "faces": [
            {
                "face": r.face,
                "dimension": fan.face(r.face).dimension,
                "terms": {
                    p: [(t.restricted, t.multiplicity) for t in ts] for p, ts in r.terms.items()
                },
                "dropped": r.dropped,
                "differentials": {p: to_strings(m) for p, m in r.differentials.items()},
                "squares_to_zero": r.squares_to_zero,
            }
            for r in restricted
        ],
    }
    _emit(
        session,
        Report(command="monad restrict", input_digest=session.digest(document), result=result),
    )
    click.echo(f"✓ restricted to {len(restricted)} faces", err=True)


@monad.command("strand")
@complex_options
@click.pass_context
@handle_errors
def monad_strand(ctx, complex_path, complex_example, **options):
    """Degree-zero strand and its cohomology"""
    session, document, C = _complex_session(ctx, complex_path, complex_example, **options)
    strand = degree_zero_strand(C, session.settings.characteristic)
    result = {"dims": strand.dims, "ranks": strand.ranks, "cohomology": strand.cohomology}
    _emit(
        session,
        Report(command="monad strand", input_digest=session.digest(document), result=result),
    )
    nonzero = {p: h for p, h in strand.cohomology.items() if h}
    click.echo(f"✓ strand cohomology {nonzero or 0}", err=True)


@monad.command("vanishing")
@complex_options
@click.pass_context
@handle_errors
def monad_vanishing(ctx, complex_path, complex_example, **options):
    """Higher direct images vanish on every face"""
    session, document, C = _complex_session(ctx, complex_path, complex_example, **options)
    report = vanishing_report(C, secondary_fan(session.class_group))
    result = {
        "verdict": "pass" if report.passed else "fail",
        "faces": report.faces_checked,
        "offending_degrees": report.offending_degrees,
        "failing_faces": report.failing_faces,
        "notes": report.notes,
    }
    _emit(
        session,
        Report(command="monad vanishing", input_digest=session.digest(document), result=result),
    )
    mark = "✓" if report.passed else "✗"
    click.echo(f"{mark} vanishing: {result['verdict']} on {report.faces_checked} faces", err=True)


if __name__ == "__main__":
    cli()
