"""SVG pictures of rank-two class groups and two-dimensional fans"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from math import floor, hypot

from jinja2 import Environment, PackageLoader, select_autoescape

from coxcat.core.errors import PreconditionError
from coxcat.exact.matrix import Vector
from coxcat.theta.collection import Interval, ThetaElement, Zonotope
from coxcat.toric.divisor import ClassGroup
from coxcat.toric.fan import Fan
from coxcat.toric.gkz import SecondaryFan

logger = logging.getLogger(__name__)

_env = Environment(
    loader=PackageLoader("coxcat.plotting", "templates"),
    autoescape=select_autoescape(["svg", "j2"]),
    keep_trailing_newline=True,
)

PALETTE = ("#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#b07aa1", "#76b7b2", "#edc948")


@dataclass
class Figure:
    """Drawing in world coordinates, mapped onto a square canvas on render"""

    title: str
    size: int = 420
    pad: int = 36
    polygons: list[tuple[list[tuple[float, float]], str]] = field(default_factory=list)
    lines: list[tuple[tuple[float, float], tuple[float, float], bool, str, float]] = field(
        default_factory=list
    )
    points: list[tuple[tuple[float, float], str, float]] = field(default_factory=list)
    labels: list[tuple[tuple[float, float], str, int]] = field(default_factory=list)
    extent: float = 1.0

    def include(self, *coords: Sequence[float]) -> None:
        for x, y in coords:
            self.extent = max(self.extent, abs(float(x)), abs(float(y)))

    def _xy(self, p: Sequence[float]) -> tuple[float, float]:
        scale = (self.size / 2 - self.pad) / self.extent
        return (
            round(self.size / 2 + float(p[0]) * scale, 2),
            round(self.size / 2 - float(p[1]) * scale, 2),
        )

    def render(self) -> str:
        context = {
            "title": self.title,
            "size": self.size,
            "polygons": [
                {"points": [self._xy(p) for p in poly], "fill": fill} for poly, fill in self.polygons
            ],
            "lines": [
                {
                    "x1": self._xy(a)[0],
                    "y1": self._xy(a)[1],
                    "x2": self._xy(b)[0],
                    "y2": self._xy(b)[1],
                    "dashed": dashed,
                    "color": color,
                    "width": width,
                }
                for a, b, dashed, color, width in self.lines
            ],
            "points": [
                {"x": self._xy(p)[0], "y": self._xy(p)[1], "fill": fill, "r": r}
                for p, fill, r in self.points
            ],
            "labels": [
                {"x": self._xy(p)[0], "y": self._xy(p)[1] - 8, "text": text, "size": size}
                for p, text, size in self.labels
            ],
        }
        return _env.get_template("figure.svg.j2").render(**context)


def _require_rank_two(rank: int) -> None:
    if rank != 2:
        raise PreconditionError("plot supports rank 2 only")


def _unit(v: Sequence[int | float]) -> tuple[float, float]:
    length = hypot(float(v[0]), float(v[1]))
    return (float(v[0]) / length, float(v[1]) / length)


def _grid(fig: Figure, low: int, high: int) -> None:
    for t in range(low, high + 1):
        fig.lines.append(((t, low), (t, high), False, "#dddddd", 0.5))
        fig.lines.append(((low, t), (high, t), False, "#dddddd", 0.5))
    fig.lines.append(((low, 0), (high, 0), False, "#888888", 1.0))
    fig.lines.append(((0, low), (0, high), False, "#888888", 1.0))


def _label(v: Sequence[int]) -> str:
    return "(" + ", ".join(str(x) for x in v) + ")"


def secondary_fan_figure(gkz: SecondaryFan, title: str = "") -> Figure:
    cg = gkz.class_group
    _require_rank_two(cg.free_rank)
    degrees = [cg.free_part(d) for d in cg.degrees]
    reach = max(2.0, max(hypot(float(d[0]), float(d[1])) for d in degrees) + 1)
    fig = Figure(title or "secondary fan")
    fig.include((reach, reach), (-reach, -reach))

    for chamber in gkz.chambers:
        color = PALETTE[chamber.id % len(PALETTE)]
        if len(chamber.rays) == 2:
            a, b = (_unit(r) for r in chamber.rays)
            fig.polygons.append(
                ([(0.0, 0.0), (a[0] * reach, a[1] * reach), (b[0] * reach, b[1] * reach)], color)
            )
        centre = _unit(cg.free_part(chamber.sample))
        fig.labels.append(((centre[0] * reach * 0.6, centre[1] * reach * 0.6), f"Γ{chamber.id}", 14))

    for face in gkz.faces:
        if face.dimension == 1:
            u = _unit(cg.free_part(face.sample))
            fig.lines.append(((0, 0), (u[0] * reach, u[1] * reach), False, "black", 1.5))
    for rho, d in enumerate(degrees):
        fig.points.append(((d[0], d[1]), "black", 3))
        fig.labels.append(((d[0], d[1]), f"x{rho}", 11))
    logger.debug(f"Secondary fan figure with {len(gkz.chambers)} chambers")
    return fig


def _hull(points: Sequence[Vector]) -> list[Vector]:
    """Counterclockwise convex hull, collinear points dropped"""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o: Vector, a: Vector, b: Vector) -> int:
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list[Vector] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Vector] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def zonotope_figure(cg: ClassGroup, title: str = "") -> Figure:
    """Half-open zonotope; boundary edges not contained in it are dashed"""
    _require_rank_two(cg.free_rank)
    generators = [cg.free_part(d) for d in cg.degrees]
    sums = [(0, 0)]
    for g in generators:
        sums = sums + [(s[0] - g[0], s[1] - g[1]) for s in sums]
    hull = _hull(sums)

    fig = Figure(title or "zonotope")
    fig.include(*hull)
    low, high = floor(-fig.extent) - 1, -floor(-fig.extent) + 1
    fig.include((low, low), (high, high))
    _grid(fig, low, high)
    fig.polygons.append(([(float(x), float(y)) for x, y in hull], PALETTE[0]))

    for k, a in enumerate(hull):
        b = hull[(k + 1) % len(hull)]
        normal = (b[1] - a[1], a[0] - b[0])
        # the edge belongs to the zonotope iff it needs no coefficient at −1
        closed = all(normal[0] * g[0] + normal[1] * g[1] >= 0 for g in generators)
        fig.lines.append((a, b, not closed, "black", 2.0))

    zonotope = Zonotope.of(generators, Interval.HALF_OPEN)
    for p in zonotope.lattice_points():
        fig.points.append((p, "black", 4))
        fig.labels.append((p, _label(p), 10))
    return fig


def theta_figure(cg: ClassGroup, elements: Sequence[ThetaElement], title: str = "") -> Figure:
    _require_rank_two(cg.free_rank)
    fig = Figure(title or "Θ")
    classes = [cg.free_part(e.class_vector) for e in elements]
    fig.include(*classes)
    low, high = floor(-fig.extent) - 1, -floor(-fig.extent) + 1
    fig.include((low, low), (high, high))
    _grid(fig, low, high)
    for e, p in zip(elements, classes):
        color = PALETTE[e.chamber % len(PALETTE)] if e.chamber is not None else "black"
        fig.points.append((p, color, 5))
        fig.labels.append((p, _label(e.class_vector), 10))
    return fig


def fan_figure(fan: Fan, title: str = "") -> Figure:
    _require_rank_two(fan.rank)
    fig = Figure(title or "fan")
    fig.include(*fan.rays)
    reach = fig.extent + 0.5
    fig.include((reach, reach))
    for k, cone in enumerate(fan.cones):
        if len(cone) == 2:
            a, b = (fan.rays[rho] for rho in sorted(cone))
            fig.polygons.append(
                ([(0.0, 0.0), (float(a[0]), float(a[1])), (float(b[0]), float(b[1]))], PALETTE[k % len(PALETTE)])
            )
    for rho in fan.used_rays:
        u = fan.rays[rho]
        direction = _unit(u)
        fig.lines.append(((0, 0), (direction[0] * reach, direction[1] * reach), False, "black", 1.5))
        fig.points.append((u, "black", 3))
        fig.labels.append((u, f"u{rho}", 11))
    return fig
