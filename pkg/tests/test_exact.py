"""Tests for exact linear algebra, and rational polyhedra"""

import random
from fractions import Fraction

import pytest

from coxcat.core.errors import UnboundedError
from coxcat.exact.matrix import (
    integer_kernel,
    lattice_solve,
    matmul,
    nullspace,
    rank,
    smith_normal_form,
    solve,
)
from coxcat.exact.polyhedron import Inequality, LPStatus, RationalPolyhedron


def test_smith_normal_form_torsion():
    """Test the invariant factors of a matrix with torsion"""
    snf = smith_normal_form([[2, 4], [6, 8]])
    assert snf.invariants == (2, 4)
    assert snf.torsion == (2, 4)
    assert snf.rank == 2


def test_smith_normal_form_recomposes():
    """Test U·D·V reproduces random integer matrices"""
    rng = random.Random(7)
    for _ in range(20):
        rows = [[rng.randint(-5, 5) for _ in range(4)] for _ in range(3)]
        snf = smith_normal_form(rows)
        assert matmul(matmul(snf.U, snf.D), snf.V) == rows


def test_integer_kernel():
    """Test the kernel of the ℙ² pairing is spanned by (1, 1, 1)"""
    kernel = integer_kernel([[1, 0, -1], [0, 1, -1]], 3)
    assert len(kernel) == 1
    assert kernel[0] in ((1, 1, 1), (-1, -1, -1))


def test_lattice_solve():
    """Test integral solvability"""
    assert lattice_solve([[2, 0], [0, 3]], [4, 9]) == (2, 3)
    assert lattice_solve([[2, 0], [0, 3]], [1, 3]) is None


def test_solve_and_nullspace():
    """Test rational solving and null spaces"""
    assert solve([[2, 1], [0, 3]], [1, 1]) == (Fraction(1, 3), Fraction(1, 3))
    assert solve([[1, 1], [1, 1]], [0, 1]) is None
    assert len(nullspace([[1, 2, 3]], 3)) == 2


def test_rank_in_positive_characteristic():
    """Test ranks over GF(p)"""
    rows = [[1, 1], [1, 3]]
    assert rank(rows) == 2
    assert rank(rows, 2) == 1


def test_maximize_optimal():
    """Test a bounded objective over a box"""
    result = RationalPolyhedron.box([(0, 2), (0, 3)]).maximize([1, 1])
    assert result.status is LPStatus.OPTIMAL
    assert result.value == 5
    assert result.point == (2, 3)


def test_maximize_unbounded_and_infeasible():
    """Test the two failure statuses"""
    half_plane = RationalPolyhedron(2, (Inequality.of([0, -1], -1),))
    assert half_plane.maximize([1, 0]).status is LPStatus.UNBOUNDED
    empty = RationalPolyhedron(1, (Inequality.of([-1], 0), Inequality.of([1], 1)))
    assert empty.maximize([1]).status is LPStatus.INFEASIBLE


def test_maximize_rational_objective():
    """Test a fractional objective and a fractional optimum"""
    segment = RationalPolyhedron(1, (Inequality.of([2], 1), Inequality.of([-3], -2)))
    assert segment.maximize([Fraction(1, 2)]).value == Fraction(1, 3)
    assert segment.maximize([-1]).value == Fraction(-1, 2)


@pytest.mark.parametrize(
    "polyhedron, implicit, dimension",
    [
        (RationalPolyhedron(2, (Inequality.of([1, 0], 0), Inequality.of([0, 1], 0))), [], 2),
        (RationalPolyhedron.box([(0, 1), (0, 1)]), [], 2),
        (RationalPolyhedron(2, (Inequality.of([1, 0], 0), Inequality.of([-1, 0], -1))), [], 2),
        (RationalPolyhedron(2, (Inequality.of([1, 0], 0), Inequality.of([-1, 0], 0))), [0, 1], 1),
        (RationalPolyhedron.box([(0, 0), (0, 0)]), [0, 1, 2, 3], 0),
    ],
    ids=["quadrant", "box", "slab", "line", "point"],
)
def test_implicit_equalities_and_dimension(polyhedron, implicit, dimension):
    """Test only rows tight on the whole polyhedron count as equations"""
    assert polyhedron.implicit_equalities() == implicit
    assert polyhedron.dimension() == dimension


def test_strict_feasibility_point():
    """Test the witness of a strict system lies inside it"""
    wedge = RationalPolyhedron(
        2, (Inequality.of([1, 0], 0, strict=True), Inequality.of([-1, 1], 0, strict=True))
    )
    ok, point = wedge.feasible()
    assert ok and wedge.contains(point)
    closed_off = RationalPolyhedron(
        1, (Inequality.of([1], 0, strict=True), Inequality.of([-1], 0))
    )
    assert closed_off.feasible() == (False, None)


def test_unbounded_lattice_point():
    """Test an integer point is found in an unbounded region with strict rows"""
    region = RationalPolyhedron(
        2,
        (
            Inequality.of([2, 0], 1, strict=True),
            Inequality.of([-1, 3], 0),
            Inequality.of([1, -3], -1),
        ),
    )
    point = region.find_lattice_point()
    assert point is not None and region.contains(point)
    assert region.count_lattice_points() is None


def test_triangle_lattice_points():
    """Test the lattice points of the standard triangle of size 2"""
    triangle = RationalPolyhedron(
        2,
        (
            Inequality.of([1, 0], 0),
            Inequality.of([0, 1], 0),
            Inequality.of([-1, -1], -2),
        ),
    )
    assert triangle.count_lattice_points() == 6
    assert triangle.vertices() == [(0, 0), (0, 2), (2, 0)]
    assert triangle.is_bounded()


def test_strict_inequalities():
    """Test strict constraints exclude their boundary"""
    segment = RationalPolyhedron(1, (Inequality.of([1], 0), Inequality.of([-1], -3, strict=True)))
    assert segment.lattice_points() == [(0,), (1,), (2,)]


def test_unbounded_polyhedron():
    """Test infinite counts and the enumeration guard"""
    quadrant = RationalPolyhedron(2, (Inequality.of([1, 0], 0), Inequality.of([0, 1], 0)))
    assert quadrant.count_lattice_points() is None
    assert quadrant.recession_rays() == [(0, 1), (1, 0)]
    with pytest.raises(UnboundedError):
        quadrant.lattice_points()
    assert len(quadrant.lattice_points([(0, 2), (0, 2)])) == 9


def test_translate_and_contains():
    """Test translation moves every point"""
    square = RationalPolyhedron.box([(0, 1), (0, 1)])
    moved = square.translate([Fraction(1, 2), 0])
    assert moved.contains([Fraction(3, 2), 1])
    assert not moved.contains([0, 0])


def test_empty_polyhedron():
    """Test an empty region has no points and dimension −1"""
    empty = RationalPolyhedron(1, (Inequality.of([1], 1), Inequality.of([-1], 0)))
    assert empty.is_empty()
    assert empty.count_lattice_points() == 0
    assert empty.dimension() == -1
