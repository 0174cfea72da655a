"""Tests for the Θ collection, its witnesses, order and zonotopes"""

import logging

import pytest

from coxcat import examples
from coxcat.core.errors import InvariantError, PreconditionError
from coxcat.core.variety import variety_from_document
from coxcat.theta.collection import (
    Interval,
    Variant,
    Zonotope,
    denominator_bound,
    enumerate_theta,
    frobenius_oracle,
    is_triangular,
    order_theta,
    theta_membership,
    witness_class,
)
from coxcat.exact.polyhedron import RationalPolyhedron
from coxcat.theta.sharpen import sharpened_reduction
from coxcat.toric.gkz import secondary_fan

H3_CLASSES = {(0, 0), (-1, 0), (2, -1), (1, -1), (0, -1), (-1, -1)}


def _class_group(name):
    return variety_from_document(examples.variety(name)).class_group


@pytest.mark.parametrize("n", [1, 2, 3])
def test_projective_space(n):
    """Test Θ(ℙⁿ) is O, O(−1), …, O(−n)"""
    elements = enumerate_theta(_class_group(f"P{n}"))
    assert {e.class_vector for e in elements} == {(-k,) for k in range(n + 1)}


def test_hirzebruch_classes(h3, h3_theta):
    """Test the six classes of Θ on ℋ₃ and their witnesses"""
    assert {e.class_vector for e in h3_theta} == H3_CLASSES
    for e in h3_theta:
        assert witness_class(h3, e.theta) == e.d
        assert h3.neg(e.d) == e.class_vector
        assert all(0 <= x < 1 for x in e.theta)


def test_flop_classes(flop):
    """Test Θ on the conifold resolutions is O(−1), O, O(1)"""
    assert {e.class_vector for e in enumerate_theta(flop)} == {(-1,), (0,), (1,)}


@pytest.mark.slow
def test_blowup_has_nine_classes(bl2p3):
    """Test Θ on ℙ³ blown up in two points"""
    assert len(enumerate_theta(bl2p3)) == 9


def test_star_variant(h3):
    """Test Θ* is Θ shifted by the canonical class and negated"""
    star = enumerate_theta(_class_group("P2"), Variant.STAR)
    assert {e.class_vector for e in star} == {(-3,), (-2,), (-1,)}
    assert all(e.variant is Variant.STAR for e in star)
    h3_star = {e.class_vector for e in enumerate_theta(h3, Variant.STAR)}
    assert h3_star == {h3.sub(h3.canonical, c) for c in H3_CLASSES}


def test_membership(h3):
    """Test membership agrees with enumeration"""
    ok, theta = theta_membership(h3, (2, -1))
    assert ok
    assert h3.neg(witness_class(h3, theta)) == (2, -1)
    assert theta_membership(h3, (1, 0)) == (False, None)
    assert theta_membership(h3, (-2, 0)) == (False, None)


def test_frobenius_oracle(h3, h3_theta):
    """Test the Frobenius pushforward at the denominator bound recovers Θ"""
    level = denominator_bound(h3_theta)
    assert frobenius_oracle(h3, level) == H3_CLASSES
    assert frobenius_oracle(h3, 1) == {(0, 0)}


def test_frobenius_level_is_positive(h3):
    """Test level zero is refused"""
    with pytest.raises(PreconditionError, match="positive"):
        frobenius_oracle(h3, 0)


@pytest.mark.parametrize("seed", [None, 0, 7, 123])
def test_order_is_triangular(h3, h3_theta, seed):
    """Test every produced order respects effectivity"""
    ordered = order_theta(h3, h3_theta, seed)
    assert is_triangular(h3, ordered) == []
    assert [e.order for e in ordered] == list(range(6))
    assert ordered[0].class_vector == (0, 0)


def test_reversed_order_is_not_triangular(h3, h3_theta):
    """Test reversing a produced order yields violations"""
    ordered = order_theta(h3, h3_theta)
    assert is_triangular(h3, list(reversed(ordered)))


def test_zonotope_on_projective_plane():
    """Test the three interval conventions on ℙ²"""
    generators = [(1,), (1,), (1,)]
    half_open = Zonotope.of(generators, Interval.HALF_OPEN)
    assert half_open.lattice_points() == [(-2,), (-1,), (0,)]
    assert Zonotope.of(generators, Interval.CLOSED).lattice_points() == [(-3,), (-2,), (-1,), (0,)]
    assert Zonotope.of(generators, Interval.OPEN).lattice_points() == [(-2,), (-1,)]
    assert not half_open.contains((-3,))


def test_theta_lies_in_zonotope(h3, h3_theta):
    """Test Θ is contained in the half-open zonotope of the degrees"""
    zonotope = Zonotope.of(h3.degrees, Interval.HALF_OPEN)
    points = set(zonotope.lattice_points())
    assert {e.class_vector for e in h3_theta} <= points


def test_flop_effectivity_has_cycles(flop):
    """Test effectivity cannot order Θ on the flop and the canonical order is kept instead"""
    elements = enumerate_theta(flop)
    with pytest.raises(InvariantError, match="cycle"):
        order_theta(flop, elements)
    kept = order_theta(flop, list(reversed(elements)), seed=3, by_effectivity=False)
    assert [e.d for e in kept] == [(-1,), (0,), (1,)]
    assert [e.order for e in kept] == [0, 1, 2]


def test_enumeration_logs_below_info(h3, caplog):
    """Test enumerating Θ stays quiet at the default log level"""
    with caplog.at_level(logging.INFO, logger="coxcat"):
        enumerate_theta(h3)
    assert [r for r in caplog.records if r.levelno >= logging.INFO] == []


@pytest.mark.parametrize(
    "name",
    ["P1", "P2", "H1", "H3", "P113", "P1xP1", "flop", pytest.param("Bl2P3", marks=pytest.mark.slow)],
)
def test_enumeration_matches_membership_on_zonotope_box(name):
    """Test the cell enumeration and the membership LP agree on the bounding box of Z"""
    cg = _class_group(name)
    box = Zonotope.of(cg.degrees, Interval.HALF_OPEN).bounding_box()
    members = {
        point for point in RationalPolyhedron.box(box).lattice_points() if theta_membership(cg, point)[0]
    }
    assert members == {e.class_vector for e in enumerate_theta(cg)}


@pytest.mark.parametrize("name", ["H1", "H3", pytest.param("Bl2P3", marks=pytest.mark.slow)])
def test_wall_zonotopes_lie_in_theta(name):
    """Test every lattice point of Z̄₊ + Z₋° lies in Z and passes membership, for every interior wall"""
    cg = _class_group(name)
    gkz = secondary_fan(cg)
    theta = enumerate_theta(cg)
    full = Zonotope.of(cg.degrees, Interval.HALF_OPEN)
    checked = 0
    for a, b, data in gkz.walls.edges(data=True):
        wall = gkz.face(data["face"])
        for chamber in (a, b):
            report = sharpened_reduction(gkz, chamber, wall, theta)
            if not report.interior or not report.collection or not report.collection_matches:
                continue
            intervals = tuple(
                Interval.CLOSED if rho in report.collection else Interval.OPEN
                for rho in range(cg.n_rays)
            )
            mixed = Zonotope(tuple(cg.degrees), intervals)
            for point in mixed.lattice_points():
                assert full.contains(point), (chamber, wall.id, point)
                assert theta_membership(cg, point)[0], (chamber, wall.id, point)
            checked += 1
    assert checked > 0
