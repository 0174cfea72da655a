"""Tests for line bundle cohomology, the Čech cross-check and Hom spaces"""

import random
from fractions import Fraction
from functools import lru_cache

import pytest

from coxcat import examples
from coxcat.core.errors import PreconditionError
from coxcat.core.variety import variety_from_document
from coxcat.toric.cohomology import (
    cech_cohomology,
    class_cohomology,
    hom_theta,
    line_bundle_cohomology,
    reduced_homology,
    translated_count,
    verify_homzero,
)
from coxcat.theta.collection import enumerate_theta
from coxcat.toric.divisor import TorusDivisor, serre_dual
from coxcat.toric.fan import validate_fan
from coxcat.toric.gkz import secondary_fan

EXAMPLES = ["P2", "H1", "H3", "P113", "P1xP1", "flop", pytest.param("Bl2P3", marks=pytest.mark.slow)]


@pytest.fixture
def p1():
    return validate_fan(1, [[1], [-1]], [[0], [1]])


def test_reduced_homology_of_two_points():
    """Test two disjoint vertices have one reduced H₀ class"""
    assert reduced_homology([[0], [1]])[1] == 1


def test_projective_plane_canonical(stacky):
    """Test h(O(−3)) on ℙ² is (0, 0, 1)"""
    table = line_bundle_cohomology(stacky("P2"), TorusDivisor.of([-3, 0, 0]))
    assert table.dims == (0, 0, 1)
    assert not table.higher_vanishes
    assert table.h(2) == 1
    assert table.h(5) == 0


def test_projective_line(p1):
    """Test h(O(−3)) on ℙ¹ is (0, 2) and h(O(2)) is (3, 0)"""
    assert line_bundle_cohomology(p1, TorusDivisor.of([-3, 0])).dims == (0, 2)
    assert line_bundle_cohomology(p1, TorusDivisor.of([1, 1])).dims == (3, 0)


def test_contributing_complexes(stacky):
    """Test H² of ℙ² comes from the full boundary sphere"""
    table = line_bundle_cohomology(stacky("P2"), TorusDivisor.of([-3, 0, 0]))
    (complex_,) = table.contributing(2)
    assert complex_.rays == frozenset({0, 1, 2})
    assert complex_.weights == 1


def test_infinite_cohomology_on_affine_plane():
    """Test h⁰ of the structure sheaf of 𝔸² is infinite"""
    plane = validate_fan(2, [[1, 0], [0, 1]], [[0, 1]])
    table = line_bundle_cohomology(plane, TorusDivisor.of([0, 0]))
    assert table.dims[0] is None
    assert table.higher_vanishes


def test_divisor_length_is_checked(stacky):
    """Test a divisor of the wrong length is refused"""
    with pytest.raises(PreconditionError):
        line_bundle_cohomology(stacky("P2"), TorusDivisor.of([1, 0]))


@pytest.mark.parametrize("name", ["P2", "H1", "H3"])
def test_cech_agrees_with_weight_complexes(stacky, name):
    """Test the Čech computation matches the weight-complex formula on random divisors"""
    sf = stacky(name)
    rng = random.Random(1234)
    for _ in range(6):
        D = TorusDivisor.of([rng.randint(-3, 3) for _ in sf.fan.rays])
        assert cech_cohomology(sf, D) == line_bundle_cohomology(sf, D).dims


def test_class_cohomology(stacky, h3):
    """Test cohomology through a lift of a class on ℋ₃"""
    sf = stacky("H3")
    assert class_cohomology(sf, h3, (0, 0)).dims == (1, 0, 0)
    assert class_cohomology(sf, h3, (0, 1)).dims == (5, 0, 0)
    assert class_cohomology(sf, h3, h3.canonical).dims == (0, 0, 1)


def _element(elements, d):
    return next(e for e in elements if e.d == d)


def test_hom_theta_counts_monomials(h3, h3_theta):
    """Test Hom(O(−d), O(−d′)) is the monomial count of d − d′"""
    source = _element(h3_theta, (1, 1))
    target = _element(h3_theta, (-2, 1))
    space = hom_theta(h3, source.d, source.theta, target.d, target.theta)
    assert space.dimension == 4
    assert len(space.basis) == 4
    back = hom_theta(h3, target.d, target.theta, source.d, source.theta)
    assert back.dimension == 0


def test_hom_theta_rejects_bad_witness(h3, h3_theta):
    """Test a witness of the wrong class is refused"""
    source = _element(h3_theta, (1, 1))
    target = _element(h3_theta, (0, 0))
    with pytest.raises(PreconditionError):
        hom_theta(h3, (5, 5), source.theta, target.d, target.theta)


def test_homzero_on_random_witnesses(stacky):
    """Test O(A − d(θ)) has the predicted sections and no higher cohomology for nef A"""
    sf = stacky("H3")
    rng = random.Random(99)
    for A in (TorusDivisor.of([0, 0, 0, 0]), TorusDivisor.of([1, 0, 0, 1])):
        for _ in range(5):
            theta = [Fraction(rng.randint(-7, 7), rng.randint(1, 5)) for _ in range(2)]
            report = verify_homzero(sf, A, theta)
            assert report.passed
            assert report.h0 == translated_count(sf, A, theta)


def test_homzero_needs_nef(stacky):
    """Test a non-nef A is refused"""
    with pytest.raises(PreconditionError, match="nef"):
        verify_homzero(stacky("H3"), TorusDivisor.of([0, 1, 0, 0]), [Fraction(0), Fraction(0)])


@lru_cache(maxsize=None)
def _example(name):
    cg = variety_from_document(examples.variety(name)).class_group
    return cg, secondary_fan(cg), enumerate_theta(cg)


@pytest.mark.parametrize("name", EXAMPLES)
def test_cech_matches_weight_formula_on_chamber_fans(name):
    """Test Čech and weight-complex cohomology agree on 50 random divisors per chamber fan"""
    _, gkz, _ = _example(name)
    rng = random.Random(f"cech-{name}")
    for chamber in gkz.chambers:
        sf = chamber.stacky
        for _ in range(50):
            D = TorusDivisor.of([rng.randint(-2, 2) for _ in sf.fan.rays])
            expected = line_bundle_cohomology(sf, D).dims
            found = cech_cohomology(sf, D)
            assert all(h is None or found[p] == h for p, h in enumerate(expected)), (
                chamber.id,
                D,
                found,
                expected,
            )


def _random_nef_class(rng, cg, chamber):
    torsion = tuple(0 for _ in cg.torsion)
    total = cg.zero
    for ray in chamber.rays:
        for _ in range(rng.randint(0, 2)):
            total = cg.add(total, tuple(ray) + torsion)
    return total


@pytest.mark.parametrize("name", EXAMPLES)
def test_theta_twists_of_nef_bundles(name):
    """Test h^{>0}(A − d) = 0 and h⁰(A − d) = #(P_A ∩ (M − θ)) on 100 random (nef A, −d ∈ Θ) pairs"""
    cg, gkz, theta = _example(name)
    rng = random.Random(f"homzero-{name}")
    for _ in range(100):
        chamber = rng.choice(gkz.chambers)
        element = rng.choice(theta)
        A = TorusDivisor(cg.lift(_random_nef_class(rng, cg, chamber)))
        report = verify_homzero(chamber.stacky, A, element.theta)
        assert report.passed, (chamber.id, A, element.class_vector, report)
        assert all(h == 0 for h in report.higher)


@pytest.mark.parametrize(
    "name", ["P1", "P2", "P3", "H1", "H3", "P1xP1", pytest.param("Bl2P3", marks=pytest.mark.slow)]
)
def test_serre_duality(stacky, name):
    """Test h^p(D) = h^{n−p}(K − D) on complete smooth fans"""
    sf = stacky(name)
    rng = random.Random(f"serre-{name}")
    for _ in range(20):
        D = TorusDivisor.of([rng.randint(-3, 3) for _ in sf.fan.rays])
        dims = line_bundle_cohomology(sf, D).dims
        dual = line_bundle_cohomology(sf, serre_dual(D)).dims
        assert dims == tuple(reversed(dual)), (D, dims, dual)
