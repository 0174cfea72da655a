"""Tests for the Θ-transform checks across chambers"""

import pytest

from coxcat.category.algebra import build_theta_cox
from coxcat.category.transform import (
    nef_battery,
    transform_line_bundle,
    uniform_vanishing_sweep,
    verify_theta_transform,
)
from coxcat.core.errors import PreconditionError
from coxcat.theta.collection import enumerate_theta
from coxcat.toric.gkz import chamber_of


@pytest.fixture(scope="module")
def flop_setup(flop, flop_gkz):
    plus = chamber_of(flop_gkz, (1,)).chamber_id
    minus = chamber_of(flop_gkz, (-1,)).chamber_id
    elements = {e.d: e for e in build_theta_cox(flop_gkz, enumerate_theta(flop)).elements}
    return flop_gkz, plus, minus, elements


def test_nef_battery(h3_gkz):
    """Test the battery starts with the extremal nef classes of the ℋ₃ chamber"""
    cid = chamber_of(h3_gkz, (1, 1)).chamber_id
    battery = nef_battery(h3_gkz, cid, 6)
    assert set(battery[:2]) == {(1, 0), (0, 1)}
    assert (1, 1) in battery
    assert len(battery) == len(set(battery)) <= 6


@pytest.mark.parametrize("d", [(1,), (0,)])
def test_flop_theta_transform(flop_setup, d):
    """Test elements of Θ move from Y₊ to Y₋ as line bundles"""
    gkz, plus, minus, elements = flop_setup
    report = verify_theta_transform(gkz, plus, minus, elements[d])
    assert report.passed
    assert report.star is not None and report.star.passed
    assert report.charts


def test_identity_transform(flop_setup):
    """Test a chamber to itself is trivially fine"""
    gkz, plus, _, elements = flop_setup
    report = verify_theta_transform(gkz, plus, plus, elements[(1,)])
    assert report.passed
    assert report.notes == ("identity transform",)


def test_transform_needs_the_element_chamber(flop_setup):
    """Test an element outside the source chamber is refused"""
    gkz, plus, minus, elements = flop_setup
    with pytest.raises(PreconditionError, match="transform_line_bundle"):
        verify_theta_transform(gkz, minus, plus, elements[(1,)])


def test_ideal_sheaf_symptom(flop_setup):
    """Test O(1) moved across the flop loses chart sections"""
    gkz, plus, minus, _ = flop_setup
    report = transform_line_bundle(gkz, plus, minus, (1,))
    assert any(chart.deficit for chart in report.charts)
    assert not report.passed
    assert any("ideal sheaf" in note for note in report.notes)


def test_higher_cohomology_symptom(flop_setup):
    """Test O(−2) moved across the flop has nonzero higher direct images"""
    gkz, plus, minus, _ = flop_setup
    report = transform_line_bundle(gkz, plus, minus, (-2,))
    assert report.higher_cohomology_nonzero
    assert not report.passed


@pytest.mark.parametrize("c", [(-1,), (0,)])
def test_classes_that_survive_the_flop(flop_setup, c):
    """Test O(−1) and O move across cleanly"""
    gkz, plus, minus, _ = flop_setup
    assert transform_line_bundle(gkz, plus, minus, c).passed


def test_uniform_sweep(flop_setup):
    """Test the sweep only moves elements out of foreign chambers"""
    gkz, _, _, elements = flop_setup
    rows = uniform_vanishing_sweep(gkz, list(elements.values()))
    assert rows
    assert all(row.source != row.assigned for row in rows)


@pytest.mark.slow
def test_hirzebruch_theta_transforms(h3_gkz, h3_theta):
    """Test every element of Θ on ℋ₃ transforms to every chamber"""
    for element in build_theta_cox(h3_gkz, h3_theta).elements:
        for chamber in h3_gkz.chambers:
            report = verify_theta_transform(h3_gkz, element.chamber, chamber.id, element)
            assert report.passed, (element.class_vector, chamber.id, report)
