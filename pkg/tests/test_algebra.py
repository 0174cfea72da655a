"""Tests for Θ_Cox, the endomorphism algebra and the exceptionality verdict"""

import logging

import pytest

from coxcat import examples
from coxcat.category.algebra import (
    build_theta_cox,
    check_full_strong_exceptional,
    endomorphism_algebra,
    has_complete_chambers,
)
from coxcat.core.errors import PreconditionError
from coxcat.core.variety import variety_from_document
from coxcat.theta.collection import enumerate_theta, order_theta
from coxcat.toric.gkz import chamber_of, secondary_fan


def _ordered(cg, gkz):
    elements = build_theta_cox(gkz, enumerate_theta(cg)).elements
    return order_theta(cg, elements, by_effectivity=has_complete_chambers(gkz))


@pytest.fixture(scope="module")
def p1():
    cg = variety_from_document(examples.variety("P1")).class_group
    return cg, secondary_fan(cg)


def test_chamber_assignment(h3_gkz, h3_theta):
    """Test each element of Θ on ℋ₃ goes to the chamber of its d"""
    hirzebruch = chamber_of(h3_gkz, (1, 1)).chamber_id
    weighted = chamber_of(h3_gkz, (-1, 1)).chamber_id
    lowest = min(hirzebruch, weighted)
    assigned = {e.d: e.chamber for e in build_theta_cox(h3_gkz, h3_theta).elements}
    assert assigned == {
        (1, 0): hirzebruch,
        (1, 1): hirzebruch,
        (-1, 1): weighted,
        (-2, 1): weighted,
        (0, 0): lowest,
        (0, 1): lowest,
    }


def test_wall_agreements(h3_gkz, h3_theta):
    """Test support functions agree across the wall for wall elements"""
    cox = build_theta_cox(h3_gkz, h3_theta)
    assert {a.element for a in cox.agreements} == {(0, 0), (0, -1)}
    assert all(a.passed for a in cox.agreements)


def test_projective_line_algebra(p1):
    """Test the Kronecker quiver of ℙ¹"""
    cg, gkz = p1
    ordered = _ordered(cg, gkz)
    assert [e.class_vector for e in ordered] == [(0,), (-1,)]
    alg = endomorphism_algebra(cg, ordered)
    assert alg.dims == ((1, 0), (2, 1))
    assert len(alg) == 2


def test_composition_with_identity(p1):
    """Test composing with an identity returns the same basis element"""
    cg, gkz = p1
    alg = endomorphism_algebra(cg, _ordered(cg, gkz))
    for f in range(2):
        assert alg.compose(1, 0, 0, f, 0) == f
        assert alg.compose(1, 1, 0, 0, f) == f


def test_projective_line_is_exceptional(p1):
    """Test the verdict on ℙ¹"""
    cg, gkz = p1
    verdict = check_full_strong_exceptional(endomorphism_algebra(cg, _ordered(cg, gkz)), gkz)
    assert verdict.passed
    assert verdict.mode == "full strong exceptional"
    assert verdict.pairs_checked == 4


def test_algebra_logs_below_info(p1, caplog):
    """Test building and checking the algebra stays quiet at the default log level"""
    cg, gkz = p1
    ordered = _ordered(cg, gkz)
    with caplog.at_level(logging.INFO, logger="coxcat"):
        check_full_strong_exceptional(endomorphism_algebra(cg, ordered), gkz)
    assert [r for r in caplog.records if r.levelno >= logging.INFO] == []


def test_hirzebruch_is_full_strong_exceptional(h3, h3_gkz):
    """Test all 36 ordered pairs on ℋ₃"""
    verdict = check_full_strong_exceptional(endomorphism_algebra(h3, _ordered(h3, h3_gkz)), h3_gkz)
    assert verdict.passed, verdict.violations
    assert verdict.pairs_checked == 36


def test_flop_is_tilting(flop, flop_gkz):
    """Test the non-complete chambers switch the verdict to Ext concentration"""
    alg = endomorphism_algebra(flop, _ordered(flop, flop_gkz))
    verdict = check_full_strong_exceptional(alg, flop_gkz)
    assert verdict.mode == "tilting"
    assert verdict.pairs_checked == 9
    assert verdict.passed, verdict.violations
    assert not has_complete_chambers(flop_gkz)
    assert [e.order for e in alg.elements] == [0, 1, 2]


def test_wrong_order_is_reported(h3, h3_gkz):
    """Test a reversed order produces triangularity violations"""
    ordered = list(reversed(_ordered(h3, h3_gkz)))
    verdict = check_full_strong_exceptional(endomorphism_algebra(h3, ordered), h3_gkz)
    assert not verdict.passed
    assert "triangularity" in {v.kind for v in verdict.violations}


def test_unassigned_elements_are_refused(h3, h3_gkz, h3_theta):
    """Test the verdict needs chamber assignments"""
    alg = endomorphism_algebra(h3, order_theta(h3, h3_theta))
    with pytest.raises(PreconditionError, match="chambers"):
        check_full_strong_exceptional(alg, h3_gkz)


@pytest.mark.slow
def test_blowup_is_full_strong_exceptional(bl2p3, bl2p3_gkz):
    """Test all 81 ordered pairs on ℙ³ blown up in two points"""
    verdict = check_full_strong_exceptional(
        endomorphism_algebra(bl2p3, _ordered(bl2p3, bl2p3_gkz)), bl2p3_gkz
    )
    assert verdict.passed, verdict.violations
    assert verdict.pairs_checked == 81
