"""Tests for fan validation, stacky fans and common refinements"""

import pytest

from coxcat.core.errors import FanValidationError, PreconditionError
from coxcat.toric.fan import StackyFan, minimal_cone_relation, validate_fan
from coxcat.toric.refinement import common_stacky_refinement

P2_RAYS = [[1, 0], [0, 1], [-1, -1]]
P2_CONES = [[0, 1], [1, 2], [2, 0]]


def test_projective_plane_is_complete():
    """Test the fan of ℙ² validates and is complete"""
    fan = validate_fan(2, P2_RAYS, P2_CONES)
    assert fan.is_simplicial
    assert fan.is_pure
    assert fan.is_complete
    assert fan.used_rays == (0, 1, 2)


def test_faces_include_zero_cone():
    """Test face enumeration of ℙ²"""
    fan = validate_fan(2, P2_RAYS, P2_CONES)
    assert frozenset() in fan.faces
    assert len(fan.faces) == 1 + 3 + 3


def test_non_primitive_ray():
    """Test a ray with a common factor is rejected"""
    with pytest.raises(FanValidationError) as err:
        validate_fan(2, [[2, 0], [0, 1]], [[0, 1]])
    assert err.value.kinds() == {"non_primitive_ray"}


def test_dimension_mismatch_and_bad_index():
    """Test structural violations are collected together"""
    with pytest.raises(FanValidationError) as err:
        validate_fan(2, [[1, 0, 0], [0, 1]], [[0, 1], [0, 5]])
    assert err.value.kinds() == {"dimension_mismatch", "bad_index"}


def test_cone_containing_a_line():
    """Test opposite rays do not span a strongly convex cone"""
    with pytest.raises(FanValidationError) as err:
        validate_fan(2, [[1, 0], [-1, 0], [0, 1]], [[0, 1]])
    assert "not_strongly_convex" in err.value.kinds()


def test_overlapping_cones():
    """Test cones meeting outside a common face"""
    with pytest.raises(FanValidationError) as err:
        validate_fan(2, [[1, 0], [0, 1], [1, 1]], [[0, 1], [1, 2]])
    assert err.value.kinds() == {"bad_intersection"}


def test_validation_error_message_lists_violations():
    """Test the error string names each violation kind"""
    with pytest.raises(FanValidationError) as err:
        validate_fan(2, [[2, 0], [0, 1]], [[0, 3]])
    assert "non_primitive_ray" in str(err.value)
    assert "bad_index" in str(err.value)


def test_non_maximal_cones_are_dropped():
    """Test faces listed as cones disappear from the maximal cone list"""
    fan = validate_fan(2, P2_RAYS, P2_CONES + [[0]])
    assert len(fan.cones) == 3


def test_hirzebruch_fan(stacky):
    """Test ℋ₃ is complete and its stacky fan is trivial"""
    sf = stacky("H3")
    assert sf.fan.is_complete
    assert sf.is_trivial
    assert sf.beta == sf.fan.rays


def test_stacky_multipliers():
    """Test β scales each ray by its multiplier"""
    fan = validate_fan(2, P2_RAYS, P2_CONES)
    sf = StackyFan(fan, (1, 2, 1))
    assert sf.beta == ((1, 0), (0, 2), (-1, -1))
    with pytest.raises(PreconditionError):
        StackyFan(fan, (1, 0, 1))


def test_minimal_cone_relation():
    """Test a relation inside a non-unimodular cone needs a scale"""
    fan = validate_fan(2, [[1, 0], [1, 2], [-1, -1]], P2_CONES)
    relation = minimal_cone_relation(fan, (1, 1))
    assert relation.cone == frozenset({0, 1})
    assert relation.scale == 2
    assert relation.coefficient(0) == 1
    assert relation.coefficient(1) == 1
    assert relation.coefficient(2) == 0


def test_refinement_of_identical_fans():
    """Test refining a fan with itself changes nothing"""
    fan = validate_fan(2, P2_RAYS, P2_CONES)
    refinement = common_stacky_refinement([fan, fan])
    assert set(refinement.fan.cones) == set(fan.cones)
    assert refinement.stacky.is_trivial
    assert len(refinement.charts) == 2


def test_refinement_introduces_multiplier():
    """Test a new ray inside a cone of index two gets multiplier two"""
    coarse = validate_fan(2, [[1, 0], [1, 2], [-1, -1]], P2_CONES)
    other = validate_fan(
        2, [[1, 0], [1, 1], [0, 1], [-1, -1]], [[0, 1], [1, 2], [2, 3], [3, 0]]
    )
    refinement = common_stacky_refinement([coarse, other])
    rays = refinement.fan.rays
    assert {(0, 1), (1, 1), (1, 2)} <= set(rays)
    assert refinement.stacky.multipliers[rays.index((1, 1))] == 2
    assert refinement.fan.is_complete


def test_refinement_support_mismatch():
    """Test fans with different supports are refused"""
    full = validate_fan(2, P2_RAYS, P2_CONES)
    quadrant = validate_fan(2, [[1, 0], [0, 1]], [[0, 1]])
    with pytest.raises(PreconditionError, match="support mismatch"):
        common_stacky_refinement([full, quadrant])


def test_refinement_of_adjacent_chamber_fans(h3_gkz):
    """Test the Hirzebruch and ℙ(1,1,3) chamber fans of ℋ₃ have a complete common refinement"""
    fans = [chamber.fan for chamber in h3_gkz.chambers]
    assert len(fans) == 2
    refinement = common_stacky_refinement(fans)
    assert refinement.fan.cones
    assert refinement.fan.is_complete
    for fan in fans:
        for cone in fan.cones:
            rays = {fan.rays[i] for i in cone}
            assert rays <= set(refinement.fan.rays)
