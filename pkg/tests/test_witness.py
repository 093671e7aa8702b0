"""
Tests for non-separability witnesses
"""
import math

import numpy as np
import pytest

from circsep.errors import WitnessConstructionFailed
from circsep.geom_core import Circle2, Location, Point2, point_in_polygon
from circsep.separability import ScanOutcome, smallest_circle_enclosing_P_excluding_Q
from circsep.witness import (Witness, alternating_on_circle, extract_witness, interior_mask, line_witness,
                             search_witness, verify_witness)

R = 1000.0
CENTER = Point2(3.0 + R, 2.75)
# along x = 3 the interlocked pair alternates Q, P, Q, P from the top
HEIGHTS = (5.0, 3.5, 2.0, 0.5)


def _angle_for(y: float) -> float:
    return math.pi - math.asin((y - CENTER.y) / R)


@pytest.fixture
def big_circle():
    return Circle2(CENTER, R)


@pytest.fixture
def hand_witness(big_circle):
    pts = tuple(big_circle.point_at(_angle_for(y)) for y in HEIGHTS)
    return Witness(circle=big_circle, points=pts)


def test_hand_built_witness_verifies(hand_witness, double_c):
    P, Q = double_c
    assert verify_witness(hand_witness, P, Q)


def test_wrong_labels_fail(hand_witness, double_c):
    P, Q = double_c
    swapped = Witness(circle=hand_witness.circle, points=hand_witness.points, labels=("P", "Q", "P", "Q"))
    assert not verify_witness(swapped, P, Q)


def test_point_off_circle_fails(hand_witness, double_c):
    P, Q = double_c
    moved = list(hand_witness.points)
    moved[1] = Point2(moved[1].x - 0.5, moved[1].y)
    assert not verify_witness(Witness(circle=hand_witness.circle, points=tuple(moved)), P, Q)


def test_clockwise_order_fails(hand_witness, double_c):
    P, Q = double_c
    pts = hand_witness.points
    reordered = Witness(circle=hand_witness.circle, points=(pts[2], pts[1], pts[0], pts[3]))
    assert not verify_witness(reordered, P, Q)


def test_alternating_on_circle_with_hint_angles(big_circle, double_c):
    P, Q = double_c
    w = alternating_on_circle(big_circle, P, Q, extra_angles=[_angle_for(y) for y in HEIGHTS])
    assert w is not None
    assert verify_witness(w, P, Q)


def test_alternating_on_circle_none_for_separated_pair(far_pair):
    P, Q = far_pair
    assert alternating_on_circle(Circle2(Point2(3.0, 3.0), 3.0), P, Q) is None


def test_line_witness_for_interlocked_pair(double_c):
    P, Q = double_c
    w = line_witness(P, Q)
    assert w is not None
    assert verify_witness(w, P, Q)


def test_interior_mask_matches_scalar_test(c_and_bar):
    P, _ = c_and_bar
    rng = np.random.default_rng(5)
    xy = rng.uniform(-0.5, 4.5, (400, 2))
    mask = interior_mask(xy, P)
    for (x, y), inside in zip(xy, mask):
        assert inside == (point_in_polygon(Point2(float(x), float(y)), P) == Location.INTERIOR)


@pytest.mark.parametrize("pair", ["c_and_bar", "double_c"])
def test_witness_from_stopped_scan(pair, request):
    P, Q = request.getfixturevalue(pair)
    built = 0
    for inner, outer in ((P, Q), (Q, P)):
        res = smallest_circle_enclosing_P_excluding_Q(inner, outer)
        if res.outcome != ScanOutcome.NOT_SEPARABLE or res.state is None:
            continue
        try:
            w = extract_witness(res.state, P, Q)
        except WitnessConstructionFailed:
            continue
        assert verify_witness(w, P, Q)
        built += 1
    if not built:
        pytest.skip("no stopped scan produced a perturbed witness")


def test_search_finds_nothing_for_separated_pair(far_pair):
    assert search_witness(*far_pair) is None
