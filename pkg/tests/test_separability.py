"""
Tests for the directional scan and the smallest separating circle
"""
import math

import pytest

from circsep.config import get_eps, settings
from circsep.errors import Inconclusive
from circsep.geom_core import Circle2, ConvexPolygon, Location, Point2, Polygon, point_in_polygon
from circsep.hull_fsvd import build_point_forest, fsarcs_of_polygon
from circsep.oracles import OracleConfig, gen_polygon_pair, oracle_smallest_separating
from circsep.separability import (Direction, ExteriorObstacle, InteriorObstacle, ScanOutcome, SeparationKind,
                                  directional_scan, line_sagitta_floor, smallest_circle_enclosing_P_excluding_Q,
                                  smallest_separating_circle)
from circsep.witness import verify_witness

from tests.conftest import UNIT_SQUARE

NEAR_TRIANGLE = [(1.2, 0.5), (3.0, -1.0), (3.0, 2.0)]


def _separates(circle, inner: Polygon, outer: Polygon) -> bool:
    tol = 1e-7 * max(1.0, circle.radius)
    if any(circle.center.dist(p) > circle.radius + tol for p in inner):
        return False
    # sample the open disk on a polar grid
    for k in range(48):
        for frac in (0.2, 0.5, 0.8, 0.97):
            p = circle.point_at(2 * math.pi * k / 48)
            q = Point2(circle.center.x + frac * (p.x - circle.center.x),
                       circle.center.y + frac * (p.y - circle.center.y))
            if point_in_polygon(q, outer) == Location.INTERIOR:
                return False
    return True


def test_far_pair_gets_enclosing_circle_of_square(far_pair):
    P, Q = far_pair
    result = smallest_separating_circle(P, Q)
    assert result.separable
    assert result.direction == Direction.P_INSIDE
    assert result.circle.is_finite
    assert result.circle.radius == pytest.approx(math.sqrt(0.5), rel=1e-12)
    assert result.circle.circle.center.as_tuple() == pytest.approx((0.5, 0.5))


def test_near_triangle_forces_larger_circle():
    P = Polygon.from_coords(UNIT_SQUARE)
    Q = Polygon.from_coords(NEAR_TRIANGLE)
    result = smallest_separating_circle(P, Q)
    assert result.separable
    assert result.direction == Direction.P_INSIDE
    circle = result.circle.circle
    assert circle.radius == pytest.approx(0.725, rel=1e-6)
    assert circle.center.as_tuple() == pytest.approx((0.475, 0.5), abs=1e-6)
    assert _separates(circle, P, Q)


def test_touching_squares_separate_by_a_line(touching_squares):
    P, Q = touching_squares
    result = smallest_separating_circle(P, Q)
    assert result.kind == SeparationKind.SEPARABLE
    assert not result.circle.is_finite
    line = result.circle.line
    assert abs(line.a) == pytest.approx(1.0)
    assert abs(line.b) == pytest.approx(0.0, abs=1e-9)
    assert line.signed_distance(Point2(1.0, 0.5)) == pytest.approx(0.0, abs=1e-9)


def test_c_shape_and_bar_are_not_separable(c_and_bar):
    P, Q = c_and_bar
    result = smallest_separating_circle(P, Q)
    assert result.kind == SeparationKind.NOT_SEPARABLE
    assert not result.separable
    assert verify_witness(result.witness, P, Q)


def test_double_c_interlock_is_not_separable(double_c):
    P, Q = double_c
    result = smallest_separating_circle(P, Q)
    assert result.kind == SeparationKind.NOT_SEPARABLE
    assert verify_witness(result.witness, P, Q)


def test_overlapping_squares_intersect(unit_square):
    shifted = Polygon.from_coords([(0.5, 0.5), (1.5, 0.5), (1.5, 1.5), (0.5, 1.5)])
    result = smallest_separating_circle(unit_square, shifted)
    assert result.kind == SeparationKind.POLYGONS_INTERSECT


def test_single_direction_is_exposed(c_and_bar):
    P, Q = c_and_bar
    forward = smallest_circle_enclosing_P_excluding_Q(P, Q)
    backward = smallest_circle_enclosing_P_excluding_Q(Q, P)
    assert forward.outcome != ScanOutcome.CIRCLE
    assert backward.outcome != ScanOutcome.CIRCLE


def test_non_simple_obstacle_is_accepted():
    P = Polygon.from_coords(UNIT_SQUARE)
    bowtie = Polygon.relaxed([(4.0, 0.0), (5.0, 1.0), (5.0, 0.0), (4.0, 1.0)])
    result = smallest_circle_enclosing_P_excluding_Q(P, bowtie)
    assert result.outcome == ScanOutcome.CIRCLE
    assert result.circle.radius == pytest.approx(math.sqrt(0.5))


def test_scan_without_obstacle_cut_returns_enclosing_circle(far_pair):
    P, Q = far_pair
    forest = fsarcs_of_polygon(P)
    result = directional_scan(forest, InteriorObstacle(Q), lambda: False)
    assert result.outcome == ScanOutcome.CIRCLE
    assert result.iterations == 0


def test_scan_inside_convex_polygon():
    outer = ConvexPolygon.from_coords([(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)])
    pts = [Point2(0.9, 0.9), Point2(0.5, 0.5)]
    result = directional_scan(build_point_forest(pts), ExteriorObstacle(outer), lambda: False)
    assert result.outcome == ScanOutcome.CIRCLE
    assert result.circle.radius == pytest.approx(0.5 * math.sqrt(0.32))


@pytest.mark.oracle
@pytest.mark.parametrize("seed", range(6))
def test_agrees_with_grid_reference(seed):
    P, Q = gen_polygon_pair(seed, 10, 8)
    result = smallest_separating_circle(P, Q)
    try:
        expected = oracle_smallest_separating(P, Q, OracleConfig(resolution=60, rounds=5))
    except Inconclusive:
        pytest.skip("grid reference inconclusive")
    if expected.kind == SeparationKind.POLYGONS_INTERSECT:
        assert result.kind == SeparationKind.POLYGONS_INTERSECT
        return
    assert result.separable == expected.separable
    if result.separable and result.circle.is_finite and expected.circle.is_finite:
        assert result.circle.radius == pytest.approx(expected.circle.radius, rel=1e-3)
        inner, outer = (P, Q) if result.direction == Direction.P_INSIDE else (Q, P)
        assert _separates(result.circle.circle, inner, outer)
    if result.kind == SeparationKind.NOT_SEPARABLE:
        assert verify_witness(result.witness, P, Q)


@pytest.mark.slow
@pytest.mark.oracle
@pytest.mark.parametrize("seed", range(200))
def test_agrees_with_grid_reference_full(seed):
    rng_sizes = [8, 16, 32, 64, 128]
    P, Q = gen_polygon_pair(1000 + seed, rng_sizes[seed % 5], rng_sizes[(seed // 5) % 5])
    result = smallest_separating_circle(P, Q)
    try:
        expected = oracle_smallest_separating(P, Q)
    except Inconclusive:
        pytest.skip("grid reference inconclusive")
    if expected.kind == SeparationKind.POLYGONS_INTERSECT:
        assert result.kind == SeparationKind.POLYGONS_INTERSECT
        return
    assert result.separable == expected.separable
    if result.separable and result.circle.is_finite and expected.circle.is_finite:
        assert result.circle.radius == pytest.approx(expected.circle.radius, rel=1e-4)


# ========== Obstacles ==========

def test_interior_obstacle_cuts_chords(unit_square):
    obstacle = InteriorObstacle(unit_square)
    assert obstacle.cuts(None, (Point2(-1.0, 0.5), Point2(2.0, 0.5)))
    assert not obstacle.cuts(None, (Point2(2.0, 0.0), Point2(3.0, 1.0)))


@pytest.mark.parametrize("radius, meets", [(0.4, False), (0.6, True)])
def test_interior_obstacle_disk(unit_square, radius, meets):
    assert InteriorObstacle(unit_square).disk_meets(Circle2(Point2(0.5, -0.5), radius)) == meets


def test_eps_follows_settings(monkeypatch):
    monkeypatch.setattr(settings, "CIRCSEP_EPS", 1e-6)
    assert get_eps() == 1e-6


# ========== Scan progress and symmetry ==========

@pytest.mark.parametrize("seed", range(8))
def test_scan_progress_is_bounded(seed):
    P, Q = gen_polygon_pair(seed, 24, 16)
    forest = fsarcs_of_polygon(P)
    result = smallest_circle_enclosing_P_excluding_Q(P, Q, forest=forest)
    assert result.iterations <= len(Q) + 2 * len(forest.sites) + 2


def test_interlocked_scan_walks_the_obstacle(c_and_bar):
    P, Q = c_and_bar
    forest = fsarcs_of_polygon(P)
    result = smallest_circle_enclosing_P_excluding_Q(P, Q, forest=forest)
    assert 1 <= result.iterations <= len(Q) + 2 * len(forest.sites) + 2


@pytest.mark.parametrize("pair", ["far_pair", "touching_squares", "c_and_bar"])
def test_direction_symmetry(pair, request):
    P, Q = request.getfixturevalue(pair)
    ab, ba = smallest_separating_circle(P, Q), smallest_separating_circle(Q, P)
    assert ab.kind == ba.kind
    if ab.separable:
        assert ab.direction != ba.direction
        assert ab.circle.radius == ba.circle.radius
        if ab.circle.is_finite:
            assert ab.circle.circle.center == ba.circle.circle.center


def test_equal_radii_pick_the_smaller_center(far_pair):
    P, Q = far_pair
    result = smallest_separating_circle(Q, P)
    assert result.direction == Direction.Q_INSIDE
    assert result.circle.circle.center.as_tuple() == pytest.approx((0.5, 0.5))


def test_line_floor_tracks_eps(monkeypatch):
    assert line_sagitta_floor() >= 16.0 * get_eps()
    monkeypatch.setattr(settings, "CIRCSEP_EPS", 1e-6)
    assert line_sagitta_floor() == pytest.approx(1.6e-5)
