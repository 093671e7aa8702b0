"""
Tests for the face-removal hierarchy and its line and parabola queries
"""
import math

import numpy as np
import pytest

from circsep.config import settings
from circsep.dk_hierarchy import (_face_adjacency, _polygon_of_lines, brute_max_z_on_line, brute_max_z_on_parabola,
                                  build_hierarchy, max_z_on_line, max_z_on_parabola, wedge_line)
from circsep.geom_core import ConvexPolygon, Line2, Point2
from circsep.skeleton import build_skeleton
from circsep.oracles import gen_convex_polygon, gen_points_in

from tests.conftest import SQUARE, TRIANGLE


@pytest.fixture(scope="module")
def square_h():
    return build_hierarchy(ConvexPolygon.from_coords(SQUARE))


def test_square_cannot_be_coarsened(square_h):
    # dropping any side of a square leaves two parallel sides
    assert square_h.level_count == 1
    assert sorted(square_h.faces[0]) == [0, 1, 2, 3]


def test_triangle_has_a_single_level():
    h = build_hierarchy(ConvexPolygon.from_coords(TRIANGLE))
    assert h.level_count == 1
    assert h.refinements == []


def test_vertical_line_hits_the_apex(square_h):
    top = max_z_on_line(square_h, (0.0, 0.0, 0.0), (0.0, 0.0, 1.0))
    assert top.as_tuple() == pytest.approx((0.0, 0.0, 1.0))


def test_flat_line_tie_breaks_lexicographically(square_h):
    best = max_z_on_line(square_h, (-2.0, 0.0, 0.0), (1.0, 0.0, 0.0))
    assert best.as_tuple() == pytest.approx((-1.0, 0.0, 0.0))


def test_line_missing_the_body(square_h):
    assert max_z_on_line(square_h, (5.0, 5.0, 0.0), (0.0, 1.0, 0.0)) is None
    assert max_z_on_line(square_h, (0.0, 0.0, 2.0), (1.0, 0.0, 0.0)) is None


def test_parabola_through_point_tangent_to_line(square_h):
    best = max_z_on_parabola(square_h, Line2(1.0, 0.0, 0.0), Point2(0.1, 0.9))
    r = 0.1 * (2.0 + math.sqrt(2.0))
    assert best.z == pytest.approx(r, rel=1e-9)
    assert (best.x, best.y) == pytest.approx((r, 1.0 - r), rel=1e-9)


def test_parabola_with_point_on_the_line(square_h):
    best = max_z_on_parabola(square_h, Line2(1.0, 0.0, 0.0), Point2(0.0, 0.5))
    assert best.as_tuple() == pytest.approx((0.5, 0.5, 0.5))


def test_wedge_line():
    point, direction = wedge_line(Line2(1.0, 0.0, 1.0), Line2(0.0, 1.0, 1.0))
    assert direction / np.linalg.norm(direction) == pytest.approx(np.ones(3) / math.sqrt(3.0))
    # the point lies on both planes z = x + 1 and z = y + 1
    assert point[2] == pytest.approx(point[0] + 1.0)
    assert point[2] == pytest.approx(point[1] + 1.0)
    assert wedge_line(Line2(1.0, 0.0, 1.0), Line2(1.0, 0.0, -1.0)) is None


@pytest.mark.parametrize("seed", range(6))
def test_levels_are_nested(seed):
    poly = gen_convex_polygon(seed, 80)
    h = build_hierarchy(poly)
    assert sorted(h.faces[-1]) == list(range(len(poly)))
    assert len(h.faces[0]) >= 3
    for coarse, fine, step in zip(h.faces, h.faces[1:], h.refinements):
        assert set(coarse) < set(fine)
        assert step.added == set(fine) - set(coarse)
        assert set(step.adjacent) == set(coarse)
        # no two consecutive sides are removed in the same round
        k = len(fine)
        for j, g in enumerate(fine):
            assert not (g in step.added and fine[(j + 1) % k] in step.added)


@pytest.mark.parametrize("seed", range(4))
def test_removed_faces_are_independent_and_low_degree(seed):
    poly = gen_convex_polygon(seed, 120)
    lines = poly.edge_lines
    h = build_hierarchy(poly)
    for fine, step in zip(h.faces[1:], h.refinements):
        level = ConvexPolygon(tuple(_polygon_of_lines(lines, fine)))
        adj = _face_adjacency(build_skeleton(level), fine)
        for g in step.added:
            assert not adj[g] & step.added
            assert len(adj[g]) <= settings.DK_DEGREE_LIMIT


@pytest.mark.parametrize("seed", range(4))
def test_levels_shrink_geometrically(seed):
    h = build_hierarchy(gen_convex_polygon(seed, 200))
    assert h.level_count <= 8 * math.ceil(math.log2(200))


@pytest.mark.parametrize("seed", range(8))
def test_line_queries_match_brute_force(seed):
    poly = gen_convex_polygon(seed, 60)
    h = build_hierarchy(poly)
    rng = np.random.default_rng(seed)
    for p in gen_points_in(rng, poly, 40):
        direction = (rng.normal(), rng.normal(), abs(rng.normal()))
        origin = (p.x, p.y, 0.0)
        fast = max_z_on_line(h, origin, direction)
        slow = brute_max_z_on_line(h, origin, direction)
        assert (fast is None) == (slow is None)
        if fast is not None:
            assert fast.z == pytest.approx(slow.z, abs=1e-7)


@pytest.mark.parametrize("seed", range(8))
def test_parabola_queries_match_brute_force(seed):
    poly = gen_convex_polygon(50 + seed, 60)
    h = build_hierarchy(poly)
    rng = np.random.default_rng(seed)
    lines = poly.edge_lines
    for p in gen_points_in(rng, poly, 40):
        a, b, c = lines[int(rng.integers(len(poly)))]
        line = Line2(float(a), float(b), float(c))
        fast = max_z_on_parabola(h, line, p)
        slow = brute_max_z_on_parabola(h, line, p)
        assert (fast is None) == (slow is None)
        if fast is not None:
            assert fast.z == pytest.approx(slow.z, abs=1e-7)
            assert poly.signed_clearance(Point2(fast.x, fast.y)) >= fast.z - 1e-7
