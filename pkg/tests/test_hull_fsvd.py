"""
Tests for hulls, smallest enclosing circles and the arc forest
"""
import itertools
import math

import hypothesis.strategies as st
import pytest
from hypothesis import given, settings as hsettings

from circsep.errors import CollinearInput, DegenerateInput
from circsep.geom_core import ConvexPolygon, Point2, Polygon, circumcircle
from circsep.hull_fsvd import (build_fsarcs, build_fsvd, build_point_forest, convex_hull_points,
                               convex_hull_simple_polygon, fsarcs_of_polygon, smallest_enclosing_circle)
from circsep.oracles import gen_convex_polygon, gen_simple_polygon

from tests.conftest import C_SHAPE, SQUARE, TRIANGLE


def _brute_sec_radius(pts):
    best = math.inf
    cands = []
    for a, b in itertools.combinations(pts, 2):
        cands.append((Point2((a.x + b.x) / 2, (a.y + b.y) / 2), a.dist(b) / 2))
    for a, b, c in itertools.combinations(pts, 3):
        try:
            circle = circumcircle(a, b, c)
        except CollinearInput:
            continue
        cands.append((circle.center, circle.radius))
    for center, r in cands:
        if all(center.dist(p) <= r * (1 + 1e-9) + 1e-12 for p in pts):
            best = min(best, r)
    return best


def test_melkman_hull_of_c_shape():
    hull = convex_hull_simple_polygon(Polygon.from_coords(C_SHAPE))
    assert sorted(p.as_tuple() for p in hull) == [(0.0, 0.0), (0.0, 4.0), (4.0, 0.0), (4.0, 4.0)]


@pytest.mark.parametrize("seed", range(10))
def test_melkman_hull_matches_point_hull(seed):
    poly = gen_simple_polygon(seed, 40)
    hull = convex_hull_simple_polygon(poly)
    assert sorted(p.as_tuple() for p in hull) == sorted(p.as_tuple() for p in convex_hull_points(list(poly)))


def test_point_hull_of_collinear_points():
    pts = [Point2(float(k), 2.0 * k) for k in range(5)]
    assert convex_hull_points(pts) == [Point2(0.0, 0.0), Point2(4.0, 8.0)]


small_point_sets = st.lists(
    st.builds(Point2, st.integers(-20, 20).map(float), st.integers(-20, 20).map(float)),
    min_size=1, max_size=9, unique=True)


@given(small_point_sets, st.integers(0, 5))
@hsettings(max_examples=150, deadline=None)
def test_smallest_enclosing_circle_matches_brute_force(pts, seed):
    circle, support = smallest_enclosing_circle(pts, seed=seed)
    if len(pts) == 1:
        assert circle.radius == 0.0
        return
    assert circle.radius == pytest.approx(_brute_sec_radius(pts), rel=1e-9)
    assert all(circle.contains(p) for p in pts)
    assert all(abs(circle.center.dist(s) - circle.radius) <= 1e-9 * max(1.0, circle.radius) for s in support)


def test_smallest_enclosing_circle_empty():
    with pytest.raises(DegenerateInput):
        smallest_enclosing_circle([])


def test_fsvd_of_square_is_one_face():
    diag = build_fsvd(ConvexPolygon.from_coords(SQUARE))
    assert len(diag.faces) == 1
    assert sorted(diag.faces[0].sites) == [0, 1, 2, 3]
    assert diag.faces[0].circle.radius == pytest.approx(math.sqrt(2.0))
    assert diag.verify()


@pytest.mark.parametrize("seed", range(8))
def test_fsvd_circles_enclose_all_sites(seed):
    diag = build_fsvd(gen_convex_polygon(seed, 30), seed=seed)
    assert diag.verify()
    m = len(diag.hull)
    triangles = sum(len(f.sites) - 2 for f in diag.faces)
    assert triangles == m - 2


@pytest.mark.parametrize("seed", range(6))
def test_every_hull_vertex_owns_a_cell(seed):
    P = gen_simple_polygon(seed, 30)
    hull = convex_hull_simple_polygon(P)
    diag = build_fsvd(hull, seed=seed)
    assert len(diag.cells) == len(hull)
    for s, faces in enumerate(diag.cells):
        assert faces
        for fi in faces:
            # the site lies on the circle of every vertex of its cell
            circle = diag.faces[fi].circle
            assert circle.center.dist(hull[s]) == pytest.approx(circle.radius, rel=1e-9)


def test_square_cells_share_one_vertex():
    diag = build_fsvd(ConvexPolygon.from_coords(SQUARE))
    assert diag.cells == [[0], [0], [0], [0]]


def test_fsvd_is_seed_independent():
    hull = gen_convex_polygon(3, 25)
    first = sorted(tuple(f.sites) for f in build_fsvd(hull, seed=0).faces)
    second = sorted(tuple(f.sites) for f in build_fsvd(hull, seed=17).faces)
    assert first == second


def test_forest_of_square_has_four_roots_with_terminal_children():
    forest = fsarcs_of_polygon(Polygon.from_coords(SQUARE))
    assert len(forest.roots) == 4
    assert forest.sec.radius == pytest.approx(math.sqrt(2.0))
    for root in forest.root_nodes():
        assert len(root.children) == 1
        assert forest.nodes[root.children[0]].terminal


def test_forest_of_right_triangle_roots_on_circumcircle():
    forest = fsarcs_of_polygon(Polygon.from_coords(TRIANGLE))
    assert forest.sec.radius == pytest.approx(2.5)
    assert forest.sec.center.as_tuple() == pytest.approx((2.0, 1.5))


def test_forest_of_obtuse_triangle_uses_diameter_roots():
    forest = fsarcs_of_polygon(Polygon.from_coords([(0.0, 0.0), (4.0, 0.0), (1.0, 0.5)]))
    assert forest.sec.radius == pytest.approx(2.0)
    assert len(forest.roots) == 2


@pytest.mark.parametrize("seed", range(8))
def test_forest_radii_grow_downward(seed):
    forest = build_fsarcs(build_fsvd(gen_convex_polygon(seed, 40)))
    for node in forest.nodes:
        if node.parent is None or node.terminal:
            continue
        parent = forest.nodes[node.parent]
        assert node.radius >= parent.radius * (1.0 - 1e-9)
        assert node.depth == parent.depth + 1


@pytest.mark.parametrize("seed", range(4))
def test_terminals_are_the_hull_edges(seed):
    hull = gen_convex_polygon(seed, 20)
    forest = fsarcs_of_polygon(hull)
    m = len(forest.sites)
    terminals = sorted((n.start, n.end) for n in forest.nodes if n.terminal)
    assert terminals == sorted((i, (i + 1) % m) for i in range(m))


def test_point_forest_of_two_points():
    forest = build_point_forest([Point2(0.0, 0.0), Point2(2.0, 0.0)])
    assert len(forest.roots) == 2
    assert forest.sec.radius == pytest.approx(1.0)
    assert all(forest.nodes[c].terminal for r in forest.root_nodes() for c in r.children)


def test_point_forest_rejects_single_point():
    with pytest.raises(DegenerateInput):
        build_point_forest([Point2(1.0, 1.0), Point2(1.0, 1.0)])
