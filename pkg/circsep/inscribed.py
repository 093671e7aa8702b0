"""
Largest circles internal to a convex polygon under point and line constraints
Queries run against a polygon preprocessed into its skeleton, planar map and hierarchy
"""
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Sequence, Union

import numpy as np
from loguru import logger

from circsep.config import get_eps
from circsep.dk_hierarchy import DKHierarchy, build_hierarchy, max_z_on_line, max_z_on_parabola, wedge_line
from circsep.errors import PointNotInHalfplane
from circsep.geom_core import Circle2, ConvexPolygon, Line2, Point2
from circsep.hull_fsvd import build_point_forest, convex_hull_points
from circsep.separability import ExteriorObstacle, ScanOutcome, directional_scan
from circsep.skeleton import LiftedSurface, PlanarMap, SkeletonTree, build_planar_map, build_skeleton

_SEARCH_STEPS = 100


class InscribedKind(str, Enum):
    CIRCLE = "circle"
    INFEASIBLE = "infeasible"


class QueryCase(str, Enum):
    """Which branch of a query produced the answer"""
    INCIRCLE = "incircle"
    POINT = "point"
    POINT_SET = "point_set"
    HALFPLANE = "halfplane"
    WEDGE = "wedge"
    PARABOLA = "parabola"
    NONE = "none"


@dataclass(frozen=True)
class InscribedResult:
    kind: InscribedKind
    circle: Optional[Circle2] = None
    case: QueryCase = QueryCase.NONE

    @classmethod
    def found(cls, circle: Circle2, case: QueryCase) -> "InscribedResult":
        return cls(kind=InscribedKind.CIRCLE, circle=circle, case=case)

    @classmethod
    def infeasible(cls) -> "InscribedResult":
        return cls(kind=InscribedKind.INFEASIBLE)

    @property
    def feasible(self) -> bool:
        return self.kind == InscribedKind.CIRCLE


@dataclass
class PreprocessedPolygon:
    """Everything the queries need, derived from one convex polygon"""
    polygon: ConvexPolygon
    skt: SkeletonTree
    map: PlanarMap
    surface: LiftedSurface
    hierarchy: DKHierarchy

    @property
    def incircle(self) -> Circle2:
        return self.skt.incircle

    @property
    def tol(self) -> float:
        return get_eps() * max(1.0, self.polygon.diameter)


def preprocess(polygon: Union[ConvexPolygon, Sequence[Sequence[float]]]) -> PreprocessedPolygon:
    """
    Build skeleton tree, planar map, lifted surface and hierarchy

    Args:
        polygon: convex polygon, or its vertex coordinates in either orientation

    Returns:
        PreprocessedPolygon ready for queries
    """
    if not isinstance(polygon, ConvexPolygon):
        polygon = ConvexPolygon.from_coords(polygon)
    skt = build_skeleton(polygon)
    pmap = build_planar_map(skt)
    surface = LiftedSurface(skt, pmap)
    hierarchy = build_hierarchy(polygon, center=skt.incircle.center)
    logger.info(f"Preprocessed {len(polygon)}-gon: {len(skt)} skeleton vertices, "
                f"{hierarchy.level_count} hierarchy levels, incircle r={skt.incircle.radius:.6g}")
    return PreprocessedPolygon(polygon=polygon, skt=skt, map=pmap, surface=surface, hierarchy=hierarchy)


# ========== Helpers ==========

def _in_halfplane(circle: Circle2, line: Line2, tol: float) -> bool:
    return line.signed_distance(circle.center) >= circle.radius - tol


def _contains_all(circle: Circle2, points: Sequence[Point2], tol: float) -> bool:
    return all(circle.center.dist(p) <= circle.radius + tol for p in points)


def _edge_circle(tree: SkeletonTree, child: int, s: float) -> Circle2:
    center, clearance = tree.edge_point(child, s)
    return Circle2(center, max(0.0, clearance))


def _last_feasible(f: Callable[[float], float], tol: float) -> Optional[float]:
    """
    Largest s in [0, 1] with f(s) >= 0 for concave f

    Ternary search finds the maximum, bisection then walks to the right
    boundary of the superlevel set. None when f stays below -tol.
    """
    if f(1.0) >= 0.0:
        return 1.0
    lo, hi = 0.0, 1.0
    for _ in range(_SEARCH_STEPS):
        m1, m2 = lo + (hi - lo) / 3.0, hi - (hi - lo) / 3.0
        if f(m1) < f(m2):
            lo = m1
        else:
            hi = m2
    peak = 0.5 * (lo + hi)
    if f(peak) < -tol:
        return None
    if f(peak) < 0.0:
        return peak
    lo, hi = peak, 1.0
    for _ in range(_SEARCH_STEPS):
        mid = 0.5 * (lo + hi)
        if f(mid) >= 0.0:
            lo = mid
        else:
            hi = mid
    return lo


def _enclosing_on_edge(tree: SkeletonTree, child: int, points: Sequence[Point2], tol: float) -> Optional[Circle2]:
    """Largest circle centered on edge child->parent containing every point"""
    def slack(s: float) -> float:
        center, clearance = tree.edge_point(child, s)
        return clearance - max(center.dist(p) for p in points)

    s = _last_feasible(slack, tol)
    if s is None:
        return None
    return _edge_circle(tree, child, s)


# ========== Queries ==========

def largest_circle_centered_at(pp: PreprocessedPolygon, c: Point2) -> InscribedResult:
    """Internal circle of maximum radius with a prescribed center"""
    if not pp.map.contains(c):
        return InscribedResult.infeasible()
    return InscribedResult.found(Circle2(c, pp.surface.height(c)), QueryCase.POINT)


def query_point(pp: PreprocessedPolygon, x: Point2) -> InscribedResult:
    """
    Largest internal circle enclosing x

    Args:
        pp: preprocessed polygon
        x: query point

    Returns:
        The incircle when it holds x, otherwise the circle through x tangent
        to the two edges bounding x's cell; Infeasible when x is outside P
    """
    key = pp.map.locate(x)
    if key is None:
        logger.debug(f"Point {x} is outside the polygon")
        return InscribedResult.infeasible()
    tree = pp.skt
    if key == tree.root:
        return InscribedResult.found(pp.incircle, QueryCase.INCIRCLE)
    circle = _enclosing_on_edge(tree, key, [x], pp.tol)
    if circle is None:
        logger.warning(f"Point {x} located in cell {key} but no circle on its edge holds it")
        return InscribedResult.infeasible()
    return InscribedResult.found(circle, QueryCase.POINT)


def query_point_set(pp: PreprocessedPolygon, points: Sequence[Point2]) -> InscribedResult:
    """
    Largest internal circle enclosing every point of a set

    The cells of all points have to lie on one root path of the skeleton
    tree. The smallest per-point answer is then the only candidate.
    """
    if not points:
        raise ValueError("point set is empty")
    tree = pp.skt
    keys = []
    for p in points:
        key = pp.map.locate(p)
        if key is None:
            return InscribedResult.infeasible()
        keys.append(key)
    deepest = max(keys, key=lambda k: tree.vertices[k].depth)
    if not all(tree.is_ancestor(k, deepest) for k in keys):
        logger.debug("Point cells do not lie on one root path")
        return InscribedResult.infeasible()
    candidates = [query_point(pp, p) for p in points]
    if not all(c.feasible for c in candidates):
        return InscribedResult.infeasible()
    best = min(candidates, key=lambda c: c.circle.radius)
    if not _contains_all(best.circle, points, pp.tol):
        return InscribedResult.infeasible()
    case = QueryCase.INCIRCLE if best.case == QueryCase.INCIRCLE else QueryCase.POINT_SET
    return InscribedResult.found(best.circle, case)


def smallest_internal_circle_containing(pp: Union[PreprocessedPolygon, ConvexPolygon, Sequence[Sequence[float]]],
                                        points: Sequence[Point2]) -> InscribedResult:
    """
    Largest internal circle enclosing a point set, found through the separability scan

    The scan grows the smallest enclosing circle of the points until it is
    stopped by P's boundary from inside; the result is then lifted along
    the skeleton to the largest internal circle that still holds the points.

    Args:
        pp: preprocessed polygon or a raw convex polygon
        points: at least two points

    Returns:
        Circle or Infeasible; agrees with query_point_set
    """
    if not isinstance(pp, PreprocessedPolygon):
        pp = preprocess(pp)
    pts = list(dict.fromkeys(points))
    if not all(pp.map.contains(p) for p in pts):
        return InscribedResult.infeasible()
    smallest = smallest_internal_enclosing(pp, pts)
    if smallest is None:
        return InscribedResult.infeasible()

    tree = pp.skt
    tol = pp.tol
    start = pp.map.locate(smallest.center)
    path = tree.path_to_root(start)

    def slack_at(v: int) -> float:
        vert = tree.vertices[v]
        return vert.clearance - max(vert.center.dist(p) for p in pts)

    if slack_at(tree.root) >= 0.0:
        return InscribedResult.found(pp.incircle, QueryCase.INCIRCLE)
    # highest path edge that still holds a feasible center
    for child in reversed(path[:-1]):
        circle = _enclosing_on_edge(tree, child, pts, tol)
        if circle is not None and _contains_all(circle, pts, tol):
            return InscribedResult.found(circle, QueryCase.POINT_SET)
    logger.warning("No skeleton edge above the smallest enclosing circle holds the points, using point cells")
    return query_point_set(pp, pts)


def smallest_internal_enclosing(pp: PreprocessedPolygon, points: Sequence[Point2]) -> Optional[Circle2]:
    """Smallest circle enclosing the points whose disk stays inside P, None if there is none"""
    forest = build_point_forest(points)
    hull = convex_hull_points(points)
    obstacle = ExteriorObstacle(pp.polygon)
    result = directional_scan(forest, obstacle,
                              lambda: any(not pp.map.contains(p) for p in hull))
    if result.outcome != ScanOutcome.CIRCLE or not result.circle.is_finite:
        return None
    circle = result.circle.circle
    if not pp.surface.is_internal(circle):
        return None
    return circle


def _halfplane_slack(pp: PreprocessedPolygon, line: Line2, v: int) -> float:
    vert = pp.skt.vertices[v]
    return line.signed_distance(vert.center) - vert.clearance


def _solve_halfplane_edge(pp: PreprocessedPolygon, line: Line2, child: int) -> Circle2:
    # slack is linear along an edge
    g0 = _halfplane_slack(pp, line, child)
    g1 = _halfplane_slack(pp, line, pp.skt.vertices[child].parent)
    s = 1.0 if g0 == g1 else min(1.0, max(0.0, g0 / (g0 - g1)))
    return _edge_circle(pp.skt, child, s)


def _halfplane_linear_scan(pp: PreprocessedPolygon, line: Line2, leaf: int) -> Optional[Circle2]:
    best = None
    for child in pp.skt.path_to_root(leaf)[:-1]:
        parent = pp.skt.vertices[child].parent
        if _halfplane_slack(pp, line, child) >= 0.0 > _halfplane_slack(pp, line, parent):
            circle = _solve_halfplane_edge(pp, line, child)
            if best is None or circle.radius > best.radius:
                best = circle
    return best


def query_halfplane(pp: PreprocessedPolygon, line: Line2) -> InscribedResult:
    """
    Largest internal circle in the closed halfplane H+ of line

    The center lies on the root path of the polygon vertex extreme along the
    line normal; between equally extreme vertices the binary search in
    extreme_vertex decides.
    When the optimum is not unique (a square cut parallel to a side) this
    picks one optimal center, e.g. (0.5, 0.5) rather than (0.5, 0) for
    x >= 0 on the square [-1, 1]^2.

    Args:
        pp: preprocessed polygon
        line: its positive side is the allowed halfplane

    Returns:
        Circle, or Infeasible when P and H+ share no interior
    """
    tol = pp.tol
    inc = pp.incircle
    if _in_halfplane(inc, line, tol):
        return InscribedResult.found(inc, QueryCase.INCIRCLE)
    coords = pp.polygon.coords
    heights = coords @ np.array([line.a, line.b]) + line.c
    if float(heights.max()) <= tol:
        return InscribedResult.infeasible()
    far = pp.polygon.extreme_vertex(line.normal)
    tree = pp.skt
    # g >= 0 at the leaf, < 0 at the root
    top = tree.highest_ancestor(far, lambda u: _halfplane_slack(pp, line, u) >= 0.0)
    circle = None
    if top != tree.root:
        circle = _solve_halfplane_edge(pp, line, top)
    if circle is None or not (_in_halfplane(circle, line, tol) and pp.surface.is_internal(circle)):
        logger.warning(f"Clearance slack along the root path of vertex {far} is not monotone, scanning the path")
        circle = _halfplane_linear_scan(pp, line, far)
        if circle is None:
            return InscribedResult.infeasible()
    if circle.radius <= tol:
        return InscribedResult.infeasible()
    return InscribedResult.found(circle, QueryCase.HALFPLANE)


def query_wedge(pp: PreprocessedPolygon, l1: Line2, l2: Line2) -> InscribedResult:
    """
    Largest internal circle in the closed wedge H1+ ∩ H2+

    Tried in order: the incircle, each single-halfplane answer that happens
    to satisfy the other line, and finally the circle tangent to both lines,
    which is the top of the line where their 45-degree planes meet.
    """
    tol = pp.tol
    inc = pp.incircle
    if _in_halfplane(inc, l1, tol) and _in_halfplane(inc, l2, tol):
        return InscribedResult.found(inc, QueryCase.INCIRCLE)
    r1 = query_halfplane(pp, l1)
    if r1.feasible and _in_halfplane(r1.circle, l2, tol):
        return r1
    r2 = query_halfplane(pp, l2)
    if r2.feasible and _in_halfplane(r2.circle, l1, tol):
        return r2
    if not (r1.feasible and r2.feasible):
        return InscribedResult.infeasible()
    meet = wedge_line(l1, l2)
    if meet is None:
        # same normal: one halfplane holds the other
        stricter = r1 if r1.circle.radius <= r2.circle.radius else r2
        return stricter
    origin, direction = meet
    top = max_z_on_line(pp.hierarchy, origin, direction)
    if top is None or top.z <= tol:
        return InscribedResult.infeasible()
    circle = Circle2(Point2(top.x, top.y), top.z)
    return InscribedResult.found(circle, QueryCase.WEDGE)


def query_point_line(pp: PreprocessedPolygon, line: Line2, x: Point2) -> InscribedResult:
    """
    Largest internal circle enclosing x and lying in H+ of line

    Raises:
        PointNotInHalfplane: x lies strictly on the negative side of line
    """
    tol = pp.tol
    if line.signed_distance(x) < -tol:
        raise PointNotInHalfplane(f"{x} is on the negative side of the line")
    inc = pp.incircle
    if inc.contains(x, tol) and _in_halfplane(inc, line, tol):
        return InscribedResult.found(inc, QueryCase.INCIRCLE)
    by_point = query_point(pp, x)
    if not by_point.feasible:
        return by_point
    if _in_halfplane(by_point.circle, line, tol):
        return by_point
    by_line = query_halfplane(pp, line)
    if not by_line.feasible:
        return by_line
    if by_line.circle.contains(x, tol):
        return by_line
    top = max_z_on_parabola(pp.hierarchy, line, x)
    if top is None:
        return InscribedResult.infeasible()
    circle = Circle2(Point2(top.x, top.y), max(0.0, top.z))
    return InscribedResult.found(circle, QueryCase.PARABOLA)


def verify_inscribed(pp: PreprocessedPolygon, result: InscribedResult,
                     points: Sequence[Point2] = (), lines: Sequence[Line2] = ()) -> bool:
    """Check internality and every query constraint of a returned circle"""
    if not result.feasible:
        return True
    c = result.circle
    tol = pp.tol
    if not pp.surface.is_internal(c):
        return False
    return _contains_all(c, points, tol) and all(_in_halfplane(c, l, tol) for l in lines)

