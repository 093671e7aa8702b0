"""
Smallest separating circle of two simple polygons
Walks the arc forest of one polygon's hull against the other polygon's edges
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Tuple

import numpy as np
from loguru import logger

from circsep.config import disk_tol, get_eps, settings
from circsep.errors import WitnessConstructionFailed
from circsep.geom_core import (
    Circle2,
    ConvexPolygon,
    GeneralizedCircle,
    Line2,
    Location,
    Point2,
    Polygon,
    SegMode,
    circle_from_sagitta,
    interiors_meet,
    midpoint,
    point_in_polygon,
    sagitta_of,
    segment_meets_interior,
    segment_region_interval,
    segments_properly_cross,
)
from circsep.hull_fsvd import ArcNode, FSArcsForest, convex_hull_simple_polygon, fsarcs_of_polygon
from circsep.witness import ScanState, Witness, extract_witness, line_witness, search_witness


class Direction(str, Enum):
    """Which polygon ends up inside the separating circle"""
    P_INSIDE = "P-inside"
    Q_INSIDE = "Q-inside"


class ScanOutcome(str, Enum):
    CIRCLE = "circle"
    POLYGONS_INTERSECT = "polygons_intersect"
    NOT_SEPARABLE = "not_separable"


class SeparationKind(str, Enum):
    SEPARABLE = "separable"
    NOT_SEPARABLE = "not_separable"
    POLYGONS_INTERSECT = "polygons_intersect"


@dataclass
class DirectionalResult:
    """Outcome of one direction of the search"""
    outcome: ScanOutcome
    circle: Optional[GeneralizedCircle] = None
    state: Optional[ScanState] = None
    iterations: int = 0


@dataclass
class SeparationResult:
    kind: SeparationKind
    circle: Optional[GeneralizedCircle] = None
    direction: Optional[Direction] = None
    witness: Optional[Witness] = None

    @property
    def separable(self) -> bool:
        return self.kind == SeparationKind.SEPARABLE


# ========== Obstacles ==========

def region_interior_point(circle: Circle2, chord: Tuple[Point2, Point2]) -> Point2:
    """Point halfway between the chord midpoint and the arc apex"""
    s, e = chord
    d = (e - s).unit()
    apex = circle.center + Point2(d.y, -d.x).scale(circle.radius)
    return midpoint(midpoint(s, e), apex)


def region_edge_hits(circle: Circle2, chord: Tuple[Point2, Point2],
                     starts: np.ndarray, ends: np.ndarray) -> np.ndarray:
    """Vectorized open-mode overlap of many segments with a circular segment"""
    s, e = chord
    scale = max(s.dist(e), 1e-300)
    tau = get_eps() * scale
    line = Line2.through(s, e)
    h0 = line.a * starts[:, 0] + line.b * starts[:, 1] + line.c
    h1 = line.a * ends[:, 0] + line.b * ends[:, 1] + line.c
    dh = h1 - h0
    lo = np.zeros(len(starts))
    hi = np.ones(len(starts))
    with np.errstate(divide="ignore", invalid="ignore"):
        tcrit = (-tau - h0) / dh
    hi = np.where(dh > 0, np.minimum(hi, tcrit), hi)
    lo = np.where(dh < 0, np.maximum(lo, tcrit), lo)
    flat_out = (dh == 0) & (h0 > -tau)

    radius = circle.radius - tau
    d = ends - starts
    w = starts - np.array([circle.center.x, circle.center.y])
    qa = np.einsum("ij,ij->i", d, d)
    qb = 2.0 * np.einsum("ij,ij->i", d, w)
    qc = np.einsum("ij,ij->i", w, w) - radius * radius
    disc = qb * qb - 4.0 * qa * qc
    root = np.sqrt(np.maximum(disc, 0.0))
    with np.errstate(divide="ignore", invalid="ignore"):
        t1 = (-qb - root) / (2.0 * qa)
        t2 = (-qb + root) / (2.0 * qa)
    lo = np.maximum(lo, t1)
    hi = np.minimum(hi, t2)
    return (qa > 0) & (disc >= 0) & ~flat_out & (hi - lo > 1e-12) & (radius > 0)


class Obstacle(ABC):
    """A region the separating disk has to avoid"""

    @property
    @abstractmethod
    def n_edges(self) -> int:
        ...

    @abstractmethod
    def edge_cuts(self, circle: Optional[Circle2], chord: Tuple[Point2, Point2], i: int) -> bool:
        """Circular segment (chord segment when circle is None) meets edge i"""

    @abstractmethod
    def cuts(self, circle: Optional[Circle2], chord: Tuple[Point2, Point2]) -> bool:
        """Circular segment meets the obstacle"""

    @abstractmethod
    def disk_meets(self, circle: Circle2) -> bool:
        """Open disk meets the obstacle"""

    @abstractmethod
    def halfplane_meets(self, line: Line2) -> bool:
        """Open negative halfplane of line meets the obstacle"""

    @abstractmethod
    def tangency(self, circle: Circle2, chord: Tuple[Point2, Point2]) -> Point2:
        """Obstacle boundary point touched by the circle on the arc side"""

    def cuts_node(self, node: ArcNode) -> bool:
        return self.cuts(node.circle, node.chord)

    def node_cuts_edge(self, node: ArcNode, i: int) -> bool:
        return self.edge_cuts(node.circle, node.chord, i)


class InteriorObstacle(Obstacle):
    """Interior of a closed polygonal cycle (simplicity not required)"""

    def __init__(self, poly: Polygon):
        self.poly = poly
        self.starts = poly.coords
        self.ends = poly.next_coords

    @property
    def n_edges(self) -> int:
        return len(self.poly)

    def edge_cuts(self, circle, chord, i) -> bool:
        a, b = self.poly[i], self.poly[i + 1]
        if circle is None:
            return segments_properly_cross(chord[0], chord[1], a, b)
        return segment_region_interval(circle, chord, (a, b), SegMode.OPEN) is not None

    def cuts(self, circle, chord) -> bool:
        if circle is None:
            return segment_meets_interior(chord[0], chord[1], self.poly)
        if np.any(region_edge_hits(circle, chord, self.starts, self.ends)):
            return True
        return point_in_polygon(region_interior_point(circle, chord), self.poly) == Location.INTERIOR

    def disk_meets(self, circle: Circle2) -> bool:
        c = np.array([circle.center.x, circle.center.y])
        e = self.ends - self.starts
        w = c - self.starts
        elen2 = np.einsum("ij,ij->i", e, e)
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(elen2 > 0, np.einsum("ij,ij->i", w, e) / elen2, 0.0)
        t = np.clip(t, 0.0, 1.0)
        closest = self.starts + e * t[:, None]
        dist = np.hypot(closest[:, 0] - c[0], closest[:, 1] - c[1]).min()
        if dist < circle.radius * (1.0 - 4.0 * get_eps()):
            return True
        return point_in_polygon(circle.center, self.poly) == Location.INTERIOR

    def halfplane_meets(self, line: Line2) -> bool:
        vals = self.starts @ np.array([line.a, line.b]) + line.c
        return bool(np.any(vals < -get_eps() * self.poly.diameter))

    def tangency(self, circle, chord) -> Point2:
        c = np.array([circle.center.x, circle.center.y])
        e = self.ends - self.starts
        elen2 = np.einsum("ij,ij->i", e, e)
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(elen2 > 0, np.einsum("ij,ij->i", c - self.starts, e) / elen2, 0.0)
        closest = self.starts + e * np.clip(t, 0.0, 1.0)[:, None]
        dist = np.hypot(closest[:, 0] - c[0], closest[:, 1] - c[1])
        line = Line2.through(*chord)
        side = closest @ np.array([line.a, line.b]) + line.c
        tol = get_eps() * max(chord[0].dist(chord[1]), circle.radius)
        masked = np.where(side <= tol, dist, np.inf)
        k = int(np.argmin(masked)) if np.isfinite(masked).any() else int(np.argmin(dist))
        return Point2(float(closest[k, 0]), float(closest[k, 1]))


class ExteriorObstacle(Obstacle):
    """Complement of a convex polygon; the disk has to stay inside it"""

    def __init__(self, poly: ConvexPolygon):
        self.poly = poly
        self.lines = poly.edge_lines

    @property
    def n_edges(self) -> int:
        return len(self.poly)

    def _region_minima(self, circle, chord, rows: np.ndarray) -> np.ndarray:
        # minimum of each inward edge function over the circular segment
        lines = self.lines[rows]
        cx, cy, r = circle.center.x, circle.center.y, circle.radius
        mx = cx - r * lines[:, 0]
        my = cy - r * lines[:, 1]
        chord_line = Line2.through(*chord)
        on_arc_side = chord_line.a * mx + chord_line.b * my + chord_line.c <= get_eps() * r
        disk_min = lines[:, 0] * cx + lines[:, 1] * cy + lines[:, 2] - r
        return np.where(on_arc_side, disk_min, 0.0)

    def _tol(self, circle: Optional[Circle2]) -> float:
        return disk_tol(circle.radius if circle is not None else 0.0, self.poly.diameter)

    def edge_cuts(self, circle, chord, i) -> bool:
        if circle is None:
            return False
        return bool(self._region_minima(circle, chord, np.array([i]))[0] < -self._tol(circle))

    def cuts(self, circle, chord) -> bool:
        if circle is None:
            return False
        rows = np.arange(len(self.lines))
        return bool(np.any(self._region_minima(circle, chord, rows) < -self._tol(circle)))

    def disk_meets(self, circle: Circle2) -> bool:
        return self.poly.signed_clearance(circle.center) < circle.radius - self._tol(circle)

    def halfplane_meets(self, line: Line2) -> bool:
        return True

    def tangency(self, circle, chord) -> Point2:
        vals = self.lines[:, 0] * circle.center.x + self.lines[:, 1] * circle.center.y + self.lines[:, 2]
        k = int(np.argmin(vals))
        return circle.center - Point2(float(self.lines[k, 0]), float(self.lines[k, 1])).scale(circle.radius)


# ========== Directional scan ==========

def line_sagitta_floor() -> float:
    """
    Normalized sagitta below which the tangent arc is reported as a line

    Open-mode cuts shrink the circular segment by eps*chord on both the
    chord side and the arc side, so bisection cannot settle below a few
    eps. The floor sits above that.
    """
    return max(settings.LINE_RADIUS_RATIO, 16.0 * get_eps())


def _descend_step(forest: FSArcsForest, node: ArcNode, test: Callable[[ArcNode], bool]) -> Optional[ArcNode]:
    for ci in node.children:
        child = forest.nodes[ci]
        if test(child):
            return child
    return None


def directional_scan(forest: FSArcsForest, obstacle: Obstacle,
                     hull_meets_obstacle: Callable[[], bool],
                     inner: Optional[Polygon] = None,
                     outer: Optional[Polygon] = None) -> DirectionalResult:
    """
    Smallest circle enclosing the forest's sites whose open disk avoids the obstacle

    Steps: look for a root that cuts the obstacle; walk the obstacle's edges,
    descending to any child that cuts the current edge; then descend while a
    child still cuts the obstacle as a whole; finally bisect for the circle
    through the stopped arc's endpoints that touches the obstacle.
    """
    iterations = 0
    root = next((forest.nodes[r] for r in forest.roots if obstacle.cuts_node(forest.nodes[r])), None)
    if root is None:
        sec = forest.sec
        if obstacle.disk_meets(sec) and hull_meets_obstacle():
            return DirectionalResult(ScanOutcome.POLYGONS_INTERSECT, iterations=iterations)
        logger.debug(f"No root arc cuts the obstacle, smallest enclosing circle r={sec.radius:.6g}")
        return DirectionalResult(ScanOutcome.CIRCLE, GeneralizedCircle.finite(sec), iterations=iterations)

    node = root
    for i in range(obstacle.n_edges):
        iterations += 1
        if not obstacle.node_cuts_edge(node, i):
            continue
        while True:
            child = _descend_step(forest, node, lambda c: obstacle.node_cuts_edge(c, i))
            if child is None:
                break
            iterations += 1
            node = child
            if node.terminal:
                logger.debug(f"Terminal arc reached at edge {i}")
                return DirectionalResult(ScanOutcome.POLYGONS_INTERSECT, iterations=iterations)

    while True:
        child = _descend_step(forest, node, obstacle.cuts_node)
        if child is None:
            break
        iterations += 1
        node = child
        if node.terminal:
            return DirectionalResult(ScanOutcome.POLYGONS_INTERSECT, iterations=iterations)

    bound = obstacle.n_edges + 2 * len(forest.sites) + 2
    if iterations > bound:
        logger.warning(f"Scan used {iterations} iterations, more than {bound}")

    s_p, s_q = node.chord
    h = 0.5 * s_p.dist(s_q)
    beta_hi = sagitta_of(node.circle, s_p, s_q) / h
    first = forest.nodes[node.children[0]]
    beta_lo = 0.0 if first.terminal else max(0.0, sagitta_of(first.circle, s_p, s_q) / h)
    beta_lo = min(beta_lo, beta_hi)
    tol = settings.TANGENT_PARAM_TOL
    while beta_hi - beta_lo > tol:
        mid = 0.5 * (beta_lo + beta_hi)
        if obstacle.cuts(circle_from_sagitta(s_p, s_q, mid * h), (s_p, s_q)):
            beta_hi = mid
        else:
            beta_lo = mid
    logger.debug(f"Tangent arc on chord {s_p}->{s_q}: normalized sagitta {beta_lo:.3e}")

    if first.terminal and beta_lo < line_sagitta_floor():
        line = Line2.through(s_q, s_p)
        if obstacle.halfplane_meets(line):
            if hull_meets_obstacle():
                return DirectionalResult(ScanOutcome.POLYGONS_INTERSECT, iterations=iterations)
            circle = circle_from_sagitta(s_p, s_q, max(beta_lo, line_sagitta_floor()) * h)
            state = _state(inner, outer, circle, s_p, s_q, obstacle)
            return DirectionalResult(ScanOutcome.NOT_SEPARABLE, state=state, iterations=iterations)
        return DirectionalResult(ScanOutcome.CIRCLE,
                                 GeneralizedCircle.degenerate(line, edge=(s_p, s_q), interior_side=-1),
                                 iterations=iterations)

    circle = circle_from_sagitta(s_p, s_q, beta_lo * h)
    if obstacle.disk_meets(circle):
        if hull_meets_obstacle():
            return DirectionalResult(ScanOutcome.POLYGONS_INTERSECT, iterations=iterations)
        state = _state(inner, outer, circle, s_p, s_q, obstacle)
        return DirectionalResult(ScanOutcome.NOT_SEPARABLE, state=state, iterations=iterations)
    return DirectionalResult(ScanOutcome.CIRCLE, GeneralizedCircle.finite(circle), iterations=iterations)


def _state(inner, outer, circle, s_p, s_q, obstacle: Obstacle) -> Optional[ScanState]:
    if inner is None or outer is None:
        return None
    return ScanState(inner=inner, outer=outer, circle=circle, s_p=s_p, s_q=s_q,
                     tangency=obstacle.tangency(circle, (s_p, s_q)))


def smallest_circle_enclosing_P_excluding_Q(P: Polygon, Q: Polygon,
                                            forest: Optional[FSArcsForest] = None) -> DirectionalResult:
    """
    Smallest circle containing P whose open disk misses the interior of Q

    Args:
        P: simple polygon to enclose
        Q: closed polygonal cycle to avoid, simplicity not required
        forest: prebuilt arc forest of P's hull

    Returns:
        DirectionalResult tagged circle, polygons_intersect or not_separable
    """
    hull = convex_hull_simple_polygon(P)
    if forest is None:
        forest = fsarcs_of_polygon(P)
    result = directional_scan(forest, InteriorObstacle(Q), lambda: interiors_meet(hull, Q),
                              inner=P, outer=Q)
    logger.debug(f"Directional scan ({len(P)} in, {len(Q)} out): {result.outcome.value} "
                 f"after {result.iterations} iterations")
    return result


def _interior_normal(g: GeneralizedCircle) -> Tuple[float, float]:
    return (g.interior_side * g.line.a, g.interior_side * g.line.b)


def _smaller(a: GeneralizedCircle, b: GeneralizedCircle) -> bool:
    if not b.is_finite:
        if not a.is_finite:
            return _interior_normal(a) < _interior_normal(b)
        return True
    if not a.is_finite:
        return False
    tol = get_eps() * max(1.0, b.radius)
    if abs(a.radius - b.radius) <= tol:
        # equal radii: lexicographically smaller center, independent of argument order
        return a.circle.center.as_tuple() < b.circle.center.as_tuple()
    return a.radius < b.radius


def smallest_separating_circle(P: Polygon, Q: Polygon) -> SeparationResult:
    """
    Smallest circle separating two simple polygons, in either direction

    Returns the smaller successful circle (a line loses to any finite
    circle), a verified witness when neither direction succeeds, or
    polygons_intersect when the interiors overlap.
    """
    forward = smallest_circle_enclosing_P_excluding_Q(P, Q)
    backward = smallest_circle_enclosing_P_excluding_Q(Q, P)

    best: Optional[SeparationResult] = None
    for res, direction in ((forward, Direction.P_INSIDE), (backward, Direction.Q_INSIDE)):
        if res.outcome != ScanOutcome.CIRCLE:
            continue
        if best is None or _smaller(res.circle, best.circle):
            best = SeparationResult(SeparationKind.SEPARABLE, circle=res.circle, direction=direction)
    if best is not None:
        logger.info(f"Separable ({best.direction.value}), radius {best.circle.radius:.6g}")
        return best

    for res in (forward, backward):
        if res.outcome == ScanOutcome.NOT_SEPARABLE and res.state is not None:
            try:
                return SeparationResult(SeparationKind.NOT_SEPARABLE, witness=extract_witness(res.state, P, Q))
            except WitnessConstructionFailed:
                logger.warning("Perturbed witness failed, trying the other direction")

    if all(res.outcome == ScanOutcome.POLYGONS_INTERSECT for res in (forward, backward)):
        if interiors_meet(P, Q):
            logger.info("Polygon interiors intersect")
            return SeparationResult(SeparationKind.POLYGONS_INTERSECT)
        w = line_witness(P, Q)
        if w is not None:
            return SeparationResult(SeparationKind.NOT_SEPARABLE, witness=w)

    w = search_witness(P, Q)
    if w is not None:
        return SeparationResult(SeparationKind.NOT_SEPARABLE, witness=w)
    logger.error("Pair is not separable but no witness could be built")
    raise WitnessConstructionFailed("no witness for a non-separable pair")
