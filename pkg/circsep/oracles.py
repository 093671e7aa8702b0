"""
Brute-force references and seeded instance generators
Grid search with local refinement; used to cross-check the exact algorithms in tests
"""
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from pydantic import BaseModel, Field

from circsep.config import settings
from circsep.errors import Inconclusive
from circsep.geom_core import (Circle2, ConvexPolygon, GeneralizedCircle, Line2, Point2, Polygon,
                               interiors_meet)
from circsep.hull_fsvd import convex_hull_simple_polygon
from circsep.inscribed import InscribedResult, QueryCase
from circsep.separability import Direction, SeparationKind, SeparationResult
from circsep.witness import interior_mask, search_witness


class OracleConfig(BaseModel):
    """Grid parameters for the brute-force references"""
    resolution: int = Field(default_factory=lambda: settings.ORACLE_RESOLUTION, ge=16,
                            description="Initial cells per axis")
    rounds: int = Field(default_factory=lambda: settings.ORACLE_ROUNDS, ge=1,
                        description="Refinement rounds after the first grid")
    shrink: float = Field(default=5.0, gt=1.0, description="Window shrink factor per round")
    unbounded_ratio: float = Field(default=1e3, gt=1.0,
                                   description="Radius over diameter beyond which only a line separates")


def _grid(lo: np.ndarray, hi: np.ndarray, k: int) -> np.ndarray:
    xs = np.linspace(lo[0], hi[0], k + 1)
    ys = np.linspace(lo[1], hi[1], k + 1)
    gx, gy = np.meshgrid(xs, ys)
    return np.column_stack([gx.ravel(), gy.ravel()])


def _boundary_distance(xy: np.ndarray, poly: Polygon) -> np.ndarray:
    """Distance from each row of xy to the polygon's closed region"""
    a, b = poly.coords, poly.next_coords
    ab = b - a
    out = np.full(len(xy), np.inf)
    for i in range(len(a)):
        ap = xy - a[i]
        t = np.clip((ap @ ab[i]) / float(ab[i] @ ab[i]), 0.0, 1.0)
        d = np.hypot(ap[:, 0] - t * ab[i, 0], ap[:, 1] - t * ab[i, 1])
        np.minimum(out, d, out=out)
    out[interior_mask(xy, poly)] = 0.0
    return out


def _furthest(xy: np.ndarray, pts: np.ndarray) -> np.ndarray:
    d = np.hypot(xy[:, None, 0] - pts[None, :, 0], xy[:, None, 1] - pts[None, :, 1])
    return d.max(axis=1)


def _refine(score, feasible, lo: np.ndarray, hi: np.ndarray, cfg: OracleConfig,
            minimize: bool) -> Optional[Tuple[np.ndarray, float]]:
    """
    Best feasible grid point, refined by shrinking the window around it

    score and feasible map an (N, 2) array of centers to arrays.
    """
    best = None
    for _ in range(cfg.rounds + 1):
        xy = _grid(lo, hi, cfg.resolution)
        ok = feasible(xy)
        if np.any(ok):
            vals = score(xy)
            vals = np.where(ok, vals, np.inf if minimize else -np.inf)
            k = int(np.argmin(vals) if minimize else np.argmax(vals))
            cand = (xy[k], float(vals[k]))
            if best is None or (cand[1] < best[1] if minimize else cand[1] > best[1]):
                best = cand
        if best is None:
            return None
        half = (hi - lo) / (2.0 * cfg.shrink)
        lo, hi = best[0] - half, best[0] + half
    return best


def _separating_line(P: Polygon, Q: Polygon, tol: float) -> Optional[Line2]:
    """Line with P on its closed negative side and Q on its closed positive side"""
    hp, hq = convex_hull_simple_polygon(P), convex_hull_simple_polygon(Q)
    for hull in (hp, hq):
        for i in range(len(hull)):
            row = hull.edge_lines[i]
            n = np.array([row[0], row[1]])
            top = float((P.coords @ n).max())
            bottom = float((Q.coords @ n).min())
            if top <= bottom + tol:
                return Line2(float(n[0]), float(n[1]), -0.5 * (top + bottom))
            top = float((Q.coords @ n).max())
            bottom = float((P.coords @ n).min())
            if top <= bottom + tol:
                return Line2(float(n[0]), float(n[1]), -0.5 * (top + bottom)).flipped()
    return None


def oracle_smallest_separating(P: Polygon, Q: Polygon, config: Optional[OracleConfig] = None) -> SeparationResult:
    """
    Grid reference for the smallest separating circle

    Args:
        P, Q: polygons
        config: grid parameters

    Returns:
        SeparationResult with a circle, a line, a witness, or polygons_intersect

    Raises:
        Inconclusive: no feasible center, no separating line and no witness
    """
    cfg = config or OracleConfig()
    if interiors_meet(P, Q):
        return SeparationResult(kind=SeparationKind.POLYGONS_INTERSECT)
    both = np.vstack([P.coords, Q.coords])
    mid = 0.5 * (both.min(axis=0) + both.max(axis=0))
    span = both.max(axis=0) - both.min(axis=0)
    half = 1.5 * np.full(2, max(span.max(), 1e-9))
    diam = float(np.hypot(*span))

    best = None
    for inner, outer, direction in ((P, Q, Direction.P_INSIDE), (Q, P, Direction.Q_INSIDE)):
        pts = inner.coords

        def feasible(xy, pts=pts, outer=outer):
            return _furthest(xy, pts) <= _boundary_distance(xy, outer) + 1e-12 * diam

        found = _refine(lambda xy, pts=pts: _furthest(xy, pts), feasible, mid - half, mid + half, cfg, True)
        if found is not None and (best is None or found[1] < best[1]):
            best = (found[0], found[1], direction)

    if best is not None and best[1] < cfg.unbounded_ratio * diam:
        c = Point2(float(best[0][0]), float(best[0][1]))
        circle = GeneralizedCircle.finite(Circle2(c, best[1]))
        return SeparationResult(kind=SeparationKind.SEPARABLE, circle=circle, direction=best[2])

    line = _separating_line(P, Q, 1e-12 * diam)
    if line is not None:
        logger.debug("Grid found no finite separating circle, a line separates")
        return SeparationResult(kind=SeparationKind.SEPARABLE, circle=GeneralizedCircle.degenerate(line),
                                direction=Direction.P_INSIDE)
    witness = search_witness(P, Q)
    if witness is not None:
        return SeparationResult(kind=SeparationKind.NOT_SEPARABLE, witness=witness)
    raise Inconclusive("no feasible center, separating line or witness found")


def oracle_largest_inscribed(P: ConvexPolygon, points: Sequence[Point2] = (), lines: Sequence[Line2] = (),
                             config: Optional[OracleConfig] = None) -> InscribedResult:
    """
    Grid reference for the largest internal circle under constraints

    Maximizes min(clearance, signed distances to the lines) over centers
    whose circle of that radius holds every point.
    """
    cfg = config or OracleConfig()
    rows = P.edge_lines
    if lines:
        rows = np.vstack([rows, np.array([[l.a, l.b, l.c] for l in lines])])
    pts = np.array([p.as_tuple() for p in points]) if points else None

    def radius(xy):
        return (xy @ rows[:, :2].T + rows[:, 2]).min(axis=1)

    def feasible(xy):
        r = radius(xy)
        ok = r > 0.0
        if pts is not None:
            ok &= _furthest(xy, pts) <= r
        return ok

    lo, hi = P.coords.min(axis=0), P.coords.max(axis=0)
    found = _refine(radius, feasible, lo, hi, cfg, False)
    if found is None:
        return InscribedResult.infeasible()
    c = Point2(float(found[0][0]), float(found[0][1]))
    return InscribedResult.found(Circle2(c, found[1]), QueryCase.NONE)


# ========== Generators ==========

def gen_convex_polygon(seed: int, n: int) -> ConvexPolygon:
    """
    Seeded convex polygon with at least 3n/4 vertices

    Points on a random rotated ellipse; resampled until the hull is large enough.
    """
    if n < 3:
        raise ValueError("n must be at least 3")
    rng = np.random.default_rng(seed)
    while True:
        theta = np.sort(rng.uniform(0.0, 2.0 * math.pi, n))
        ax, ay = rng.uniform(0.5, 2.0, 2)
        rot = rng.uniform(0.0, math.pi)
        x, y = ax * np.cos(theta), ay * np.sin(theta)
        xy = np.column_stack([x * math.cos(rot) - y * math.sin(rot),
                              x * math.sin(rot) + y * math.cos(rot)]) + rng.uniform(-1.0, 1.0, 2)
        try:
            poly = ConvexPolygon.from_coords(xy.tolist())
        except ValueError:
            continue
        if len(poly) >= 0.75 * n:
            return poly


def gen_simple_polygon(seed: int, n: int, center: Tuple[float, float] = (0.0, 0.0),
                       scale: float = 1.0) -> Polygon:
    """Seeded star-shaped polygon, vertices sorted by angle around the center"""
    if n < 3:
        raise ValueError("n must be at least 3")
    rng = np.random.default_rng(seed)
    theta = np.sort(rng.uniform(0.0, 2.0 * math.pi, n))
    r = scale * rng.uniform(0.3, 1.0, n)
    xy = np.column_stack([center[0] + r * np.cos(theta), center[1] + r * np.sin(theta)])
    return Polygon.from_coords(xy.tolist())


def gen_polygon_pair(seed: int, n: int, m: int) -> Tuple[Polygon, Polygon]:
    """Two star-shaped polygons at a random offset; some pairs separate, some interlock"""
    rng = np.random.default_rng(seed)
    angle = rng.uniform(0.0, 2.0 * math.pi)
    dist = rng.uniform(0.8, 3.0)
    P = gen_simple_polygon(int(rng.integers(1 << 31)), n)
    Q = gen_simple_polygon(int(rng.integers(1 << 31)), m,
                           center=(dist * math.cos(angle), dist * math.sin(angle)),
                           scale=float(rng.uniform(0.3, 1.2)))
    return P, Q


def gen_points_in(rng: np.random.Generator, poly: ConvexPolygon, k: int) -> List[Point2]:
    """k points drawn uniformly from the polygon's bounding box, kept when inside"""
    lo, hi = poly.coords.min(axis=0), poly.coords.max(axis=0)
    out: List[Point2] = []
    while len(out) < k:
        xy = rng.uniform(lo, hi, (4 * k, 2))
        inside = (xy @ poly.edge_lines[:, :2].T + poly.edge_lines[:, 2]).min(axis=1) > 0.0
        out.extend(Point2(float(x), float(y)) for x, y in xy[inside][:k - len(out)])
    return out
