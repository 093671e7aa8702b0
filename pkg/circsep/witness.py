"""
Non-separability witnesses
A circle carrying four points alternately interior to the two polygons
"""
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from circsep.config import settings
from circsep.errors import CollinearInput, DegenerateInput, WitnessConstructionFailed
from circsep.geom_core import (
    Circle2,
    Location,
    Point2,
    Polygon,
    circumcircle,
    point_in_polygon,
)

WITNESS_LABELS = ("Q", "P", "Q", "P")
_SAMPLES = 720
_DELTAS = (1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9)


@dataclass(frozen=True)
class Witness:
    """Circle and four CCW points labeled Q, P, Q, P"""
    circle: Circle2
    points: Tuple[Point2, Point2, Point2, Point2]
    labels: Tuple[str, str, str, str] = WITNESS_LABELS


@dataclass
class ScanState:
    """
    Where a directional scan stopped without a valid circle

    `circle` passes through the inner-hull sites `s_p` and `s_q` and is
    tangent to the outer polygon at `tangency`; its disk still meets the
    outer polygon's interior on the far side of the chord.
    """
    inner: Polygon
    outer: Polygon
    circle: Circle2
    s_p: Point2
    s_q: Point2
    tangency: Point2


def verify_witness(w: Witness, P: Polygon, Q: Polygon) -> bool:
    """Points on the circle, labels alternating, CCW order, strict interior membership"""
    if tuple(w.labels) != WITNESS_LABELS or len(w.points) != 4:
        return False
    c, r = w.circle.center, w.circle.radius
    if any(abs(c.dist(p) - r) > 1e-9 * r for p in w.points):
        return False
    base = w.circle.angle_of(w.points[0])
    rel = [(w.circle.angle_of(p) - base) % (2.0 * math.pi) for p in w.points[1:]]
    if not (0.0 < rel[0] < rel[1] < rel[2] < 2.0 * math.pi):
        return False
    polys = {"P": P, "Q": Q}
    return all(point_in_polygon(p, polys[lab]) == Location.INTERIOR
               for p, lab in zip(w.points, w.labels))


def interior_mask(xy: np.ndarray, poly: Polygon) -> np.ndarray:
    """Vectorized strict-interior test for many points (even-odd rule)"""
    x0, y0 = poly.coords[:, 0], poly.coords[:, 1]
    x1, y1 = poly.next_coords[:, 0], poly.next_coords[:, 1]
    ex, ey = x1 - x0, y1 - y0
    elen2 = ex * ex + ey * ey
    tol = settings.BOUNDARY_TOL * poly.diameter
    out = np.zeros(len(xy), dtype=bool)
    chunk = max(1, 2_000_000 // max(len(x0), 1))
    for lo in range(0, len(xy), chunk):
        px = xy[lo:lo + chunk, 0:1]
        py = xy[lo:lo + chunk, 1:2]
        straddle = (y0 > py) != (y1 > py)
        with np.errstate(divide="ignore", invalid="ignore"):
            xc = x0 + (py - y0) * ex / (y1 - y0)
            t = np.where(elen2 > 0, ((px - x0) * ex + (py - y0) * ey) / elen2, 0.0)
        inside = np.count_nonzero(straddle & (px < xc), axis=1) % 2 == 1
        t = np.clip(t, 0.0, 1.0)
        dist = np.hypot(x0 + t * ex - px, y0 + t * ey - py).min(axis=1)
        out[lo:lo + chunk] = inside & (dist > tol)
    return out


def _runs(labels: Sequence[Optional[str]], cyclic: bool) -> List[Tuple[str, List[int]]]:
    runs: List[Tuple[str, List[int]]] = []
    for i, lab in enumerate(labels):
        if lab is None:
            continue
        if runs and runs[-1][0] == lab:
            runs[-1][1].append(i)
        else:
            runs.append((lab, [i]))
    if cyclic and len(runs) > 1 and runs[0][0] == runs[-1][0]:
        last = runs.pop()
        runs[0] = (last[0], last[1] + runs[0][1])
    return runs


def _label(xy: np.ndarray, P: Polygon, Q: Polygon) -> List[Optional[str]]:
    in_p = interior_mask(xy, P)
    in_q = interior_mask(xy, Q)
    return ["P" if a and not b else "Q" if b and not a else None for a, b in zip(in_p, in_q)]


def alternating_on_circle(circle: Circle2, P: Polygon, Q: Polygon,
                          extra_angles: Sequence[float] = ()) -> Optional[Witness]:
    """
    Sample the circle and look for four alternating interior runs

    Returns a verified witness or None.
    """
    two_pi = 2.0 * math.pi
    angles = np.unique(np.concatenate([
        np.linspace(0.0, two_pi, _SAMPLES, endpoint=False),
        np.mod(np.asarray(extra_angles, dtype=float), two_pi),
    ]))
    c, r = circle.center, circle.radius
    xy = np.column_stack([c.x + r * np.cos(angles), c.y + r * np.sin(angles)])
    runs = _runs(_label(xy, P, Q), cyclic=True)
    if len(runs) < 4:
        return None
    start = next(i for i, run in enumerate(runs) if run[0] == "Q")
    picked = [runs[(start + k) % len(runs)] for k in range(4)]
    points = tuple(circle.point_at(float(angles[idx[len(idx) // 2]])) for _, idx in picked)
    w = Witness(circle=circle, points=points)
    return w if verify_witness(w, P, Q) else None


def _inward_at_vertex(poly: Polygon, i: int) -> Point2:
    prev, cur, nxt = poly[i - 1], poly[i], poly[i + 1]
    n1 = (cur - prev).unit().perp()
    n2 = (nxt - cur).unit().perp()
    s = n1 + n2
    return s.unit() if s.norm() > 1e-12 else n2


def _inward_at_boundary_point(poly: Polygon, y: Point2) -> Point2:
    xy, nxt = poly.coords, poly.next_coords
    e = nxt - xy
    elen2 = np.einsum("ij,ij->i", e, e)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(elen2 > 0, ((y.x - xy[:, 0]) * e[:, 0] + (y.y - xy[:, 1]) * e[:, 1]) / elen2, 0.0)
    t = np.clip(t, 0.0, 1.0)
    d = np.hypot(xy[:, 0] + t * e[:, 0] - y.x, xy[:, 1] + t * e[:, 1] - y.y)
    k = int(np.argmin(d))
    if t[k] <= 1e-9:
        return _inward_at_vertex(poly, k)
    if t[k] >= 1.0 - 1e-9:
        return _inward_at_vertex(poly, k + 1)
    return (poly[k + 1] - poly[k]).unit().perp()


def extract_witness(state: ScanState, P: Polygon, Q: Polygon) -> Witness:
    """
    Perturb the stopped circle so that it swallows the tangency point and
    releases the two sites, then read the witness off its boundary

    Args:
        state: scan state of the failed direction
        P, Q: the pair the witness labels refer to

    Returns:
        A verified Witness

    Raises:
        WitnessConstructionFailed: if no perturbation down to 1e-9 validates
    """
    inner, outer = state.inner, state.outer
    index: Dict[Point2, int] = {p: i for i, p in enumerate(inner.vertices)}
    try:
        ip, iq = index[state.s_p], index[state.s_q]
    except KeyError:
        raise WitnessConstructionFailed("scan sites are not vertices of the inner polygon")
    dir_p = _inward_at_vertex(inner, ip)
    dir_q = _inward_at_vertex(inner, iq)
    dir_y = _inward_at_boundary_point(outer, state.tangency)
    r = state.circle.radius
    scale = min(r, state.s_p.dist(state.s_q))

    for rel in _DELTAS:
        delta = rel * scale
        y = state.tangency + dir_y.scale(delta)
        sp = state.s_p + dir_p.scale(delta)
        sq = state.s_q + dir_q.scale(delta)
        try:
            circle = circumcircle(y, sp, sq)
        except (CollinearInput, DegenerateInput):
            continue
        keys = [circle.angle_of(p) for p in (y, sp, sq)]
        step = delta / max(circle.radius, 1e-300) * 0.25
        extra = [k + j * step for k in keys for j in range(-8, 9)]
        w = alternating_on_circle(circle, P, Q, extra)
        if w is not None:
            logger.debug(f"Witness found with perturbation {rel:g}")
            return w
        logger.warning(f"Witness perturbation {rel:g} did not validate, shrinking")

    w = alternating_on_circle(state.circle, P, Q, [state.circle.angle_of(state.tangency)])
    if w is not None:
        return w
    logger.error("Witness construction failed for every perturbation")
    raise WitnessConstructionFailed("no perturbation produced an alternating circle")


def _line_hits(origin: np.ndarray, d: np.ndarray, poly: Polygon) -> np.ndarray:
    """Parameters where the line origin + t d crosses the edges of poly"""
    xy, nxt = poly.coords, poly.next_coords
    e = nxt - xy
    w = xy - origin
    denom = d[0] * e[:, 1] - d[1] * e[:, 0]
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (w[:, 0] * e[:, 1] - w[:, 1] * e[:, 0]) / denom
        u = (w[:, 0] * d[1] - w[:, 1] * d[0]) / denom
    ok = (denom != 0.0) & (u >= 0.0) & (u <= 1.0)
    return t[ok]


def line_witness(P: Polygon, Q: Polygon, offsets: int = 64) -> Optional[Witness]:
    """
    Witness for interlocked polygons whose hulls both meet the other's interior

    Searches for a line crossing the interiors in the order Q, P, Q, P, then
    bends the four crossing points onto a circle of huge radius.
    """
    coords = np.vstack([P.coords, Q.coords])
    lo, hi = coords.min(axis=0), coords.max(axis=0)
    span = float(np.hypot(*(hi - lo)))
    angles = set(np.round(np.linspace(0.0, math.pi, 36, endpoint=False), 12).tolist())
    for poly in (P, Q):
        e = poly.next_coords - poly.coords
        angles.update(np.round(np.mod(np.arctan2(e[:, 1], e[:, 0]), math.pi), 12).tolist()[:64])

    for theta in sorted(angles):
        d = np.array([math.cos(theta), math.sin(theta)])
        n = np.array([-d[1], d[0]])
        proj = coords @ n
        omin, omax = proj.min(), proj.max()
        for k in range(offsets):
            off = omin + (k + 0.5) / offsets * (omax - omin)
            origin = n * off
            ts = np.unique(np.concatenate([_line_hits(origin, d, P), _line_hits(origin, d, Q)]))
            if len(ts) < 4:
                continue
            mids = 0.5 * (ts[:-1] + ts[1:])
            keep = np.diff(ts) > 1e-12 * span
            mids = mids[keep]
            xy = origin + mids[:, None] * d
            runs = _runs(_label(xy, P, Q), cyclic=False)
            if len(runs) < 4:
                continue
            w = _bend_onto_circle(runs[:4], xy, origin, d, n, span, P, Q)
            if w is not None:
                logger.debug(f"Line witness at angle {theta:.6f}, offset {off:.6g}")
                return w
    return None


def _bend_onto_circle(runs, xy, origin, d, n, span, P, Q) -> Optional[Witness]:
    reps = [xy[idx[len(idx) // 2]] for _, idx in runs]
    labels = [lab for lab, _ in runs]
    mid = np.mean(reps, axis=0)
    for k in range(2, 9):
        big = 10.0 ** k * span
        center = mid + n * big
        pts = [center + (p - center) / np.hypot(*(p - center)) * big for p in reps]
        points = [Point2(float(p[0]), float(p[1])) for p in pts]
        if labels[0] == "P":
            points = points[1:] + points[:1]
        circle = Circle2(Point2(float(center[0]), float(center[1])), big)
        w = Witness(circle=circle, points=tuple(points))
        if verify_witness(w, P, Q):
            return w
    return None


def search_witness(P: Polygon, Q: Polygon, grid: int = 12) -> Optional[Witness]:
    """Brute-force witness search over a grid of circle centers and radii"""
    coords = np.vstack([P.coords, Q.coords])
    lo, hi = coords.min(axis=0), coords.max(axis=0)
    span = float(np.hypot(*(hi - lo)))
    xs = np.linspace(lo[0], hi[0], grid)
    ys = np.linspace(lo[1], hi[1], grid)
    radii = span * np.geomspace(0.02, 2.0, grid)
    for x in xs:
        for y in ys:
            for r in radii:
                w = alternating_on_circle(Circle2(Point2(float(x), float(y)), float(r)), P, Q)
                if w is not None:
                    return w
    return None
