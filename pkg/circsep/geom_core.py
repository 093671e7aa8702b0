"""
Planar primitives and predicates shared by every circsep module

Predicates (orientation, in-circle) are exact: a floating-point evaluation is
accepted when it clears a forward error bound and re-evaluated in rational
arithmetic otherwise. Constructions (circle centers, tangency points) use
plain doubles with the relative tolerance from settings.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from circsep.config import get_eps, settings
from circsep.errors import CollinearInput, DegenerateInput, InvalidPolygon

# Forward error bounds for the float filters (unit roundoff 2^-53)
_EPSILON = 2.0 ** -53
_CCW_ERRBOUND = (3.0 + 16.0 * _EPSILON) * _EPSILON
_ICC_ERRBOUND = (10.0 + 96.0 * _EPSILON) * _EPSILON


# ========== Points, lines, circles ==========

@dataclass(frozen=True)
class Point2:
    """Point of the plane"""
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise DegenerateInput(f"non-finite coordinate ({self.x}, {self.y})")

    def __add__(self, other: "Point2") -> "Point2":
        return Point2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Point2") -> "Point2":
        return Point2(self.x - other.x, self.y - other.y)

    def scale(self, k: float) -> "Point2":
        return Point2(self.x * k, self.y * k)

    def dot(self, other: "Point2") -> float:
        return self.x * other.x + self.y * other.y

    def cross(self, other: "Point2") -> float:
        return self.x * other.y - self.y * other.x

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def dist(self, other: "Point2") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def unit(self) -> "Point2":
        n = self.norm()
        if n == 0.0:
            raise DegenerateInput("zero vector has no direction")
        return Point2(self.x / n, self.y / n)

    def perp(self) -> "Point2":
        """Counterclockwise quarter turn"""
        return Point2(-self.y, self.x)

    def as_tuple(self) -> Tuple[float, float]:
        return (self.x, self.y)


def midpoint(a: Point2, b: Point2) -> Point2:
    return Point2(0.5 * (a.x + b.x), 0.5 * (a.y + b.y))


@dataclass(frozen=True)
class Line2:
    """
    Line a*x + b*y + c = 0, normalized so that a^2 + b^2 = 1

    The closed positive halfplane H+ is {p : a*x + b*y + c >= 0}.
    """
    a: float
    b: float
    c: float

    def __post_init__(self):
        norm = math.hypot(self.a, self.b)
        if norm == 0.0 or not math.isfinite(norm) or not math.isfinite(self.c):
            raise DegenerateInput(f"line ({self.a}, {self.b}, {self.c}) has no normal")
        if abs(norm - 1.0) > 1e-15:
            object.__setattr__(self, "a", self.a / norm)
            object.__setattr__(self, "b", self.b / norm)
            object.__setattr__(self, "c", self.c / norm)

    @classmethod
    def through(cls, p: Point2, q: Point2) -> "Line2":
        """Line through p and q; H+ is the side to the left of p->q"""
        a = -(q.y - p.y)
        b = q.x - p.x
        return cls(a, b, -(a * p.x + b * p.y))

    @property
    def normal(self) -> Point2:
        return Point2(self.a, self.b)

    @property
    def direction(self) -> Point2:
        return Point2(-self.b, self.a)

    def signed_distance(self, p: Point2) -> float:
        return self.a * p.x + self.b * p.y + self.c

    def foot(self, p: Point2) -> Point2:
        d = self.signed_distance(p)
        return Point2(p.x - d * self.a, p.y - d * self.b)

    def flipped(self) -> "Line2":
        return Line2(-self.a, -self.b, -self.c)


@dataclass(frozen=True)
class Circle2:
    """Circle of finite radius"""
    center: Point2
    radius: float

    def __post_init__(self):
        if not (self.radius >= 0.0 and math.isfinite(self.radius)):
            raise DegenerateInput(f"invalid radius {self.radius}")

    def contains(self, p: Point2, tol: Optional[float] = None) -> bool:
        """Closed-disk membership with relative slack"""
        if tol is None:
            tol = get_eps() * max(self.radius, 1.0)
        return self.center.dist(p) <= self.radius + tol

    def point_at(self, angle: float) -> Point2:
        return Point2(self.center.x + self.radius * math.cos(angle),
                      self.center.y + self.radius * math.sin(angle))

    def angle_of(self, p: Point2) -> float:
        return math.atan2(p.y - self.center.y, p.x - self.center.x)


class CircleKind(str, Enum):
    """Variants of a generalized circle"""
    FINITE = "finite"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class GeneralizedCircle:
    """
    A finite circle, or a line standing for a circle of infinite radius

    For the degenerate variant `interior_side` names the open halfplane of
    `line` (+1 or -1) that plays the role of the disk interior, and `edge` is
    the hull edge the line was generated from.
    """
    kind: CircleKind
    circle: Optional[Circle2] = None
    line: Optional[Line2] = None
    interior_side: int = -1
    edge: Optional[Tuple[Point2, Point2]] = None

    @classmethod
    def finite(cls, circle: Circle2) -> "GeneralizedCircle":
        return cls(kind=CircleKind.FINITE, circle=circle)

    @classmethod
    def degenerate(cls, line: Line2, edge: Optional[Tuple[Point2, Point2]] = None,
                   interior_side: int = -1) -> "GeneralizedCircle":
        return cls(kind=CircleKind.DEGENERATE, line=line, edge=edge, interior_side=interior_side)

    @property
    def is_finite(self) -> bool:
        return self.kind == CircleKind.FINITE

    @property
    def radius(self) -> float:
        return self.circle.radius if self.is_finite else math.inf


@dataclass(frozen=True)
class Arc2:
    """
    Counterclockwise arc of `circle` from `start` to `end`, at most a half circle

    The arc bulges to the right of the chord start->end; its convex hull (the
    circular segment) is the closed disk intersected with that side.
    """
    circle: Circle2
    start: Point2
    end: Point2

    def __post_init__(self):
        r = self.circle.radius
        tol = get_eps() * max(r, self.chord_length) + 1e-15
        for p in (self.start, self.end):
            if abs(self.circle.center.dist(p) - r) > tol:
                raise DegenerateInput(f"arc endpoint {p} is not on the circle")
        if self.offset < -tol:
            raise DegenerateInput("arc subtends more than a half circle")

    @property
    def chord_length(self) -> float:
        return self.start.dist(self.end)

    @property
    def offset(self) -> float:
        """Signed distance of the center to the left of start->end"""
        return Line2.through(self.start, self.end).signed_distance(self.circle.center) \
            if self.chord_length > 0.0 else 0.0

    @property
    def sagitta(self) -> float:
        return self.circle.radius - self.offset

    @property
    def apex(self) -> Point2:
        """Arc midpoint"""
        d = (self.end - self.start).unit()
        right = Point2(d.y, -d.x)
        return self.circle.center + right.scale(self.circle.radius)

    def interior_point(self) -> Point2:
        return midpoint(midpoint(self.start, self.end), self.apex)

    def subtended_angle(self) -> float:
        h = 0.5 * self.chord_length
        return 2.0 * math.asin(min(1.0, h / self.circle.radius)) if self.circle.radius > 0 else 0.0


class Location(str, Enum):
    """Point classification against a closed region"""
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    EXTERIOR = "exterior"


class SegMode(str, Enum):
    """Open: relative interiors must overlap. Closed: any contact counts."""
    OPEN = "open"
    CLOSED = "closed"


# ========== Exact predicates ==========

def _orient_exact(a: Point2, b: Point2, c: Point2) -> int:
    ax, ay = Fraction(a.x), Fraction(a.y)
    det = (Fraction(b.x) - ax) * (Fraction(c.y) - ay) - (Fraction(b.y) - ay) * (Fraction(c.x) - ax)
    return (det > 0) - (det < 0)


def orient(a: Point2, b: Point2, c: Point2) -> int:
    """
    Sign of twice the signed area of triangle abc

    +1 for a left turn, -1 for a right turn, 0 for collinear points.
    """
    left = (b.x - a.x) * (c.y - a.y)
    right = (b.y - a.y) * (c.x - a.x)
    det = left - right
    bound = _CCW_ERRBOUND * (abs(left) + abs(right))
    if det > bound:
        return 1
    if -det > bound:
        return -1
    return _orient_exact(a, b, c)


def _incircle_exact(a: Point2, b: Point2, c: Point2, d: Point2) -> int:
    dx, dy = Fraction(d.x), Fraction(d.y)
    rows = []
    for p in (a, b, c):
        px, py = Fraction(p.x) - dx, Fraction(p.y) - dy
        rows.append((px, py, px * px + py * py))
    (a0, a1, a2), (b0, b1, b2), (c0, c1, c2) = rows
    det = (a0 * (b1 * c2 - b2 * c1) - a1 * (b0 * c2 - b2 * c0) + a2 * (b0 * c1 - b1 * c0))
    return (det > 0) - (det < 0)


def incircle(a: Point2, b: Point2, c: Point2, d: Point2) -> int:
    """
    +1 if d is strictly inside the circle through counterclockwise a, b, c,
    -1 if strictly outside, 0 if cocircular
    """
    adx, ady = a.x - d.x, a.y - d.y
    bdx, bdy = b.x - d.x, b.y - d.y
    cdx, cdy = c.x - d.x, c.y - d.y
    alift = adx * adx + ady * ady
    blift = bdx * bdx + bdy * bdy
    clift = cdx * cdx + cdy * cdy
    bc = bdx * cdy - bdy * cdx
    ca = cdx * ady - cdy * adx
    ab = adx * bdy - ady * bdx
    det = alift * bc + blift * ca + clift * ab
    permanent = (alift * (abs(bdx * cdy) + abs(bdy * cdx))
                 + blift * (abs(cdx * ady) + abs(cdy * adx))
                 + clift * (abs(adx * bdy) + abs(ady * bdx)))
    bound = _ICC_ERRBOUND * permanent
    if det > bound:
        return 1
    if -det > bound:
        return -1
    return _incircle_exact(a, b, c, d)


# ========== Constructions ==========

def circumcircle(a: Point2, b: Point2, c: Point2) -> Circle2:
    """Unique circle through three non-collinear points"""
    if orient(a, b, c) == 0:
        raise CollinearInput(f"points {a}, {b}, {c} are collinear")
    bx, by = b.x - a.x, b.y - a.y
    cx, cy = c.x - a.x, c.y - a.y
    d = 2.0 * (bx * cy - by * cx)
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    ux = (cy * b2 - by * c2) / d
    uy = (bx * c2 - cx * b2) / d
    center = Point2(a.x + ux, a.y + uy)
    # Average the three distances so the result is symmetric in its inputs
    radius = (center.dist(a) + center.dist(b) + center.dist(c)) / 3.0
    return Circle2(center, radius)


def circle_from_sagitta(start: Point2, end: Point2, sagitta: float) -> Circle2:
    """Circle through start and end whose arc right of start->end has the given height"""
    h = 0.5 * start.dist(end)
    if sagitta <= 0.0 or h == 0.0:
        raise DegenerateInput("sagitta and chord must be positive")
    offset = (h * h - sagitta * sagitta) / (2.0 * sagitta)
    left = (end - start).unit().perp()
    return Circle2(midpoint(start, end) + left.scale(offset), offset + sagitta)


def sagitta_of(circle: Circle2, start: Point2, end: Point2) -> float:
    """Height of the arc of `circle` lying right of start->end"""
    offset = Line2.through(start, end).signed_distance(circle.center)
    return circle.radius - offset


# ========== Distances ==========

def distance_point_segment(p: Point2, seg: Tuple[Point2, Point2]) -> float:
    a, b = seg
    ab = b - a
    denom = ab.dot(ab)
    if denom == 0.0:
        return p.dist(a)
    t = min(1.0, max(0.0, (p - a).dot(ab) / denom))
    return p.dist(a + ab.scale(t))


def _segment_distances(p: Point2, starts: np.ndarray, ends: np.ndarray) -> np.ndarray:
    ab = ends - starts
    ap = np.array([p.x, p.y]) - starts
    denom = np.einsum("ij,ij->i", ab, ab)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(denom > 0.0, np.einsum("ij,ij->i", ap, ab) / denom, 0.0)
    t = np.clip(t, 0.0, 1.0)
    closest = starts + ab * t[:, None]
    return np.hypot(closest[:, 0] - p.x, closest[:, 1] - p.y)


def distance_point_polygon_boundary(p: Point2, poly: "Polygon") -> float:
    return float(_segment_distances(p, poly.coords, poly.next_coords).min())


# ========== Polygons ==========

@dataclass(frozen=True)
class Polygon:
    """
    Closed polygonal cycle, counterclockwise

    `validate_simple=False` is the relaxed constructor: the pairwise edge test
    and the orientation check are skipped, which admits non-simple cycles.
    """
    vertices: Tuple[Point2, ...]
    validate_simple: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        if len(self.vertices) < 3:
            raise InvalidPolygon(f"polygon needs at least 3 vertices, got {len(self.vertices)}")
        if self.validate_simple:
            if self.signed_area <= 0.0:
                raise InvalidPolygon("polygon is not counterclockwise")
            self._check_simple()

    @classmethod
    def from_coords(cls, coords: Sequence[Sequence[float]], validate_simple: bool = True):
        """Build from (x, y) pairs; clockwise input is reversed"""
        pts = [Point2(float(x), float(y)) for x, y in coords]
        if len(pts) >= 3 and _shoelace(pts) < 0.0:
            logger.debug("Reversing clockwise vertex chain")
            pts.reverse()
        return cls(tuple(pts), validate_simple=validate_simple)

    @classmethod
    def relaxed(cls, coords: Sequence[Sequence[float]]) -> "Polygon":
        return cls.from_coords(coords, validate_simple=False)

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self) -> Iterator[Point2]:
        return iter(self.vertices)

    def __getitem__(self, i: int) -> Point2:
        return self.vertices[i % len(self.vertices)]

    @cached_property
    def coords(self) -> np.ndarray:
        return np.array([[p.x, p.y] for p in self.vertices], dtype=float)

    @cached_property
    def next_coords(self) -> np.ndarray:
        return np.roll(self.coords, -1, axis=0)

    @cached_property
    def signed_area(self) -> float:
        return _shoelace(self.vertices)

    @cached_property
    def diameter(self) -> float:
        """Bounding-box diagonal"""
        lo = self.coords.min(axis=0)
        hi = self.coords.max(axis=0)
        return float(np.hypot(*(hi - lo)))

    def edges(self) -> List[Tuple[Point2, Point2]]:
        n = len(self.vertices)
        return [(self.vertices[i], self.vertices[(i + 1) % n]) for i in range(n)]

    def _check_simple(self) -> None:
        xy = self.coords
        nxt = self.next_coords
        n = len(xy)
        d = nxt - xy
        if np.any(np.hypot(d[:, 0], d[:, 1]) == 0.0):
            raise InvalidPolygon("polygon has a repeated vertex")
        # Adjacent edges must not fold back onto each other
        d_prev = np.roll(d, 1, axis=0)
        cross = d_prev[:, 0] * d[:, 1] - d_prev[:, 1] * d[:, 0]
        dot = np.einsum("ij,ij->i", d_prev, d)
        if np.any((cross == 0.0) & (dot < 0.0)):
            raise InvalidPolygon("polygon has a zero-angle spike")
        for i in range(n - 2):
            j = np.arange(i + 2, n if i > 0 else n - 1)
            if j.size == 0:
                continue
            if np.any(_closed_segments_intersect(xy[i], nxt[i], xy[j], nxt[j])):
                raise InvalidPolygon(f"edge {i} intersects a non-adjacent edge")


def _shoelace(pts: Sequence[Point2]) -> float:
    n = len(pts)
    return 0.5 * sum(pts[i].x * pts[(i + 1) % n].y - pts[(i + 1) % n].x * pts[i].y
                     for i in range(n))


def _closed_segments_intersect(a, b, c: np.ndarray, d: np.ndarray) -> np.ndarray:
    """Vectorized closed segment test of ab against each c[k]d[k]"""
    def cross(o, p, q):
        return (p[..., 0] - o[..., 0]) * (q[..., 1] - o[..., 1]) - \
               (p[..., 1] - o[..., 1]) * (q[..., 0] - o[..., 0])

    def on_seg(o, p, q):
        return ((np.minimum(o[..., 0], p[..., 0]) <= q[..., 0]) & (q[..., 0] <= np.maximum(o[..., 0], p[..., 0]))
                & (np.minimum(o[..., 1], p[..., 1]) <= q[..., 1]) & (q[..., 1] <= np.maximum(o[..., 1], p[..., 1])))

    a = np.broadcast_to(a, c.shape)
    b = np.broadcast_to(b, c.shape)
    o1, o2 = cross(a, b, c), cross(a, b, d)
    o3, o4 = cross(c, d, a), cross(c, d, b)
    proper = (np.sign(o1) * np.sign(o2) < 0) & (np.sign(o3) * np.sign(o4) < 0)
    touch = (((o1 == 0) & on_seg(a, b, c)) | ((o2 == 0) & on_seg(a, b, d))
             | ((o3 == 0) & on_seg(c, d, a)) | ((o4 == 0) & on_seg(c, d, b)))
    return proper | touch


@dataclass(frozen=True)
class ConvexPolygon(Polygon):
    """Strictly convex polygon; collinear and repeated vertices are dropped at construction"""

    def __post_init__(self):
        pts = list(self.vertices)
        changed = True
        while changed and len(pts) >= 3:
            changed = False
            kept = []
            n = len(pts)
            for i in range(n):
                prev, cur, nxt = pts[i - 1], pts[i], pts[(i + 1) % n]
                if cur == prev or orient(prev, cur, nxt) == 0:
                    changed = True
                    continue
                kept.append(cur)
            if changed:
                pts = kept
        if len(pts) < 3:
            raise InvalidPolygon("convex polygon degenerates to fewer than 3 vertices")
        n = len(pts)
        for i in range(n):
            if orient(pts[i - 1], pts[i], pts[(i + 1) % n]) <= 0:
                raise InvalidPolygon(f"vertex {i} is not a strict left turn")
        object.__setattr__(self, "vertices", tuple(pts))
        if _shoelace(pts) <= 0.0:
            raise InvalidPolygon("convex polygon winds more than once")

    @cached_property
    def edge_lines(self) -> np.ndarray:
        """Rows (a, b, c) of the inward-oriented unit edge lines"""
        xy, nxt = self.coords, self.next_coords
        a = -(nxt[:, 1] - xy[:, 1])
        b = nxt[:, 0] - xy[:, 0]
        norm = np.hypot(a, b)
        a, b = a / norm, b / norm
        return np.column_stack([a, b, -(a * xy[:, 0] + b * xy[:, 1])])

    def line(self, i: int) -> Line2:
        a, b, c = self.edge_lines[i % len(self.vertices)]
        return Line2(float(a), float(b), float(c))

    def signed_clearance(self, p: Point2) -> float:
        """Minimum signed distance to the edge lines (negative outside)"""
        lines = self.edge_lines
        return float((lines[:, 0] * p.x + lines[:, 1] * p.y + lines[:, 2]).min())

    def locate(self, p: Point2) -> Location:
        """O(log n) classification by binary search over the fan from vertex 0"""
        v = self.vertices
        n = len(v)
        tol = settings.BOUNDARY_TOL * self.diameter
        v0 = v[0]

        def dist_left(i: int, j: int) -> float:
            return Line2.through(v[i], v[j]).signed_distance(p)

        d_first = dist_left(0, 1)
        d_last = dist_left(n - 1, 0)
        if d_first < -tol or dist_left(0, n - 1) > tol:
            return Location.EXTERIOR
        lo, hi = 1, n - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if (v[mid] - v0).cross(p - v0) >= 0.0:
                lo = mid
            else:
                hi = mid
        d_edge = dist_left(lo, lo + 1)
        if d_edge < -tol:
            return Location.EXTERIOR
        if abs(d_edge) <= tol or (lo == 1 and abs(d_first) <= tol) \
                or (lo + 1 == n - 1 and abs(d_last) <= tol):
            return Location.BOUNDARY
        return Location.INTERIOR

    def extreme_vertex(self, direction: Point2) -> int:
        """Index of a vertex maximizing direction . v, in O(log n)"""
        v = self.vertices
        n = len(v)

        def val(i: int) -> float:
            return direction.dot(v[i % n])

        def up(i: int) -> bool:
            return val(i + 1) > val(i)

        a, b = 0, n
        up_a = up(0)
        if not up_a and not val(n - 1) > val(0):
            return 0
        found = None
        for _ in range(4 * n.bit_length() + 8):
            if b <= a + 1:
                break
            c = (a + b) // 2
            up_c = up(c)
            if not up_c and not val(c - 1) > val(c):
                found = c
                break
            if up_a:
                if not up_c or val(a) > val(c):
                    b = c
                else:
                    a, up_a = c, up_c
            else:
                if up_c:
                    a, up_a = c, up_c
                elif val(a) < val(c):
                    b = c
                else:
                    a, up_a = c, up_c
        if found is None or val(found - 1) > val(found) or val(found + 1) > val(found):
            coords = self.coords
            found = int(np.argmax(coords @ np.array([direction.x, direction.y])))
        return found % n


# ========== Classification and intersection ==========

def point_in_polygon(p: Point2, poly: Polygon) -> Location:
    """Crossing-number classification with a scaled boundary tolerance"""
    xy, nxt = poly.coords, poly.next_coords
    tol = settings.BOUNDARY_TOL * poly.diameter
    if _segment_distances(p, xy, nxt).min() <= tol:
        return Location.BOUNDARY
    y0, y1 = xy[:, 1], nxt[:, 1]
    straddles = (y0 > p.y) != (y1 > p.y)
    with np.errstate(divide="ignore", invalid="ignore"):
        x_cross = xy[:, 0] + (p.y - y0) * (nxt[:, 0] - xy[:, 0]) / (y1 - y0)
    crossings = int(np.count_nonzero(straddles & (p.x < x_cross)))
    return Location.INTERIOR if crossings % 2 == 1 else Location.EXTERIOR


def segment_region_interval(circle: Circle2, chord: Tuple[Point2, Point2],
                            seg: Tuple[Point2, Point2], mode: SegMode) -> Optional[Tuple[float, float]]:
    """
    Parameter interval of `seg` inside the circular segment cut from `circle`
    by `chord` (the side right of chord[0]->chord[1]), or None

    Open mode shrinks the region by the construction tolerance and requires an
    interval of positive length; closed mode grows it and accepts a point.
    """
    s, e = chord
    p, q = seg
    scale = max(s.dist(e), 1e-300)
    tau = get_eps() * scale
    if mode == SegMode.OPEN:
        tau = -tau
    # Halfplane: signed distance left of s->e must be <= tau
    left = Line2.through(s, e)
    h0 = left.signed_distance(p)
    h1 = left.signed_distance(q)
    lo, hi = 0.0, 1.0
    dh = h1 - h0
    if dh == 0.0:
        if h0 > tau:
            return None
    elif dh > 0.0:
        hi = min(hi, (tau - h0) / dh)
    else:
        lo = max(lo, (tau - h0) / dh)
    # Disk: |p + t d - c| <= r + tau
    radius = circle.radius + tau
    if radius <= 0.0:
        return None
    d = q - p
    w = p - circle.center
    qa = d.dot(d)
    qb = 2.0 * d.dot(w)
    qc = w.dot(w) - radius * radius
    if qa == 0.0:
        if qc > 0.0:
            return None
    else:
        disc = qb * qb - 4.0 * qa * qc
        if disc < 0.0:
            return None
        root = math.sqrt(disc)
        t1 = (-qb - root) / (2.0 * qa)
        t2 = (-qb + root) / (2.0 * qa)
        lo, hi = max(lo, t1), min(hi, t2)
    if mode == SegMode.OPEN:
        return (lo, hi) if hi - lo > 1e-12 else None
    return (lo, hi) if hi >= lo else None


def arc_hull_intersects_segment(arc: Arc2, seg: Tuple[Point2, Point2],
                                mode: SegMode = SegMode.OPEN) -> bool:
    """True iff the circular segment of `arc` meets `seg` (open: relative interiors)"""
    return segment_region_interval(arc.circle, (arc.start, arc.end), seg, mode) is not None


def segments_properly_cross(a: Point2, b: Point2, c: Point2, d: Point2) -> bool:
    return orient(a, b, c) * orient(a, b, d) < 0 and orient(c, d, a) * orient(c, d, b) < 0


def segment_meets_interior(a: Point2, b: Point2, poly: Polygon) -> bool:
    """True iff the open segment ab passes through the open interior of poly"""
    xy, nxt = poly.coords, poly.next_coords
    d = np.array([b.x - a.x, b.y - a.y])
    e = nxt - xy
    w = xy - np.array([a.x, a.y])
    denom = d[0] * e[:, 1] - d[1] * e[:, 0]
    params = [0.0, 1.0]
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (w[:, 0] * e[:, 1] - w[:, 1] * e[:, 0]) / denom
        u = (w[:, 0] * d[1] - w[:, 1] * d[0]) / denom
    ok = (denom != 0.0) & (t >= -1e-12) & (t <= 1 + 1e-12) & (u >= -1e-12) & (u <= 1 + 1e-12)
    params.extend(np.clip(t[ok], 0.0, 1.0).tolist())
    dd = float(d @ d)
    if dd > 0.0:
        # Collinear overlaps contribute their endpoints
        parallel = denom == 0.0
        for k in np.nonzero(parallel)[0]:
            for pt in (xy[k], nxt[k]):
                rel = pt - np.array([a.x, a.y])
                if abs(rel[0] * d[1] - rel[1] * d[0]) <= 1e-12 * dd:
                    params.append(min(1.0, max(0.0, float(rel @ d) / dd)))
    params = sorted(set(params))
    for t0, t1 in zip(params, params[1:]):
        if t1 - t0 <= 1e-12:
            continue
        tm = 0.5 * (t0 + t1)
        probe = Point2(a.x + tm * d[0], a.y + tm * d[1])
        if point_in_polygon(probe, poly) == Location.INTERIOR:
            return True
    return False


def polygon_interior_point(poly: Polygon) -> Point2:
    """A point strictly inside a simple polygon"""
    v = poly.vertices
    n = len(v)
    i = min(range(n), key=lambda k: (v[k].y, v[k].x))
    a, cur, b = v[i - 1], v[i], v[(i + 1) % n]
    candidates = [v[k] for k in range(n)
                  if k not in (i, (i - 1) % n, (i + 1) % n)
                  and orient(a, cur, v[k]) >= 0 and orient(cur, b, v[k]) >= 0 and orient(b, a, v[k]) >= 0]
    if not candidates:
        point = Point2((a.x + cur.x + b.x) / 3.0, (a.y + cur.y + b.y) / 3.0)
    else:
        chord = Line2.through(b, a)
        nearest = max(candidates, key=lambda q: chord.signed_distance(q))
        point = midpoint(cur, nearest)
    if point_in_polygon(point, poly) != Location.INTERIOR:
        raise DegenerateInput("could not find an interior point")
    return point


def interiors_meet(first: Polygon, second: Polygon) -> bool:
    """True iff the open interiors of two polygons intersect"""
    for a, b in first.edges():
        if segment_meets_interior(a, b, second):
            return True
    if point_in_polygon(polygon_interior_point(first), second) == Location.INTERIOR:
        return True
    return point_in_polygon(polygon_interior_point(second), first) == Location.INTERIOR
