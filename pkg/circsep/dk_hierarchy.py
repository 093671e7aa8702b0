"""
Hierarchical representation of the body under the lifted surface
Answers line and parabola max-height queries by refining level by level
"""
import math
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np
from loguru import logger

from circsep.config import settings
from circsep.errors import DegenerateInput, InvalidPolygon
from circsep.geom_core import ConvexPolygon, Line2, Point2
from circsep.skeleton import SkeletonTree, build_skeleton

BASE = -1


@dataclass(frozen=True)
class Point3:
    x: float
    y: float
    z: float

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.x, self.y, self.z)


@dataclass
class Refinement:
    """
    Data for refining level j into level j + 1

    `added` are the faces of level j + 1 missing from level j; `adjacent`
    maps every face kept from level j to the added faces it touches in
    level j + 1; the angular table locates base points against the finer
    polygon.
    """
    added: Set[int]
    adjacent: Dict[int, List[int]]
    angles: List[float]
    sector_edges: List[int]


@dataclass
class DKHierarchy:
    """
    Nested bodies D_0 ⊇ D_1 ⊇ ... ⊇ D_k

    Level j is {0 <= z <= L_i(x, y) for i in faces[j]}; the last level uses
    every polygon edge. Faces are global edge indices; the base z = 0 is part
    of every level.
    """
    polygon: ConvexPolygon
    faces: List[List[int]]
    refinements: List[Refinement]
    center: Point2
    planes: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        if self.planes is None:
            self.planes = self.polygon.edge_lines

    @property
    def level_count(self) -> int:
        return len(self.faces)


def _polygon_of_lines(lines: np.ndarray, subset: Sequence[int]) -> List[Point2]:
    pts = []
    k = len(subset)
    for j in range(k):
        a1, b1, c1 = lines[subset[j - 1]]
        a2, b2, c2 = lines[subset[j]]
        det = a1 * b2 - a2 * b1
        if det == 0.0:
            raise DegenerateInput("consecutive hierarchy faces are parallel")
        x = (b1 * c2 - b2 * c1) / det
        y = (a2 * c1 - a1 * c2) / det
        pts.append(Point2(float(x), float(y)))
    return pts


def _removable(lines: np.ndarray, u: int, w: int) -> bool:
    """Dropping the face between u and w keeps the polygon bounded"""
    du = (-lines[u, 1], lines[u, 0])
    dw = (-lines[w, 1], lines[w, 0])
    return du[0] * dw[1] - du[1] * dw[0] > 1e-12


def _face_adjacency(tree: SkeletonTree, subset: Sequence[int]) -> Dict[int, Set[int]]:
    adj: Dict[int, Set[int]] = {g: set() for g in subset}
    for c, p in tree.edges():
        common = tree.vertices[c].tangents & tree.vertices[p].tangents
        for e in common:
            adj[subset[e]].update(subset[f] for f in common if f != e)
    return adj


def _angular_table(center: Point2, corners: List[Point2], subset: Sequence[int]):
    # corner j sits between faces subset[j-1] and subset[j]; sector j belongs to subset[j]
    entries = sorted((math.atan2(p.y - center.y, p.x - center.x), subset[j]) for j, p in enumerate(corners))
    return [a for a, _ in entries], [e for _, e in entries]


def build_hierarchy(polygon: ConvexPolygon, center: Optional[Point2] = None) -> DKHierarchy:
    """
    Face-removal hierarchy of the body {0 <= z <= clearance(x, y)}

    Each round removes a greedy independent set of slanted faces whose
    degree in the current body is at most the configured limit and whose
    removal keeps the base polygon bounded.

    The coarsest level keeps at least three slanted faces plus the base, so
    it is a pyramid over a triangle or larger polygon rather than a
    tetrahedron in general: the square cannot drop any face and stays a
    single four-sided pyramid.
    """
    lines = polygon.edge_lines
    limit = settings.DK_DEGREE_LIMIT
    if center is None:
        center = build_skeleton(polygon).incircle.center
    current = list(range(len(polygon)))
    chain: List[List[int]] = [current]
    steps: List[Refinement] = []

    while len(current) > 3:
        corners = _polygon_of_lines(lines, current)
        try:
            level_poly = ConvexPolygon(tuple(corners))
        except InvalidPolygon:
            level_poly = None
        if level_poly is None or len(level_poly) != len(current):
            logger.warning(f"Level with {len(current)} faces is degenerate, stopping")
            break
        tree = build_skeleton(level_poly)
        adj = _face_adjacency(tree, current)
        k = len(current)
        marked: Set[int] = set()
        chosen: Set[int] = set()
        for j, g in enumerate(current):
            if g in marked or len(adj[g]) > limit:
                continue
            if not _removable(lines, current[j - 1], current[(j + 1) % k]):
                continue
            chosen.add(g)
            marked.add(g)
            marked.update(adj[g])
        if k - len(chosen) < 3:
            chosen = set(sorted(chosen)[:k - 3])
        if not chosen:
            break
        angles, sector_edges = _angular_table(center, corners, current)
        adjacent = {f: sorted(adj[f] & chosen) for f in current if f not in chosen}
        steps.append(Refinement(added=chosen, adjacent=adjacent, angles=angles, sector_edges=sector_edges))
        current = [g for g in current if g not in chosen]
        chain.append(current)

    chain.reverse()
    steps.reverse()
    h = DKHierarchy(polygon=polygon, faces=chain, refinements=steps, center=center)
    logger.info(f"Hierarchy of {len(polygon)} faces: {h.level_count} levels, coarsest has {len(chain[0])} faces")
    return h


# ========== Curves ==========

class _Curve:
    """One-parameter curve s -> (x, y, z); face constraints are convex in s"""

    def point(self, s: float) -> Point3:
        raise NotImplementedError

    def face(self, row: np.ndarray) -> Tuple[float, float, float]:
        """(qa, qb, qc) with qa s^2 + qb s + qc <= 0 meaning below the face"""
        raise NotImplementedError

    def base(self) -> Optional[Tuple[float, float, float]]:
        raise NotImplementedError


class _Line3(_Curve):
    def __init__(self, origin: np.ndarray, direction: np.ndarray):
        self.o = np.asarray(origin, dtype=float)
        self.d = np.asarray(direction, dtype=float)

    def point(self, s: float) -> Point3:
        p = self.o + s * self.d
        return Point3(float(p[0]), float(p[1]), float(p[2]))

    def face(self, row):
        a, b, c = row
        return 0.0, self.d[2] - (a * self.d[0] + b * self.d[1]), self.o[2] - (a * self.o[0] + b * self.o[1] + c)

    def base(self):
        return 0.0, -self.d[2], -self.o[2]


class _Parabola(_Curve):
    """Lifted circles through x and tangent to l, parameterized along l"""

    def __init__(self, line: Line2, x: Point2):
        self.line = line
        self.h = line.signed_distance(x)
        self.o = line.foot(x)
        self.d = line.direction
        self.n = line.normal

    def radius(self, u: float) -> float:
        return (u * u + self.h * self.h) / (2.0 * self.h)

    def point(self, u: float) -> Point3:
        r = self.radius(u)
        return Point3(self.o.x + u * self.d.x + r * self.n.x, self.o.y + u * self.d.y + r * self.n.y, r)

    def face(self, row):
        a, b, c = row
        A = a * self.o.x + b * self.o.y + c
        B = a * self.d.x + b * self.d.y
        C = a * self.n.x + b * self.n.y
        k = 1.0 - C
        return k / (2.0 * self.h), -B, k * self.h / 2.0 - A

    def base(self):
        return None


def _feasible(qa: float, qb: float, qc: float) -> Optional[Tuple[float, float]]:
    scale = max(abs(qa), abs(qb), abs(qc), 1e-300)
    if abs(qa) <= 1e-14 * scale:
        if abs(qb) <= 1e-14 * scale:
            return (-math.inf, math.inf) if qc <= 1e-12 * scale else None
        root = -qc / qb
        return (-math.inf, root) if qb > 0 else (root, math.inf)
    disc = qb * qb - 4.0 * qa * qc
    if disc < -1e-12:
        return None
    root = math.sqrt(max(disc, 0.0))
    return ((-qb - root) / (2.0 * qa), (-qb + root) / (2.0 * qa))


class _Interval:
    def __init__(self):
        self.lo, self.hi = -math.inf, math.inf
        self.lo_face, self.hi_face = None, None

    def clip(self, curve: _Curve, face: int, coeffs) -> None:
        if coeffs is None:
            return
        feas = _feasible(*coeffs)
        if feas is None:
            self.lo, self.hi = math.inf, -math.inf
            return
        if feas[0] > self.lo:
            self.lo, self.lo_face = feas[0], face
        if feas[1] < self.hi:
            self.hi, self.hi_face = feas[1], face

    @property
    def empty(self) -> bool:
        return self.lo > self.hi + 1e-12 * max(1.0, abs(self.lo), abs(self.hi))


def _best(curve: _Curve, iv: _Interval) -> Optional[Point3]:
    if iv.empty or not (math.isfinite(iv.lo) and math.isfinite(iv.hi)):
        return None
    hi = max(iv.hi, iv.lo)
    a, b = curve.point(iv.lo), curve.point(hi)
    if abs(a.z - b.z) <= 1e-12 * max(1.0, abs(a.z)):
        return min(a, b, key=lambda p: (p.x, p.y, p.z))
    return a if a.z > b.z else b


def _max_z(h: DKHierarchy, curve: _Curve) -> Optional[Point3]:
    planes = h.planes
    iv = _Interval()
    iv.clip(curve, BASE, curve.base())
    for f in h.faces[0]:
        iv.clip(curve, f, curve.face(planes[f]))
    if iv.empty:
        return None
    for step in h.refinements:
        candidates: List[int] = []
        for s, face in ((iv.lo, iv.lo_face), (iv.hi, iv.hi_face)):
            if face == BASE:
                p = curve.point(s)
                theta = math.atan2(p.y - h.center.y, p.x - h.center.x)
                g = step.sector_edges[bisect_right(step.angles, theta) - 1]
                if g in step.added:
                    candidates.append(g)
            elif face is not None:
                candidates.extend(step.adjacent.get(face, ()))
        for g in dict.fromkeys(candidates):
            iv.clip(curve, g, curve.face(planes[g]))
        if iv.empty:
            return None
    return _best(curve, iv)


def _max_z_brute(h: DKHierarchy, curve: _Curve) -> Optional[Point3]:
    iv = _Interval()
    iv.clip(curve, BASE, curve.base())
    for f in range(len(h.planes)):
        iv.clip(curve, f, curve.face(h.planes[f]))
    return _best(curve, iv)


def wedge_line(l1: Line2, l2: Line2) -> Optional[Tuple[np.ndarray, np.ndarray]]:
    """3D line where the 45-degree planes over l1 and l2 meet, None if they are parallel"""
    n1 = np.array([l1.a, l1.b, -1.0])
    n2 = np.array([l2.a, l2.b, -1.0])
    direction = np.cross(n1, n2)
    if np.linalg.norm(direction) <= 1e-12:
        return None
    point, *_ = np.linalg.lstsq(np.vstack([n1, n2]), np.array([-l1.c, -l2.c]), rcond=None)
    return point, direction


def max_z_on_line(h: DKHierarchy, origin: Sequence[float], direction: Sequence[float]) -> Optional[Point3]:
    """Highest point of the body on the 3D line origin + s * direction, None if they miss"""
    return _max_z(h, _Line3(np.asarray(origin, float), np.asarray(direction, float)))


def max_z_on_parabola(h: DKHierarchy, line: Line2, x: Point2) -> Optional[Point3]:
    """
    Highest lifted circle in the body that passes through x and touches line

    A point on the line reduces to the vertical family of circles through x.
    """
    if line.signed_distance(x) <= 0.0:
        return max_z_on_line(h, (x.x, x.y, 0.0), (line.a, line.b, 1.0))
    return _max_z(h, _Parabola(line, x))


def brute_max_z_on_line(h: DKHierarchy, origin, direction) -> Optional[Point3]:
    return _max_z_brute(h, _Line3(np.asarray(origin, float), np.asarray(direction, float)))


def brute_max_z_on_parabola(h: DKHierarchy, line: Line2, x: Point2) -> Optional[Point3]:
    if line.signed_distance(x) <= 0.0:
        return brute_max_z_on_line(h, (x.x, x.y, 0.0), (line.a, line.b, 1.0))
    return _max_z_brute(h, _Parabola(line, x))
