"""
Convex hulls, smallest enclosing circles and the furthest-site Voronoi structure
Builds the forest of arcs that the separability scan walks down
"""
import random
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from circsep.config import get_eps
from circsep.errors import CollinearInput, DegenerateInput
from circsep.geom_core import (
    Arc2,
    Circle2,
    ConvexPolygon,
    Line2,
    Point2,
    Polygon,
    circumcircle,
    incircle,
    midpoint,
    orient,
)


# ========== Hulls ==========

def convex_hull_simple_polygon(poly: Polygon) -> ConvexPolygon:
    """
    Melkman hull of a simple polygon's vertex chain, linear time

    The chain is rotated to start at its lowest vertex (always a hull vertex)
    and a leading run of collinear vertices is collapsed before the deque walk.
    """
    verts = list(poly.vertices)
    n = len(verts)
    start = min(range(n), key=lambda k: (verts[k].y, verts[k].x))
    chain = verts[start:] + verts[:start]

    a, b = chain[0], chain[1]
    k = 2
    while k < n and orient(a, b, chain[k]) == 0:
        if a.dist(chain[k]) > a.dist(b):
            b = chain[k]
        k += 1
    if k == n:
        raise DegenerateInput("all polygon vertices are collinear")
    c = chain[k]
    if orient(a, b, c) > 0:
        hull = deque((c, a, b, c))
    else:
        hull = deque((c, b, a, c))
    for p in chain[k + 1:]:
        if orient(hull[-2], hull[-1], p) <= 0 or orient(p, hull[0], hull[1]) <= 0:
            while len(hull) >= 2 and orient(hull[-2], hull[-1], p) <= 0:
                hull.pop()
            hull.append(p)
            while len(hull) >= 2 and orient(p, hull[0], hull[1]) <= 0:
                hull.popleft()
            hull.appendleft(p)
    hull.popleft()
    result = ConvexPolygon(tuple(hull))
    logger.debug(f"Hull of {n}-gon has {len(result)} vertices")
    return result


def convex_hull_points(points: Sequence[Point2]) -> List[Point2]:
    """
    Monotone-chain hull of a point set, CCW, collinear points dropped

    Returns fewer than 3 points when the input is collinear or degenerate.
    """
    pts = sorted(set(points), key=lambda p: (p.x, p.y))
    if len(pts) <= 2:
        return pts

    def half(seq):
        out: List[Point2] = []
        for p in seq:
            while len(out) >= 2 and orient(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    return hull if len(hull) >= 3 else [pts[0], pts[-1]]


# ========== Smallest enclosing circle ==========

def _diameter_circle(a: Point2, b: Point2) -> Circle2:
    return Circle2(midpoint(a, b), 0.5 * a.dist(b))


def _inside(circle: Circle2, p: Point2) -> bool:
    return circle.center.dist(p) <= circle.radius * (1.0 + 1e-12) + 1e-300


def smallest_enclosing_circle(sites: Sequence[Point2], seed: int = 0) -> Tuple[Circle2, Tuple[Point2, ...]]:
    """
    Welzl-style randomized incremental minidisk

    Args:
        sites: at least one point
        seed: shuffle seed, results are deterministic per seed

    Returns:
        (circle, support) where support holds the 1-3 defining sites
    """
    pts = list(sites)
    if not pts:
        raise DegenerateInput("smallest enclosing circle of an empty set")
    random.Random(seed).shuffle(pts)
    circle, support = Circle2(pts[0], 0.0), (pts[0],)
    for i in range(1, len(pts)):
        p = pts[i]
        if _inside(circle, p):
            continue
        circle, support = Circle2(p, 0.0), (p,)
        for j in range(i):
            q = pts[j]
            if _inside(circle, q):
                continue
            circle, support = _diameter_circle(p, q), (p, q)
            for k in range(j):
                s = pts[k]
                if _inside(circle, s):
                    continue
                try:
                    circle, support = circumcircle(p, q, s), (p, q, s)
                except CollinearInput:
                    far = max(((p, q), (p, s), (q, s)), key=lambda e: e[0].dist(e[1]))
                    circle, support = _diameter_circle(*far), far
    return circle, support


# ========== Furthest-site Delaunay / Voronoi ==========

@dataclass
class FSFace:
    """A furthest-site Voronoi vertex: sites on one enclosing circle, CCW hull indices"""
    index: int
    sites: List[int]
    circle: Circle2

    def edges(self) -> List[Tuple[int, int]]:
        k = len(self.sites)
        return [(self.sites[i], self.sites[(i + 1) % k]) for i in range(k)]


@dataclass
class FSEdge:
    """Voronoi edge between the cells of two sites; outer is None for an unbounded edge"""
    sites: Tuple[int, int]
    inner: Circle2
    outer: Optional[Circle2]


@dataclass
class FSVDiagram:
    """
    Furthest-site Voronoi diagram of the vertices of a convex polygon

    Stored in its dual form: faces of the furthest-site Delaunay subdivision
    (merged over cocircular triangles) keyed by their directed CCW edges.
    """
    hull: ConvexPolygon
    faces: List[FSFace]
    edge_face: Dict[Tuple[int, int], int]

    @property
    def sites(self) -> List[Point2]:
        return list(self.hull.vertices)

    @property
    def vertices(self) -> List[Circle2]:
        return [f.circle for f in self.faces]

    @cached_property
    def edges(self) -> List[FSEdge]:
        out = []
        for (a, b), fi in self.edge_face.items():
            gi = self.edge_face.get((b, a))
            if gi is not None and gi < fi:
                continue
            c1 = self.faces[fi].circle
            c2 = self.faces[gi].circle if gi is not None else None
            if c2 is not None and c2.radius < c1.radius:
                c1, c2 = c2, c1
            out.append(FSEdge((a, b), c1, c2))
        return out

    @cached_property
    def cells(self) -> List[List[int]]:
        """Per site, the faces (diagram vertices) bounding its cell"""
        out: List[List[int]] = [[] for _ in range(len(self.hull))]
        for f in self.faces:
            for s in f.sites:
                out[s].append(f.index)
        return out

    def neighbor(self, a: int, b: int) -> Optional[int]:
        """Face across directed edge (a, b), i.e. the owner of (b, a)"""
        return self.edge_face.get((b, a))

    def is_hull_edge(self, a: int, b: int) -> bool:
        return (b, a) not in self.edge_face

    def verify(self) -> bool:
        """Every diagram circle encloses every site"""
        xy = self.hull.coords
        for f in self.faces:
            c = f.circle
            d = np.hypot(xy[:, 0] - c.center.x, xy[:, 1] - c.center.y)
            if np.any(d > c.radius * (1.0 + get_eps()) + 1e-300):
                logger.error(f"Diagram circle {f.index} misses a site")
                return False
        return True


def build_fsvd(hull: ConvexPolygon, seed: int = 0) -> FSVDiagram:
    """
    Randomized incremental furthest-site Delaunay triangulation of a convex polygon

    Vertices are peeled off the polygon in random order and re-inserted in
    reverse, each insertion followed by edge flips; expected linear flips.
    """
    pts = hull.vertices
    m = len(pts)
    order = list(range(m))
    random.Random(seed).shuffle(order)

    prev = [(i - 1) % m for i in range(m)]
    nxt = [(i + 1) % m for i in range(m)]
    removed: List[Tuple[int, int, int]] = []
    for v in order[:m - 3]:
        p, q = prev[v], nxt[v]
        removed.append((v, p, q))
        nxt[p], prev[q] = q, p

    opp: Dict[Tuple[int, int], int] = {}

    def add(a: int, b: int, c: int) -> None:
        opp[(a, b)], opp[(b, c)], opp[(c, a)] = c, a, b

    def drop(a: int, b: int, c: int) -> None:
        del opp[(a, b)], opp[(b, c)], opp[(c, a)]

    first = sorted(order[m - 3:])
    add(*first)

    flips = 0
    for v, p, q in reversed(removed):
        add(p, v, q)
        stack = [(q, p)]
        while stack:
            a, b = stack.pop()
            # triangle (v, a, b); mirror triangle across a->b is (b, a, c)
            c = opp.get((b, a))
            if c is None:
                continue
            if incircle(pts[v], pts[a], pts[b], pts[c]) < 0:
                drop(v, a, b)
                drop(b, a, c)
                add(v, a, c)
                add(v, c, b)
                flips += 1
                stack.append((a, c))
                stack.append((c, b))

    faces, edge_face = _merge_cocircular(pts, opp)
    logger.info(f"Furthest-site diagram of {m} sites: {len(faces)} vertices, {flips} flips")
    return FSVDiagram(hull=hull, faces=faces, edge_face=edge_face)


def _merge_cocircular(pts: Sequence[Point2], opp: Dict[Tuple[int, int], int]):
    triangles = {tuple(sorted((a, b, c))) for (a, b), c in opp.items()}
    tri_list = sorted(triangles)
    tri_id = {t: i for i, t in enumerate(tri_list)}
    parent = list(range(len(tri_list)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (a, b), c in opp.items():
        d = opp.get((b, a))
        if d is None or a > b:
            continue
        t1 = tri_id[tuple(sorted((a, b, c)))]
        t2 = tri_id[tuple(sorted((a, b, d)))]
        # CCW triangle (a, b, c) against the apex d of its mirror
        if incircle(pts[a], pts[b], pts[c], pts[d]) == 0:
            parent[find(t1)] = find(t2)

    groups: Dict[int, set] = {}
    for t, i in tri_id.items():
        groups.setdefault(find(i), set()).update(t)

    faces: List[FSFace] = []
    edge_face: Dict[Tuple[int, int], int] = {}
    for root in sorted(groups):
        sites = sorted(groups[root])
        circle = circumcircle(pts[sites[0]], pts[sites[1]], pts[sites[2]])
        face = FSFace(index=len(faces), sites=sites, circle=circle)
        faces.append(face)
        for e in face.edges():
            edge_face[e] = face.index
    return faces, edge_face


# ========== FSArcs forest ==========

@dataclass
class ArcNode:
    """
    Node of the arc forest

    A non-terminal node is the arc of `circle` running CCW from site `start`
    to site `end`; a terminal node stands for the hull edge start->end.
    """
    index: int
    start_point: Point2
    end_point: Point2
    circle: Optional[Circle2]
    start: int = -1
    end: int = -1
    face: Optional[int] = None
    parent: Optional[int] = None
    children: List[int] = field(default_factory=list)
    depth: int = 0

    @property
    def terminal(self) -> bool:
        return self.circle is None

    @property
    def radius(self) -> float:
        return self.circle.radius if self.circle is not None else float("inf")

    @property
    def chord(self) -> Tuple[Point2, Point2]:
        return (self.start_point, self.end_point)

    @cached_property
    def arc(self) -> Arc2:
        if self.circle is None:
            raise DegenerateInput("terminal node has no arc")
        return Arc2(self.circle, self.start_point, self.end_point)


@dataclass
class FSArcsForest:
    sites: List[Point2]
    nodes: List[ArcNode]
    roots: List[int]
    sec: Circle2

    def __len__(self) -> int:
        return len(self.nodes)

    def root_nodes(self) -> List[ArcNode]:
        return [self.nodes[r] for r in self.roots]

    def path_to_root(self, index: int) -> List[int]:
        out = [index]
        while self.nodes[out[-1]].parent is not None:
            out.append(self.nodes[out[-1]].parent)
        return out


class _ForestBuilder:
    def __init__(self, sites: Sequence[Point2], diag: Optional[FSVDiagram]):
        self.sites = list(sites)
        self.diag = diag
        self.nodes: List[ArcNode] = []

    def new(self, start_point: Point2, end_point: Point2, circle: Optional[Circle2],
            parent: Optional[int], **kw) -> int:
        depth = self.nodes[parent].depth + 1 if parent is not None else 0
        node = ArcNode(index=len(self.nodes), start_point=start_point, end_point=end_point,
                       circle=circle, parent=parent, depth=depth, **kw)
        self.nodes.append(node)
        if parent is not None:
            self.nodes[parent].children.append(node.index)
        return node.index

    def face_arc(self, fi: int, a: int, b: int, parent: Optional[int]) -> int:
        face = self.diag.faces[fi]
        return self.new(self.sites[a], self.sites[b], face.circle, parent, start=a, end=b, face=fi)

    def terminal(self, a: int, b: int, parent: int) -> int:
        return self.new(self.sites[a], self.sites[b], None, parent, start=a, end=b)

    def expand(self) -> None:
        """Breadth-first creation of children below every non-terminal face arc"""
        queue = deque(n.index for n in self.nodes if n.face is not None)
        while queue:
            idx = queue.popleft()
            node = self.nodes[idx]
            a, b = node.start, node.end
            gi = self.diag.neighbor(a, b)
            if gi is None:
                self.terminal(a, b, idx)
                continue
            for e in self.diag.faces[gi].edges():
                if e == (b, a):
                    continue
                queue.append(self.face_arc(gi, e[0], e[1], idx))


def _center_inside(face: FSFace, pts: Sequence[Point2]) -> bool:
    tol = get_eps() * face.circle.radius
    return all(Line2.through(pts[a], pts[b]).signed_distance(face.circle.center) >= -tol
               for a, b in face.edges())


def build_fsarcs(diag: FSVDiagram) -> FSArcsForest:
    """
    Forest of sub-half-circle arcs of the diagram circles

    Roots are the arcs of the smallest enclosing circle. When that circle is
    fixed by a diameter pair, two semicircle roots are created on the pair:
    each parents the arcs on its own side of the diameter.
    """
    pts = diag.sites
    builder = _ForestBuilder(pts, diag)
    sec_face = next((f for f in sorted(diag.faces, key=lambda f: f.circle.radius)
                     if _center_inside(f, pts)), None)
    if sec_face is not None:
        sec = sec_face.circle
        for a, b in sec_face.edges():
            builder.face_arc(sec_face.index, a, b, None)
        builder.expand()
    else:
        a, b = _diameter_edge(diag)
        sec = _diameter_circle(pts[a], pts[b])
        right = builder.new(pts[a], pts[b], sec, None, start=a, end=b)
        left = builder.new(pts[b], pts[a], sec, None, start=b, end=a)
        fi = diag.edge_face[(a, b)]
        gi = diag.neighbor(a, b)
        if gi is None:
            builder.terminal(a, b, right)
        else:
            for e in diag.faces[gi].edges():
                if e != (b, a):
                    builder.face_arc(gi, e[0], e[1], right)
        for e in diag.faces[fi].edges():
            if e != (a, b):
                builder.face_arc(fi, e[0], e[1], left)
        builder.expand()
    roots = sorted((n.index for n in builder.nodes if n.parent is None),
                   key=lambda i: builder.nodes[i].start)
    forest = FSArcsForest(sites=pts, nodes=builder.nodes, roots=roots, sec=sec)
    logger.debug(f"Arc forest: {len(forest)} nodes, {len(roots)} roots, sec radius {sec.radius:.6g}")
    return forest


def _diameter_edge(diag: FSVDiagram) -> Tuple[int, int]:
    """Directed Delaunay edge whose chord is a diameter of the smallest enclosing circle"""
    pts = diag.sites
    best = None
    for (a, b), fi in diag.edge_face.items():
        gi = diag.neighbor(a, b)
        cf = diag.faces[fi].circle.center
        # arc a->b of F exceeds a half circle and so does b->a of G
        if orient(pts[a], pts[b], cf) >= 0:
            continue
        if gi is not None and orient(pts[b], pts[a], diag.faces[gi].circle.center) >= 0:
            continue
        length = pts[a].dist(pts[b])
        if best is None or length > best[0]:
            best = (length, (a, b))
    if best is None:
        raise DegenerateInput("no diameter edge found for the smallest enclosing circle")
    return best[1]


def build_point_forest(points: Sequence[Point2]) -> FSArcsForest:
    """
    Arc forest of an arbitrary point set

    Collinear or two-point sets get two semicircle roots over the extreme
    pair, each with a terminal child on the shared chord.
    """
    hull = convex_hull_points(points)
    if len(hull) >= 3:
        return build_fsarcs(build_fsvd(ConvexPolygon(tuple(hull))))
    if len(hull) < 2:
        raise DegenerateInput("arc forest needs at least two distinct points")
    a, b = hull
    builder = _ForestBuilder([a, b], None)
    sec = _diameter_circle(a, b)
    right = builder.new(a, b, sec, None, start=0, end=1)
    left = builder.new(b, a, sec, None, start=1, end=0)
    builder.terminal(0, 1, right)
    builder.terminal(1, 0, left)
    return FSArcsForest(sites=[a, b], nodes=builder.nodes, roots=[right, left], sec=sec)


def fsarcs_of_polygon(poly: Polygon) -> FSArcsForest:
    return build_fsarcs(build_fsvd(convex_hull_simple_polygon(poly)))
