"""
Skeleton tree of a convex polygon, the planar map it induces, and the lifted surface
Built by shrinking the polygon's edges inward and collapsing them with a priority queue
"""
import heapq
import math
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

import numpy as np
from loguru import logger

from circsep.config import disk_tol, get_eps
from circsep.errors import DegenerateInput, OutsidePolygon
from circsep.geom_core import Circle2, ConvexPolygon, Location, Point2


@dataclass
class SkeletonVertex:
    """Center of a circle touching at least two polygon edges"""
    index: int
    center: Point2
    clearance: float
    tangents: Set[int]
    parent: Optional[int] = None
    children: List[int] = field(default_factory=list)
    depth: int = 0
    pre: int = 0
    post: int = 0

    @property
    def circle(self) -> Circle2:
        return Circle2(self.center, self.clearance)

    @property
    def is_leaf(self) -> bool:
        return self.clearance == 0.0


class SkeletonTree:
    """
    Medial axis of a convex polygon as a rooted tree

    Leaves 0..n-1 are the polygon vertices (clearance 0); the root carries the
    largest inscribed circle. Parent links point toward the root, and an
    ancestor table `up[k][v]` holds the ancestor at distance 2^k.
    """

    def __init__(self, polygon: ConvexPolygon, vertices: List[SkeletonVertex], root: int):
        self.polygon = polygon
        self.vertices = vertices
        self.root = root
        self._number()
        self._build_lifting()

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def incircle(self) -> Circle2:
        return self.vertices[self.root].circle

    def parent(self, v: int) -> Optional[int]:
        return self.vertices[v].parent

    def edges(self) -> List[Tuple[int, int]]:
        """(child, parent) pairs"""
        return [(v.index, v.parent) for v in self.vertices if v.parent is not None]

    def neighbors(self, v: int) -> List[int]:
        vert = self.vertices[v]
        out = list(vert.children)
        if vert.parent is not None:
            out.append(vert.parent)
        return out

    def _number(self) -> None:
        counter = 0
        stack = [(self.root, False)]
        self.vertices[self.root].depth = 0
        while stack:
            v, done = stack.pop()
            vert = self.vertices[v]
            if done:
                vert.post = counter
                counter += 1
                continue
            vert.pre = counter
            counter += 1
            stack.append((v, True))
            for c in vert.children:
                self.vertices[c].depth = vert.depth + 1
                stack.append((c, False))

    def _build_lifting(self) -> None:
        n = len(self.vertices)
        levels = max(1, (n - 1).bit_length())
        up = np.empty((levels, n), dtype=np.int64)
        up[0] = [v.parent if v.parent is not None else v.index for v in self.vertices]
        for k in range(1, levels):
            up[k] = up[k - 1][up[k - 1]]
        self.up = up

    def is_ancestor(self, a: int, b: int) -> bool:
        """True iff a lies on the path from b to the root (a == b included)"""
        va, vb = self.vertices[a], self.vertices[b]
        return va.pre <= vb.pre and vb.post <= va.post

    def level_ancestor(self, v: int, d: int) -> int:
        """Ancestor of v at distance d (clamped at the root)"""
        k = 0
        while d and k < len(self.up):
            if d & 1:
                v = int(self.up[k][v])
            d >>= 1
            k += 1
        return self.root if d else v

    def path_to_root(self, v: int) -> List[int]:
        out = [v]
        while self.vertices[out[-1]].parent is not None:
            out.append(self.vertices[out[-1]].parent)
        return out

    def highest_ancestor(self, v: int, pred) -> int:
        """
        Highest ancestor a of v with pred(a), for pred true on a prefix of the root path

        v itself must satisfy pred.
        """
        for k in range(len(self.up) - 1, -1, -1):
            cand = int(self.up[k][v])
            if cand != v and pred(cand):
                v = cand
        return v

    def edge_point(self, child: int, s: float) -> Tuple[Point2, float]:
        """Center and clearance at parameter s in [0, 1] from child to its parent"""
        a = self.vertices[child]
        b = self.vertices[a.parent]
        center = Point2(a.center.x + s * (b.center.x - a.center.x),
                        a.center.y + s * (b.center.y - a.center.y))
        return center, a.clearance + s * (b.clearance - a.clearance)


# ========== Construction ==========

def _tangent_circle(lines: np.ndarray, i: int, j: int, k: int) -> Optional[Tuple[Point2, float]]:
    """Point equidistant (signed, inward) from three edge lines"""
    rows = lines[[i, j, k]]
    mat = np.column_stack([rows[:, 0], rows[:, 1], -np.ones(3)])
    try:
        x, y, t = np.linalg.solve(mat, -rows[:, 2])
    except np.linalg.LinAlgError:
        return None
    if not (math.isfinite(x) and math.isfinite(y) and math.isfinite(t)):
        return None
    return Point2(float(x), float(y)), float(t)


class _Wavefront:
    def __init__(self, polygon: ConvexPolygon):
        self.polygon = polygon
        self.lines = polygon.edge_lines
        self.tol = get_eps() * polygon.diameter
        n = len(polygon)
        self.nodes: List[Optional[SkeletonVertex]] = [
            SkeletonVertex(index=i, center=polygon[i], clearance=0.0, tangents={(i - 1) % n, i})
            for i in range(n)
        ]

    def _coincident(self, node: SkeletonVertex, center: Point2, t: float) -> bool:
        return node.center.dist(center) <= self.tol and abs(node.clearance - t) <= self.tol

    def _absorb(self, keep: int, gone: int) -> None:
        k, g = self.nodes[keep], self.nodes[gone]
        for c in g.children:
            self.nodes[c].parent = keep
            k.children.append(c)
        k.tangents |= g.tangents
        self.nodes[gone] = None

    def attach(self, center: Point2, t: float, tangents: Set[int], kids: List[int]) -> int:
        kids = list(dict.fromkeys(kids))
        same = [k for k in kids if self._coincident(self.nodes[k], center, t)]
        if same:
            node = same[0]
            for other in same[1:]:
                self._absorb(node, other)
        else:
            node = len(self.nodes)
            self.nodes.append(SkeletonVertex(index=node, center=center, clearance=t, tangents=set()))
        for k in kids:
            if k in same:
                continue
            self.nodes[k].parent = node
            self.nodes[node].children.append(k)
        self.nodes[node].tangents |= tangents
        return node

    def run(self) -> int:
        n = len(self.polygon)
        prev = [(i - 1) % n for i in range(n)]
        nxt = [(i + 1) % n for i in range(n)]
        start = list(range(n))
        version = [0] * n
        active = n
        heap: List[Tuple[float, int, int, Point2]] = []

        def push(i: int) -> None:
            version[i] += 1
            ev = _tangent_circle(self.lines, prev[i], i, nxt[i])
            if ev is None or ev[1] < -self.tol:
                return
            heapq.heappush(heap, (ev[1], i, version[i], ev[0]))

        if n > 3:
            for i in range(n):
                push(i)
        alive = [True] * n
        collapses = 0
        while active > 3:
            t, i, ver, center = heapq.heappop(heap)
            if not alive[i] or ver != version[i]:
                continue
            p, q = prev[i], nxt[i]
            node = self.attach(center, t, {p, i, q}, [start[i], start[q]])
            alive[i] = False
            nxt[p], prev[q] = q, p
            start[q] = node
            active -= 1
            collapses += 1
            push(p)
            push(q)
        last = [i for i in range(n) if alive[i]]
        ev = _tangent_circle(self.lines, *last)
        if ev is None:
            raise DegenerateInput("final three edges have no common tangent circle")
        root = self.attach(ev[0], ev[1], set(last), [start[i] for i in last])
        logger.debug(f"Wavefront finished after {collapses} collapses")
        return root


def build_skeleton(polygon: ConvexPolygon) -> SkeletonTree:
    """
    Skeleton tree of a strictly convex polygon

    When the largest inscribed circle is not unique (a skeleton segment of
    maximal clearance) the root is its endpoint with the smallest center.
    """
    wf = _Wavefront(polygon)
    root = wf.run()

    # compact merged nodes away, polygon vertices keep indices 0..n-1
    remap: Dict[int, int] = {}
    kept: List[SkeletonVertex] = []
    for node in wf.nodes:
        if node is None:
            continue
        remap[node.index] = len(kept)
        kept.append(node)
    for node in kept:
        node.index = remap[node.index]
        node.parent = remap[node.parent] if node.parent is not None else None
        node.children = [remap[c] for c in node.children]
    root = remap[root]

    best = max(v.clearance for v in kept)
    tol = wf.tol
    top = min((v for v in kept if v.clearance >= best - tol), key=lambda v: (v.center.x, v.center.y))
    _reroot(kept, top.index)
    tree = SkeletonTree(polygon, kept, top.index)
    logger.info(f"Skeleton of {len(polygon)}-gon: {len(tree)} vertices, incircle r={tree.incircle.radius:.6g}")
    return tree


def _reroot(nodes: List[SkeletonVertex], new_root: int) -> None:
    path = [new_root]
    while nodes[path[-1]].parent is not None:
        path.append(nodes[path[-1]].parent)
    for child, parent in zip(path, path[1:]):
        nodes[parent].children.remove(child)
        nodes[parent].parent = child
        nodes[child].children.append(parent)
    nodes[new_root].parent = None


# ========== Planar map and point location ==========

@dataclass
class _Sectors:
    angles: List[float]
    neighbors: List[int]


class PlanarMap:
    """
    Partition of the polygon into the incircle and one cell per skeleton edge

    The cell of edge (child, parent) is keyed by the child, the incircle by the
    root. Location runs a centroid decomposition of the skeleton tree: at each
    centroid the rays to its tangent points split the polygon into sectors,
    one per incident skeleton edge.
    """

    def __init__(self, tree: SkeletonTree):
        self.tree = tree
        self.polygon = tree.polygon
        self._sectors = [self._vertex_sectors(v) for v in range(len(tree))]
        self._decompose()
        logger.debug(f"Planar map with {self.cell_count} cells, decomposition depth {max(self.level) + 1}")

    @property
    def cell_count(self) -> int:
        return len(self.tree)

    def cells(self) -> List[int]:
        return list(range(len(self.tree)))

    def _vertex_sectors(self, v: int) -> _Sectors:
        tree = self.tree
        vert = tree.vertices[v]
        nbrs = tree.neighbors(v)
        if len(nbrs) <= 1 or vert.is_leaf:
            return _Sectors(angles=[], neighbors=nbrs)
        lines = self.polygon.edge_lines
        feet = []
        for e in vert.tangents:
            a, b, _ = lines[e]
            # foot of the perpendicular from the center onto edge e
            feet.append((math.atan2(-b, -a), e))
        feet.sort()
        by_pair: Dict[FrozenSet[int], int] = {}
        for w in nbrs:
            common = vert.tangents & tree.vertices[w].tangents
            if len(common) >= 2:
                by_pair.setdefault(frozenset(common), w)
        angles, owners = [], []
        k = len(feet)
        for j in range(k):
            pair = frozenset((feet[j][1], feet[(j + 1) % k][1]))
            w = by_pair.get(pair)
            if w is None:
                w = next((w for key, w in by_pair.items() if pair <= key), None)
            if w is None:
                continue
            angles.append(feet[j][0])
            owners.append(w)
        if not owners:
            return _Sectors(angles=[], neighbors=nbrs)
        return _Sectors(angles=angles, neighbors=owners)

    def _sector_neighbor(self, v: int, p: Point2) -> int:
        sec = self._sectors[v]
        if not sec.angles:
            return sec.neighbors[0]
        c = self.tree.vertices[v].center
        theta = math.atan2(p.y - c.y, p.x - c.x)
        j = bisect_right(sec.angles, theta) - 1
        return sec.neighbors[j]

    def _decompose(self) -> None:
        tree = self.tree
        n = len(tree)
        removed = [False] * n
        self.level = [0] * n
        self.child_centroid: Dict[Tuple[int, int], int] = {}
        work: List[Tuple[int, Optional[Tuple[int, int]], int]] = [(tree.root, None, 0)]
        while work:
            entry, key, lvl = work.pop()
            c = self._centroid(entry, removed)
            if key is None:
                self.top = c
            else:
                self.child_centroid[key] = c
            self.level[c] = lvl
            removed[c] = True
            for w in tree.neighbors(c):
                if not removed[w]:
                    work.append((w, (c, w), lvl + 1))

    def _centroid(self, entry: int, removed: List[bool]) -> int:
        tree = self.tree
        order = [entry]
        parent = {entry: -1}
        i = 0
        while i < len(order):
            v = order[i]
            i += 1
            for w in tree.neighbors(v):
                if not removed[w] and w not in parent:
                    parent[w] = v
                    order.append(w)
        size = {v: 1 for v in order}
        for v in reversed(order[1:]):
            size[parent[v]] += size[v]
        total = len(order)
        v = entry
        while True:
            heavy = next((w for w in tree.neighbors(v)
                          if not removed[w] and parent.get(w) == v and size[w] > total // 2), None)
            if heavy is None:
                return v
            v = heavy

    def strip_edge(self, p: Point2) -> Tuple[int, int]:
        """Skeleton edge (child, parent) whose strip contains p"""
        v = self.top
        for _ in range(len(self.tree) + 1):
            w = self._sector_neighbor(v, p)
            if self.level[w] < self.level[v]:
                break
            v = self.child_centroid[(v, w)]
        else:
            raise DegenerateInput("point location did not terminate")
        if self.tree.parent(v) == w:
            return v, w
        return w, v

    def contains(self, p: Point2) -> bool:
        return self.polygon.locate(p) != Location.EXTERIOR

    def locate(self, p: Point2) -> Optional[int]:
        """
        Cell key of the cell whose closure contains p, or None outside the polygon
        """
        if not self.contains(p):
            return None
        tree = self.tree
        inc = tree.incircle
        if inc.center.dist(p) <= inc.radius + get_eps() * inc.radius:
            return tree.root
        child, parent = self.strip_edge(p)
        if not _in_disk(tree.vertices[parent], p):
            return child
        a = tree.highest_ancestor(parent, lambda u: _in_disk(tree.vertices[u], p))
        return a

    def clearance(self, p: Point2) -> float:
        """Distance to the boundary, from the two edges bounding the strip of p"""
        if not self.contains(p):
            raise OutsidePolygon(f"{p} lies outside the polygon")
        child, parent = self.strip_edge(p)
        common = self.tree.vertices[child].tangents & self.tree.vertices[parent].tangents
        lines = self.polygon.edge_lines
        vals = [lines[e, 0] * p.x + lines[e, 1] * p.y + lines[e, 2] for e in common]
        return max(0.0, float(min(vals))) if vals else self.polygon.signed_clearance(p)


def _in_disk(vert: SkeletonVertex, p: Point2) -> bool:
    return vert.center.dist(p) <= vert.clearance * (1.0 + get_eps()) + 1e-300


def build_planar_map(tree: SkeletonTree) -> PlanarMap:
    return PlanarMap(tree)


# ========== Lifted surface ==========

class LiftedSurface:
    """
    Graph of the clearance function over the polygon

    Face i is the plane z = a_i x + b_i y + c_i through edge i at 45 degrees;
    the surface is their lower envelope and projects onto the skeleton tree.
    """

    def __init__(self, tree: SkeletonTree, planar_map: PlanarMap):
        self.tree = tree
        self.map = planar_map
        self.planes = tree.polygon.edge_lines

    def height(self, p: Point2) -> float:
        return self.map.clearance(p)

    @staticmethod
    def lift(circle: Circle2) -> Tuple[float, float, float]:
        return (circle.center.x, circle.center.y, circle.radius)

    def is_internal(self, circle: Circle2) -> bool:
        """Disk lies in the polygon, up to the overlap the exterior scan accepts"""
        if not self.map.contains(circle.center):
            return False
        x, y, z = self.lift(circle)
        # bisection can stop anywhere inside the scan's overlap band
        return z <= self.height(Point2(x, y)) + 2.0 * disk_tol(z, self.tree.polygon.diameter)

    def vertices_3d(self) -> np.ndarray:
        return np.array([[v.center.x, v.center.y, v.clearance] for v in self.tree.vertices])

    def edges_3d(self) -> List[Tuple[Tuple[float, float, float], Tuple[float, float, float]]]:
        pts = self.vertices_3d()
        return [(tuple(pts[c]), tuple(pts[p])) for c, p in self.tree.edges()]
