"""The cube complex dual to a vertex set, its links, and the local
cubulation checker."""

from dataclasses import dataclass, field
from itertools import combinations

import networkx as nx

from .errors import UnknownVertex
from .model import MedianModel


@dataclass(frozen=True, order=True)
class Cube:
    """Corners ``base ^ S`` for every subset ``S`` of ``walls``.

    ``base`` is the corner whose bits on ``walls`` are all 0.
    """

    base: int
    walls: frozenset

    @property
    def dim(self):
        return len(self.walls)

    def corners(self, n_walls):
        masks = [1 << (n_walls - 1 - i) for i in sorted(self.walls)]
        out = []
        for k in range(1 << len(masks)):
            v = self.base
            for j, m in enumerate(masks):
                if k >> j & 1:
                    v |= m
            out.append(v)
        return frozenset(out)

    def sort_key(self):
        return (self.dim, self.base, tuple(sorted(self.walls)))


@dataclass(frozen=True)
class CubeComplexSkeleton:
    walls: tuple
    vertices: tuple
    edges: tuple   # (u, v, wall index) with u < v
    cubes: tuple   # every cube, dimension >= 0, canonical order
    links: dict = field(repr=False)  # vertex -> frozenset of simplices (frozensets of walls)
    names: dict = field(default_factory=dict, repr=False)

    @property
    def n_walls(self):
        return len(self.walls)

    def label(self, v):
        return self.names.get(v) or format(v, f"0{self.n_walls}b")

    def vertex(self, ref):
        if isinstance(ref, int) and ref in self.links:
            return ref
        for v, name in self.names.items():
            if name == ref:
                return v
        if isinstance(ref, str) and len(ref) == self.n_walls and set(ref) <= {"0", "1"}:
            v = int(ref, 2)
            if v in self.links:
                return v
        raise UnknownVertex(f"unknown vertex {ref!r}")

    def cubes_of_dim(self, k):
        return [c for c in self.cubes if c.dim == k]

    def counts(self):
        out = {}
        for c in self.cubes:
            out[c.dim] = out.get(c.dim, 0) + 1
        return dict(sorted(out.items()))

    def maximal_cubes(self):
        sets = [(c, c.corners(self.n_walls)) for c in self.cubes]
        return [
            c for c, cs in sets
            if not any(d.dim > c.dim and cs <= ds for d, ds in sets)
        ]

    def link(self, v):
        return self.links[self.vertex(v)]

    def cubes_at(self, v):
        """Cubes containing ``v``, as sets of edge directions at ``v``."""
        return self.link(v)


def _directions(vset, v, n):
    return [i for i in range(n) if v ^ (1 << (n - 1 - i)) in vset]


def _link_at(vset, v, n):
    """Direction sets ``D`` at ``v`` such that every flip of ``v`` along a
    subset of ``D`` is a vertex."""
    dirs = _directions(vset, v, n)
    simplices = {frozenset()}

    def grow(current, pts, start):
        for k in range(start, len(dirs)):
            m = 1 << (n - 1 - dirs[k])
            moved = [p ^ m for p in pts]
            if all(p in vset for p in moved):
                new = current | {dirs[k]}
                simplices.add(new)
                grow(new, pts + moved, k + 1)

    grow(frozenset(), [v], 0)
    return frozenset(simplices)


def skeleton_from_vertices(walls, vertices, names=None) -> CubeComplexSkeleton:
    """Cube complex on an arbitrary bitvector set.

    Edges join vertices differing in one wall; a cube is present when all
    of its corners are. The vertex set need not be median-closed.
    """
    walls = tuple(walls)
    n = len(walls)
    verts = tuple(sorted(set(vertices)))
    vset = frozenset(verts)
    links = {v: _link_at(vset, v, n) for v in verts}
    edges = []
    for v in verts:
        for i in _directions(vset, v, n):
            u = v ^ (1 << (n - 1 - i))
            if v < u:
                edges.append((v, u, i))
    cubes = set()
    for v in verts:
        for simplex in links[v]:
            base = v
            for i in simplex:
                base &= ~(1 << (n - 1 - i))
            cubes.add(Cube(base, simplex))
    cubes = tuple(sorted(cubes, key=Cube.sort_key))
    return CubeComplexSkeleton(walls, verts, tuple(sorted(edges)), cubes, links,
                               dict(names or {}))


def build_complex(model: MedianModel) -> CubeComplexSkeleton:
    return skeleton_from_vertices(model.walls, model.vertices, model.names)


@dataclass
class LocalReport:
    vertex: int
    dim: int
    contained_in_n_cube: bool
    two_cofacets: bool
    flag: bool
    witnesses: dict = field(default_factory=dict)

    @property
    def ok(self):
        return self.contained_in_n_cube and self.two_cofacets and self.flag

    @property
    def flags(self):
        return (self.contained_in_n_cube, self.two_cofacets, self.flag)


def link_graph(simplices):
    g = nx.Graph()
    for s in simplices:
        if len(s) == 1:
            g.add_node(next(iter(s)))
        elif len(s) == 2:
            g.add_edge(*sorted(s))
    return g


def is_flag(simplices):
    """Every clique of the link's 1-skeleton is a simplex; returns the least
    offending clique or None."""
    g = link_graph(simplices)
    bad = []
    for clique in nx.find_cliques(g):
        if frozenset(clique) not in simplices:
            # some sub-clique of size >= 3 is the minimal failure
            for k in range(3, len(clique) + 1):
                subs = [frozenset(c) for c in combinations(sorted(clique), k)
                        if frozenset(c) not in simplices]
                if subs:
                    bad.append(min(subs, key=lambda s: sorted(s)))
                    break
    return min(bad, key=lambda s: (len(s), sorted(s))) if bad else None


def check_local_cubulation(skeleton: CubeComplexSkeleton, v, n) -> LocalReport:
    """The three combinatorial conditions at ``v``.

    1. every cube containing ``v`` lies in an ``n``-cube containing ``v``;
    2. every ``(n-1)``-cube containing ``v`` lies in exactly two ``n``-cubes;
    3. the link at ``v`` is flag.
    """
    v = skeleton.vertex(v)
    if n < 1:
        raise ValueError("dimension must be at least 1")
    link = skeleton.links[v]
    top = [s for s in link if len(s) == n]
    witnesses = {}

    bad1 = sorted((s for s in link if not any(s <= t for t in top)),
                  key=lambda s: (len(s), sorted(s)))
    if bad1:
        witnesses["contained_in_n_cube"] = sorted(bad1[0])

    bad2 = []
    for s in sorted((s for s in link if len(s) == n - 1), key=sorted):
        k = sum(1 for t in top if s <= t)
        if k != 2:
            bad2.append((sorted(s), k))
    if bad2:
        witnesses["two_cofacets"] = bad2[0]

    bad3 = is_flag(link)
    if bad3 is not None:
        witnesses["flag"] = sorted(bad3)

    return LocalReport(v, n, not bad1, not bad2, bad3 is None, witnesses)
