"""Generators for concrete median models."""

from dataclasses import dataclass
from itertools import product as cartesian
from typing import Callable, Optional, Sequence

import networkx as nx
import numpy as np

from .errors import InvalidModel, NotATree, NotMedianClosed, TooLarge
from .model import MedianModel, closure_violation, median_closure

MAX_GRID_POINTS = 2 ** 14
AXES = "xyz"


def point_name(coords):
    return "(" + ",".join(str(c) for c in coords) + ")"


def axis_name(i, dim):
    return AXES[i] if dim <= len(AXES) else f"x{i}"


@dataclass(frozen=True)
class GridSpec:
    """An integer box, optionally filtered by a membership predicate.

    ``ranges`` holds one entry per axis: either ``R`` (meaning ``0..R``) or
    an inclusive pair ``(lo, hi)``.
    """

    ranges: Sequence
    predicate: Optional[Callable] = None

    def bounds(self):
        out = []
        for r in self.ranges:
            lo, hi = (0, r) if isinstance(r, int) else r
            if hi < lo:
                raise InvalidModel(f"empty range {r!r}")
            out.append((lo, hi))
        return out


def l1_grid(spec: GridSpec) -> MedianModel:
    """Integer points of a box with the coordinatewise median.

    Axis ``i`` with range ``lo..hi`` contributes the threshold walls
    ``x>=t`` for ``lo < t <= hi``; a point lies on the 1 side of ``x>=t``
    iff its coordinate is at least ``t``. Walls left constant by the
    predicate are dropped.
    """
    bounds = spec.bounds()
    total = 1
    for lo, hi in bounds:
        total *= hi - lo + 1
    if total > MAX_GRID_POINTS:
        raise TooLarge(f"{total} grid points exceed {MAX_GRID_POINTS}")
    dim = len(bounds)
    points = [
        p for p in cartesian(*(range(lo, hi + 1) for lo, hi in bounds))
        if spec.predicate is None or spec.predicate(p)
    ]
    if not points:
        raise InvalidModel("predicate removes every grid point")
    walls = []
    for i, (lo, hi) in enumerate(bounds):
        for t in range(lo + 1, hi + 1):
            if min(p[i] for p in points) < t <= max(p[i] for p in points):
                walls.append((i, t))

    def encode(p):
        v = 0
        for i, t in walls:
            v = (v << 1) | (p[i] >= t)
        return v

    verts = {encode(p): point_name(p) for p in points}
    wall_names = [f"{axis_name(i, dim)}>={t}" for i, t in walls]
    witness = closure_violation(list(verts), len(walls))
    if witness is not None:
        raise NotMedianClosed(
            "grid predicate breaks median closure at "
            + ", ".join(verts[v] for v in witness),
            witness=witness,
        )
    model = MedianModel(wall_names, verts.keys(), verts, allow_parallel=True, check=False)
    keys = [model.partition_key(i) for i in range(len(walls))]
    object.__setattr__(model, "allow_parallel", len(set(keys)) < len(keys))
    return model


def grid(*sizes):
    """Box ``0..sizes[0] x 0..sizes[1] x ...`` (sizes are maxima, not counts)."""
    return l1_grid(GridSpec(tuple(sizes)))


def window(dim, radius):
    """The box ``[-radius, radius]^dim``."""
    return l1_grid(GridSpec(((-radius, radius),) * dim))


def grid_point(model, *coords):
    return model.vertex(point_name(coords))


def in_plane_minus_quadrant(x, y):
    """Membership in the plane with the closed quadrant ``x <= 0, y <= 0`` removed."""
    return not (x <= 0 and y <= 0)


def plane_minus_quadrant(radius) -> MedianModel:
    """The plane minus a closed quadrant, on the window ``[-radius, radius]^2``."""
    if radius < 1:
        raise InvalidModel("window radius must be at least 1")
    return l1_grid(GridSpec(((-radius, radius),) * 2,
                            lambda p: in_plane_minus_quadrant(*p)))


def hypercube(n) -> MedianModel:
    """``{0,1}^n`` with walls ``w1..wn``; vertices are named by their bits."""
    verts = range(1 << n)
    return MedianModel(
        [f"w{i + 1}" for i in range(n)], verts,
        {v: format(v, f"0{n}b") for v in verts} if n else {0: "."},
    )


def path(length) -> MedianModel:
    """The chain ``0 - 1 - ... - length``."""
    return grid(length)


def tree_model(edges) -> MedianModel:
    """Vertices of a tree; one wall per edge.

    The first endpoint of the first edge is the root and sits on the 0 side
    of every wall; wall ``u-v`` has ``v``'s component on its 1 side when the
    edge is read away from the root.
    """
    g = nx.Graph()
    g.add_edges_from(edges)
    if g.number_of_nodes() == 0:
        raise NotATree("no edges")
    if not nx.is_tree(g):
        raise NotATree("edges do not form a tree")
    root = edges[0][0]
    parent = dict(nx.bfs_predecessors(g, root))
    order = [root] + [v for _, vs in nx.bfs_successors(g, root) for v in vs]
    children = [v for v in order if v != root]
    walls = [f"{parent[v]}-{v}" for v in children]
    t = nx.bfs_tree(g, root)
    below = {v: nx.descendants(t, v) | {v} for v in children}
    verts = {}
    for node in order:
        bits = 0
        for v in children:
            bits = (bits << 1) | (node in below[v])
        verts[bits] = str(node)
    return MedianModel(walls, verts.keys(), verts)


def star_tree(leaves):
    return tree_model([("c", f"l{i + 1}") for i in range(leaves)])


def product(A: MedianModel, B: MedianModel) -> MedianModel:
    """Product algebra; wall lists concatenated, B's clashing names primed."""
    taken = set(A.walls)
    b_walls = []
    for w in B.walls:
        while w in taken:
            w = w + "'"
        taken.add(w)
        b_walls.append(w)
    nb = B.n_walls
    verts, names = [], {}
    for a in A.vertices:
        for b in B.vertices:
            v = (a << nb) | b
            verts.append(v)
            names[v] = f"({A.label(a)},{B.label(b)})"
    return MedianModel(list(A.walls) + b_walls, verts, names,
                       allow_parallel=A.allow_parallel or B.allow_parallel)


def random_model(n_walls, n_points, seed, max_vertices=64) -> MedianModel:
    """Median closure of seeded random bitvectors.

    Walls left constant are dropped and walls inducing the same partition
    are merged. Raises TooLarge if the closure exceeds ``max_vertices``.
    """
    rng = np.random.default_rng(seed)
    pts = {int(x) for x in rng.integers(0, 1 << n_walls, size=n_points)}
    closed = median_closure(pts, limit=max_vertices)
    raw = MedianModel([f"h{i + 1}" for i in range(n_walls)], closed,
                      allow_parallel=True, check=False)
    keep, seen = [], set()
    for i in range(n_walls):
        if raw.is_constant(i):
            continue
        key = raw.partition_key(i)
        if key not in seen:
            seen.add(key)
            keep.append(i)

    def project(v):
        out = 0
        for i in keep:
            out = (out << 1) | raw.side(v, i)
        return out

    return MedianModel([raw.walls[i] for i in keep], {project(v) for v in closed})


def cycle_interval_map(n):
    """Geodesic intervals of the ``n``-cycle graph (not median for ``n = 5``)."""
    g = nx.cycle_graph(n)
    dist = dict(nx.all_pairs_shortest_path_length(g))
    return {
        (a, b): frozenset(x for x in g if dist[a][x] + dist[x][b] == dist[a][b])
        for a in g for b in g
    }


def cycle_distances(n):
    g = nx.cycle_graph(n)
    dist = dict(nx.all_pairs_shortest_path_length(g))
    return list(g), {(a, b): dist[a][b] for a in g for b in g}


PRESETS = {
    "cube1": lambda: hypercube(1),
    "cube2": lambda: hypercube(2),
    "cube3": lambda: hypercube(3),
    "cube4": lambda: hypercube(4),
    "path4": lambda: path(4),
    "tripod": lambda: star_tree(3),
    "z2-3": lambda: window(2, 1),
    "z2-5": lambda: window(2, 2),
    "z2-7": lambda: window(2, 3),
    "z2-11": lambda: window(2, 5),
    "z3-3": lambda: window(3, 1),
    "z3-5": lambda: window(3, 2),
    "pmq-5": lambda: plane_minus_quadrant(2),
    "pmq-9": lambda: plane_minus_quadrant(4),
}
