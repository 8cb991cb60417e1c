"""Weighted wall metrics, subdivision and the 1-thickening.

All weights and distances are exact ``Fraction`` values.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

import numpy as np

from .algebra import convexity_witness, hull
from .complex import _link_at
from .errors import (
    AmbientExhausted,
    GateNotUnique,
    InternalInvariantViolation,
    InvalidCount,
    InvalidModel,
    NotConvex,
)
from .model import MedianModel, between, maj


def as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        raise TypeError("weights must be exact; got a float")
    return Fraction(x)


def fmt(q: Fraction) -> str:
    """Reduced ``p/q`` form, also for integers."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


class WeightedWallspace:
    """A median model with a positive rational weight on every wall.

    ``parents`` records, for walls produced by subdivision, the wall they
    were split from.
    """

    def __init__(self, model: MedianModel, weights=None, parents=None):
        self.model = model
        given = dict(weights or {})
        unknown = set(given) - set(model.walls)
        if unknown:
            raise InvalidModel(f"weights for unknown walls {sorted(unknown)}")
        self.weights = tuple(as_fraction(given.get(w, 1)) for w in model.walls)
        for w, x in zip(model.walls, self.weights):
            if x <= 0:
                raise InvalidModel(f"weight of {w!r} is not positive")
        self.parents = dict(parents or {})
        n = model.n_walls
        self.scale = lcm(*(x.denominator for x in self.weights)) if n else 1
        # integer weight by bit position (position p is wall n - 1 - p)
        self._int_by_pos = [
            int(self.weights[n - 1 - p] * self.scale) for p in range(n)
        ]

    def __repr__(self):
        return f"WeightedWallspace({self.model!r})"

    def weight(self, wall):
        return self.weights[self.model.wall_index(wall)]

    def weight_map(self):
        return dict(zip(self.model.walls, self.weights))

    def with_weights(self, updates):
        w = self.weight_map()
        w.update({k: as_fraction(v) for k, v in updates.items()})
        return WeightedWallspace(self.model, w, self.parents)

    def int_distance(self, u, v):
        """Distance times ``self.scale``, as an int."""
        diff = u ^ v
        total = 0
        while diff:
            low = diff & -diff
            total += self._int_by_pos[low.bit_length() - 1]
            diff ^= low
        return total

    def dist(self, u, v):
        return Fraction(self.int_distance(u, v), self.scale)

    def set_distance(self, A, B):
        return Fraction(min(self.int_distance(a, b) for a in A for b in B), self.scale)

    def distance_matrix(self):
        verts = self.model.vertices
        return np.array([[self.int_distance(u, v) for v in verts] for u in verts],
                        dtype=np.int64)

    def restrict(self, vertices):
        """Wallspace on a convex subset; walls constant there are dropped."""
        sub = self.model.submodel(vertices)
        w = self.weight_map()
        return WeightedWallspace(sub, {x: w[x] for x in sub.walls},
                                 {k: p for k, p in self.parents.items() if k in sub.walls})


def distance(ws: WeightedWallspace, u, v) -> Fraction:
    """Sum of the weights of the walls separating ``u`` and ``v``."""
    m = ws.model
    return ws.dist(m.vertex(u), m.vertex(v))


# -- median metric verification -------------------------------------------


@dataclass
class MetricReport:
    size: int
    triples: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations


def check_median_metric(points, dist, median=None) -> MetricReport:
    """Every triple has exactly one point between each pair.

    ``dist`` is a square matrix (nested lists or array) of exact values on
    ``points``. If ``median`` is given it must return the expected point of
    a triple, and the unique between-point is compared with it. Violations
    are ``(triple, between-points)`` with points given as labels from
    ``points``.
    """
    points = list(points)
    n = len(points)
    vals = [[Fraction(x) for x in row] for row in dist]
    scale = lcm(*(x.denominator for row in vals for x in row)) if n else 1
    D = np.array([[int(x * scale) for x in row] for row in vals], dtype=np.int64)
    for i in range(n):
        for j in range(n):
            if D[i, j] < 0 or D[i, j] != D[j, i] or (D[i, j] == 0) != (i == j):
                raise InvalidModel("not a metric")
    index = {p: i for i, p in enumerate(points)}
    report = MetricReport(size=n)
    # between[a][b, x]: x lies between a and b
    betw = [(D[a][None, :] + D) == D[a][:, None] for a in range(n)]
    for a in range(n):
        Ba = betw[a]
        for b in range(a, n):
            cs = np.arange(b, n)
            cand = Ba[b][None, :] & Ba[cs] & betw[b][cs]
            counts = cand.sum(axis=1)
            report.triples += len(cs)
            for k, c in enumerate(cs):
                c = int(c)
                xs = np.flatnonzero(cand[k])
                expected = None
                if median is not None:
                    expected = index[median(points[a], points[b], points[c])]
                if counts[k] != 1 or (expected is not None and int(xs[0]) != expected):
                    report.violations.append(
                        ((points[a], points[b], points[c]), [points[int(x)] for x in xs])
                    )
    return report


def verify_median_metric(ws: WeightedWallspace) -> MetricReport:
    """For every triple, exactly one vertex is between each pair, and it is
    the algebra median."""
    verts = ws.model.vertices
    D = ws.distance_matrix()
    dist = [[Fraction(int(x), ws.scale) for x in row] for row in D]
    return check_median_metric(verts, dist, median=maj)


def metric_interval(ws: WeightedWallspace, a, b):
    m = ws.model
    a, b = m.vertex(a), m.vertex(b)
    dab = ws.int_distance(a, b)
    return frozenset(x for x in m.vertices
                     if ws.int_distance(a, x) + ws.int_distance(x, b) == dab)


# -- subdivision ----------------------------------------------------------


def subdivide_wall(ws: WeightedWallspace, wall, n: int) -> WeightedWallspace:
    """Replace ``wall`` by ``n`` parallel copies of weight ``lambda / n``.

    Vertices on the 0 side get the pattern ``0...0`` and vertices on the 1
    side ``1...1``; every edge crossing the wall receives the ``n - 1``
    staircase patterns ``1..10..0`` in between. Distances between original
    vertices do not change.
    """
    m = ws.model
    i = m.wall_index(wall)
    if not isinstance(n, int) or n < 1:
        raise InvalidCount(f"subdivision count must be a positive int, got {n!r}")
    if n == 1:
        return ws
    w = m.walls[i]
    lam = ws.weights[i]
    total = m.n_walls
    low_bits = total - 1 - i

    def place(v, pattern):
        high = v >> (low_bits + 1)
        low = v & ((1 << low_bits) - 1)
        return (((high << n) | pattern) << low_bits) | low

    ones = (1 << n) - 1
    verts, names = {}, {}
    for v in m.vertices:
        nv = place(v, ones if m.side(v, i) else 0)
        verts[nv] = v
        if v in m.names:
            names[nv] = m.names[v]
    mask = m.mask(i)
    for v in m.vertices:
        u = v | mask
        if m.side(v, i) == 0 and u in m:
            for k in range(1, n):
                pattern = ((1 << k) - 1) << (n - k)   # first k copies set
                nv = place(v, pattern)
                verts[nv] = None
                if v in m.names and u in m.names:
                    names[nv] = f"{m.names[v]}~{m.names[u]}:{k}/{n}"
    copies = [f"{w}#{k}" for k in range(1, n + 1)]
    walls = list(m.walls[:i]) + copies + list(m.walls[i + 1:])
    model = MedianModel(walls, verts.keys(), names, allow_parallel=True)
    weights = {x: y for x, y in ws.weight_map().items() if x != w}
    weights.update({c: lam / n for c in copies})
    parents = dict(ws.parents)
    parents.update({c: w for c in copies})
    return WeightedWallspace(model, weights, parents)


# -- neighbourhoods and the 1-thickening ----------------------------------


def star(model: MedianModel, v):
    """All vertices of cubes containing ``v``."""
    n = model.n_walls
    out = set()
    for simplex in _link_at(model.vertex_set, v, n):
        corners = [v]
        for i in simplex:
            m = 1 << (n - 1 - i)
            corners += [c ^ m for c in corners]
        out.update(corners)
    return out


def neighbourhood(model: MedianModel, K):
    """Union of the cubes meeting ``K``."""
    out = set()
    for k in K:
        out |= star(model, k)
    return frozenset(out)


def frontier(model: MedianModel, K):
    """Vertices of ``K`` lying in some cube not contained in ``K``."""
    K = frozenset(K)
    return frozenset(k for k in K if not star(model, k) <= K)


def crossing_walls(model: MedianModel, S):
    """Indices of walls with vertices of ``S`` on both sides."""
    S = list(S)
    out = []
    for i in range(model.n_walls):
        first = model.side(S[0], i)
        if any(model.side(v, i) != first for v in S[1:]):
            out.append(i)
    return out


def separating_walls(model: MedianModel, x, K):
    """Walls with ``K`` entirely on one side and ``x`` on the other."""
    K = list(K)
    out = []
    for i in range(model.n_walls):
        s = model.side(K[0], i)
        if all(model.side(k, i) == s for k in K) and model.side(x, i) != s:
            out.append(i)
    return out


def require_convex(model, K):
    if not K:
        raise NotConvex("empty set")
    bad = convexity_witness(model, K)
    if bad is not None:
        a, b, x = (model.label(v) for v in bad)
        raise NotConvex(f"{x} lies between {a} and {b} but is not in the set")


@dataclass
class Thickening:
    region: frozenset          # N(K)
    wallspace: WeightedWallspace
    new_walls: tuple           # names, weight set to ``weight``
    frontier: frozenset        # B(N)
    gap: Fraction              # d(B(N), K), None when B(N) is empty
    unclassified: tuple = ()   # walls crossing N that are neither old nor new


def thicken(ambient: WeightedWallspace, K, weight=1) -> Thickening:
    """Grow convex ``K`` by every ambient cube meeting it.

    Walls separating a vertex of ``N(K)`` from ``K`` (these do not cross
    ``K``) get ``weight``. Then every edge path from the frontier of
    ``N(K)`` to ``K`` crosses one of them, so ``d(B(N), K) >= weight``;
    both facts are checked.
    """
    m = ambient.model
    K = m.vertices_of(K)
    require_convex(m, K)
    weight = as_fraction(weight)
    N = neighbourhood(m, K)
    across_K = set(crossing_walls(m, K))
    across_N = crossing_walls(m, N)
    new = [i for i in across_N if i not in across_K]
    unclassified = tuple(m.walls[i] for i in across_N
                         if i not in across_K and i not in new)
    ws = ambient.with_weights({m.walls[i]: weight for i in new})
    B = frontier(m, N)
    new_mask = 0
    for i in new:
        new_mask |= m.mask(i)
    for b in B:
        for k in K:
            if not (b ^ k) & new_mask:
                raise InternalInvariantViolation(
                    f"path {m.label(b)} -> {m.label(k)} crosses no new wall"
                )
    gap = ws.set_distance(B, K) if B else None
    if gap is not None and gap < weight:
        raise InternalInvariantViolation(f"frontier gap {gap} < {weight}")
    return Thickening(N, ws, tuple(m.walls[i] for i in new), B, gap, unclassified)


# -- layered exhaustions ----------------------------------------------------


def unit_weight(layer):
    return Fraction(1)


def floyd_weight(layer):
    return Fraction(1, 2 ** layer)


@dataclass
class LayeredExhaustion:
    """Nested convex layers ``K_1 <= ... <= K_L`` with a wall registry.

    ``registry`` maps each wall crossing ``K_L`` to the layer that gave it
    its weight (1 is the seed). ``wallspace`` carries the final weights on
    the ambient model; walls never registered keep their ambient weight.
    """

    ambient: WeightedWallspace
    layers: tuple
    registry: dict
    wallspace: WeightedWallspace
    kind: str = "unit"
    hull_walls: dict = field(default_factory=dict)  # layer -> walls from the hull step

    @property
    def depth(self):
        return len(self.layers)

    @property
    def model(self):
        return self.ambient.model

    def layer(self, i):
        return self.layers[i - 1]

    def snapshot(self, i):
        """Weights registered by the end of layer ``i``."""
        final = self.wallspace.weight_map()
        return {w: final[w] for w, k in self.registry.items() if k <= i}

    def layer_distance(self, i, u, v):
        """Distance in ``K_i`` using only weights known at layer ``i``."""
        m = self.model
        snap = self.snapshot(i)
        total = Fraction(0)
        for j in m.separating(u, v):
            total += snap[m.walls[j]]
        return total

    def layer_wallspace(self, i):
        snap = self.snapshot(i)
        sub = self.model.submodel(self.layer(i))
        return WeightedWallspace(sub, {w: snap[w] for w in sub.walls})

    def walls_of_layer(self, i):
        return sorted(w for w, k in self.registry.items() if k == i)

    def layer_crossings(self, x):
        """Per layer, how many of its walls separate ``x`` from ``K_1``."""
        m = self.model
        out = {i: 0 for i in range(1, self.depth + 1)}
        for j in separating_walls(m, x, self.layer(1)):
            k = self.registry.get(m.walls[j])
            if k is not None:
                out[k] += 1
        return out

    def frontier(self, i):
        return frontier(self.model, self.layer(i))

    def gaps(self):
        """``d(B(K_{i+1}), K_i)`` for each ``i < L``."""
        out = {}
        for i in range(1, self.depth):
            B = self.frontier(i + 1)
            out[i] = self.wallspace.set_distance(B, self.layer(i)) if B else None
        return out


@dataclass
class ExhaustionReport:
    convex: bool
    median_metric: bool
    restriction: bool
    gaps: dict
    min_gap: Fraction
    witnesses: dict = field(default_factory=dict)

    @property
    def ok(self):
        gap_ok = self.min_gap is None or self.min_gap >= 1
        return self.convex and self.median_metric and self.restriction and gap_ok


def check_exhaustion(exh: LayeredExhaustion, metric_limit=400) -> ExhaustionReport:
    """The three layer properties: each layer is a convex median subspace
    with a median metric, later metrics restrict to earlier ones, and
    consecutive frontiers are at least 1 apart (meaningful for unit
    weights)."""
    m = exh.model
    witnesses = {}
    convex = True
    median_ok = True
    for i in range(1, exh.depth + 1):
        K = exh.layer(i)
        bad = convexity_witness(m, K)
        if bad is not None or (i > 1 and not exh.layer(i - 1) <= K):
            convex = False
            witnesses.setdefault("convex", (i, bad))
        if len(K) <= metric_limit:
            rep = verify_median_metric(exh.layer_wallspace(i))
            if not rep.ok:
                median_ok = False
                witnesses.setdefault("median_metric", (i, rep.violations[0]))
    restriction = True
    for i in range(1, exh.depth):
        K = sorted(exh.layer(i))
        for a, u in enumerate(K):
            for v in K[a + 1:]:
                here = exh.layer_distance(i, u, v)
                for j in range(i + 1, exh.depth + 1):
                    if exh.layer_distance(j, u, v) != here:
                        restriction = False
                        witnesses.setdefault("restriction", (i, j, u, v))
    gaps = exh.gaps()
    known = [g for g in gaps.values() if g is not None]
    return ExhaustionReport(convex, median_ok, restriction, gaps,
                            min(known) if known else None, witnesses)


def _grow(ambient, seed, layers, extensions, weight_of, kind):
    m = ambient.model
    if not isinstance(layers, int) or layers < 1:
        raise InvalidCount(f"layer count must be a positive int, got {layers!r}")
    K = m.vertices_of(seed)
    require_convex(m, K)
    registry = {}
    hull_walls = {}
    ws = ambient
    seed_walls = [m.walls[j] for j in crossing_walls(m, K)] if len(K) > 1 else []
    ws = ws.with_weights({w: weight_of(1) for w in seed_walls})
    registry.update({w: 1 for w in seed_walls})
    chain = [K]
    everything = m.vertex_set
    for i in range(2, layers + 1):
        if K == everything:
            raise AmbientExhausted(
                f"ambient is used up after {i - 1} layers", largest=i - 1
            )
        extra = set()
        if extensions is not None:
            extra = m.vertices_of(extensions(i, chain) if callable(extensions)
                                  else extensions[i - 2])
        grown = K
        if not extra <= K:
            grown, _ = hull(m, K | extra)
        fresh = [m.walls[j] for j in crossing_walls(m, grown)
                 if m.walls[j] not in registry] if len(grown) > 1 else []
        hull_walls[i] = tuple(fresh)
        ws = ws.with_weights({w: weight_of(i) for w in fresh})
        registry.update({w: i for w in fresh})
        th = thicken(ws, grown, weight=weight_of(i))
        if th.unclassified:
            raise InternalInvariantViolation(f"unclassified walls {th.unclassified}")
        for w in th.new_walls:
            if w in registry:
                raise InternalInvariantViolation(f"wall {w!r} registered twice")
            registry[w] = i
        ws = th.wallspace
        K = frozenset(th.region)
        require_convex(m, K)
        chain.append(K)
    return LayeredExhaustion(ambient, tuple(chain), registry, ws, kind, hull_walls)


def build_exhaustion(ambient, seed, layers, extensions=None) -> LayeredExhaustion:
    """Unit-weight exhaustion of a finite ambient model.

    Layer ``i`` is the 1-thickening of ``Hull(K_{i-1} | L_i)``. ``extensions``
    supplies the sets ``L_i`` (a list indexed from layer 2, or a callable
    ``(i, chain)``); by default ``L_i`` is empty so each layer is just the
    thickening of the previous one. Raises AmbientExhausted when the
    ambient runs out before ``layers`` layers are built.
    """
    if isinstance(ambient, MedianModel):
        ambient = WeightedWallspace(ambient)
    exh = _grow(ambient, seed, layers, extensions, unit_weight, "unit")
    report = check_exhaustion(exh)
    if not report.ok:
        raise InternalInvariantViolation(f"exhaustion check failed: {report.witnesses}")
    return exh


@dataclass
class FloydReport:
    crossing_counts: dict   # layer -> max number of its walls separating a vertex from K_1
    max_distance: Fraction  # max d(x, K_1) over K_L
    single_crossing: bool   # every vertex crosses each layer at most once
    witnesses: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.witnesses


def floyd_check(exh: LayeredExhaustion) -> FloydReport:
    """``d(x, K_1)`` equals the layer-weighted crossing count for every
    ``x`` in ``K_L``, and is below 1 when each layer is crossed once."""
    K1 = exh.layer(1)
    counts = {i: 0 for i in range(1, exh.depth + 1)}
    worst = Fraction(0)
    witnesses = []
    single = True
    for x in sorted(exh.layer(exh.depth)):
        if x in K1:
            continue
        m_i = exh.layer_crossings(x)
        d = exh.wallspace.set_distance([x], K1)
        expected = sum((Fraction(c, 2 ** i) for i, c in m_i.items()), Fraction(0))
        if d != expected:
            witnesses.append((x, d, expected))
        once = all(c <= 1 for c in m_i.values())
        single = single and once
        if once and d >= 1:
            witnesses.append((x, d, "bound"))
        for i, c in m_i.items():
            counts[i] = max(counts[i], c)
        worst = max(worst, d)
    return FloydReport(counts, worst, single, witnesses)


def floyd(ambient, seed, layers, extensions=None) -> LayeredExhaustion:
    """Exhaustion whose layer-``i`` walls get weight ``2^-i`` (seed walls 1/2)."""
    if isinstance(ambient, MedianModel):
        ambient = WeightedWallspace(ambient)
    exh = _grow(ambient, seed, layers, extensions, floyd_weight, "floyd")
    report = floyd_check(exh)
    if not report.ok:
        raise InternalInvariantViolation(f"floyd bound failed: {report.witnesses[0]}")
    return exh


# -- retractions and the gap check --------------------------------------------


def retract_layer(exh: LayeredExhaustion, i):
    """Gate map ``K_{i+1} -> K_i``; checks identity on ``K_i``,
    idempotence and that distances never grow."""
    if not 1 <= i < exh.depth:
        raise InvalidCount(f"layer index must be in 1..{exh.depth - 1}, got {i}")
    m = exh.model
    inner = sorted(exh.layer(i))
    outer = sorted(exh.layer(i + 1))
    r = {}
    for v in outer:
        gates = [g for g in inner if all(between(v, k, g) for k in inner)]
        if len(gates) != 1:
            raise GateNotUnique(
                f"{m.label(v)} has {len(gates)} gates in layer {i}"
            )
        r[v] = gates[0]
    ws = exh.wallspace
    for v in inner:
        if r[v] != v:
            raise InternalInvariantViolation(f"retraction moves {m.label(v)}")
    for a, u in enumerate(outer):
        if r[r[u]] != r[u]:
            raise InternalInvariantViolation("retraction is not idempotent")
        for v in outer[a + 1:]:
            if ws.int_distance(r[u], r[v]) > ws.int_distance(u, v):
                raise InternalInvariantViolation(
                    f"retraction stretches {m.label(u)}, {m.label(v)}"
                )
    return r


@dataclass
class GapReport:
    checked: int
    witness: tuple = None   # (m, x, d(x, K_m))

    @property
    def ok(self):
        return self.witness is None


def cauchy_gap_check(exh: LayeredExhaustion, registry=None) -> GapReport:
    """Every ambient vertex outside ``K_{m+1}`` is at distance at least 1
    from ``K_m``, for each ``m < L``.

    Distances use only registered walls (the metric the exhaustion defines);
    walls absent from ``registry`` count as 0. Passing a registry with a
    layer removed gives a negative control.
    """
    registry = exh.registry if registry is None else registry
    m = exh.model
    final = exh.wallspace.weight_map()
    w = [final[x] if x in registry else Fraction(0) for x in m.walls]
    scale = lcm(*(x.denominator for x in w)) if w else 1
    by_pos = [int(w[m.n_walls - 1 - p] * scale) for p in range(m.n_walls)]

    def d(u, v):
        diff, total = u ^ v, 0
        while diff:
            low = diff & -diff
            total += by_pos[low.bit_length() - 1]
            diff ^= low
        return total

    checked = 0
    for k in range(1, exh.depth):
        K = exh.layer(k)
        for x in sorted(m.vertex_set - exh.layer(k + 1)):
            checked += 1
            gap = min(d(x, y) for y in K)
            if gap < scale:
                return GapReport(checked, (k, x, Fraction(gap, scale)))
    return GapReport(checked)
