"""Median, intervals, gates, convexity and hulls on a MedianModel.

All functions accept vertex references (ints, names or bit strings) and
return vertex ints or frozensets of vertex ints.
"""

from dataclasses import dataclass
from itertools import combinations

from .errors import InternalInvariantViolation, NotConvex
from .model import MedianModel, between, maj


def median(model: MedianModel, a, b, c):
    a, b, c = model.vertex(a), model.vertex(b), model.vertex(c)
    return maj(a, b, c)


@dataclass(frozen=True)
class Interval:
    a: int
    b: int
    members: frozenset

    def __contains__(self, x):
        return x in self.members

    def __len__(self):
        return len(self.members)


_CACHE_LIMIT = 1 << 16


def interval_members(model, a, b):
    cache = model._intervals
    key = (a, b) if a <= b else (b, a)
    found = cache.get(key)
    if found is None:
        if len(cache) >= _CACHE_LIMIT:
            cache.clear()
        found = cache[key] = frozenset(x for x in model.vertices if between(a, b, x))
    return found


def interval(model: MedianModel, a, b) -> Interval:
    """All ``x`` with ``abx = x``, found by scanning the vertex set."""
    a, b = model.vertex(a), model.vertex(b)
    return Interval(a, b, interval_members(model, a, b))


def gate(model: MedianModel, a, b, x):
    """Gate (nearest-point retraction) of ``x`` onto ``[a, b]``."""
    return median(model, a, b, x)


def is_convex(model: MedianModel, S) -> bool:
    S = model.vertices_of(S)
    rest = [x for x in model.vertices if x not in S]
    for a, b in combinations(sorted(S), 2):
        for x in rest:
            if between(a, b, x):
                return False
    return True


def convexity_witness(model, S):
    """Least ``(a, b, x)`` with ``a, b`` in ``S`` and ``x`` in ``[a,b]`` outside ``S``."""
    rest = [x for x in model.vertices if x not in S]
    for a, b in combinations(sorted(S), 2):
        for x in rest:
            if between(a, b, x):
                return (a, b, x)
    return None


def gate_preimage(model: MedianModel, a, b, C):
    """Vertices whose gate onto ``[a, b]`` lands in ``C``."""
    a, b = model.vertex(a), model.vertex(b)
    C = model.vertices_of(C)
    return frozenset(x for x in model.vertices if maj(a, b, x) in C)


def triple_intersection(model: MedianModel, a, b, c):
    a, b, c = model.vertex(a), model.vertex(b), model.vertex(c)
    return frozenset(
        x for x in model.vertices
        if between(a, b, x) and between(b, c, x) and between(a, c, x)
    )


def join(model: MedianModel, S):
    """Union of the intervals between pairs of ``S``."""
    S = model.vertices_of(S)
    return _join(model, S)


def _join(model, S):
    pts = sorted(S)
    out = set(S)
    for x in model.vertices:
        if x in out:
            continue
        for i, a in enumerate(pts):
            xa = x ^ a
            if any(xa & (x ^ b) == 0 for b in pts[i + 1:]):
                out.add(x)
                break
    return frozenset(out)


def hull(model: MedianModel, S):
    """Convex hull by iterated join.

    Returns ``(hull, depth)`` where ``depth`` is the least ``k`` with
    ``J^k(S) == J^(k+1)(S)``.
    """
    current = model.vertices_of(S)
    if not current:
        raise ValueError("hull of an empty set")
    for depth in range(len(model.vertices) + 1):
        nxt = _join(model, current)
        if nxt == current:
            return current, depth
        current = nxt
    raise InternalInvariantViolation("iterated join did not stabilize")


def interval_intersection(model: MedianModel, ab, cd):
    """``[a,b] & [c,d]``, computed as ``[abc, abd]`` when nonempty."""
    a, b = (model.vertex(v) for v in ab)
    c, d = (model.vertex(v) for v in cd)
    brute = frozenset(
        x for x in model.vertices if between(a, b, x) and between(c, d, x)
    )
    if not brute:
        return frozenset()
    result = interval_members(model, maj(a, b, c), maj(a, b, d))
    if result != brute:
        raise InternalInvariantViolation(
            "interval intersection formula disagrees with enumeration"
        )
    return result


def gate_to_convex(model: MedianModel, K, v):
    """The unique ``g`` in convex ``K`` lying in ``[v, k]`` for every ``k`` in ``K``.

    Raises NotConvex if no such vertex exists; a convex ``K`` always has
    exactly one.
    """
    K = sorted(K)
    hits = [g for g in K if all(between(v, k, g) for k in K)]
    if len(hits) != 1:
        raise NotConvex(f"{len(hits)} gate candidates for {model.label(v)}")
    return hits[0]


def halfspace_hull(model: MedianModel, S):
    """Intersection of all wall halfspaces containing ``S``."""
    S = model.vertices_of(S)
    out = set(model.vertices)
    for i in range(model.n_walls):
        sides = {model.side(v, i) for v in S}
        if len(sides) == 1:
            (s,) = sides
            out = {v for v in out if model.side(v, i) == s}
    return frozenset(out)


def ball(model: MedianModel, S, radius):
    """Vertices within ``radius`` unit steps (Hamming) of ``S``."""
    S = model.vertices_of(S)
    return frozenset(
        x for x in model.vertices
        if min((x ^ s).bit_count() for s in S) <= radius
    )


def center(model: MedianModel):
    """Least vertex of minimal eccentricity in the unit-weight metric."""
    best = None
    for v in model.vertices:
        ecc = max((v ^ u).bit_count() for u in model.vertices)
        if best is None or ecc < best[0]:
            best = (ecc, v)
    return best[1]
