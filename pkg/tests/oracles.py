"""Slow reference implementations used to cross-check the library.

These work on bit strings and plain Python sets and avoid the library's
own bit tricks, so agreement is meaningful.
"""

from fractions import Fraction
from itertools import combinations, product


def bitstr(model, v):
    return format(v, f"0{model.n_walls}b") if model.n_walls else ""


def majority_str(a, b, c):
    return "".join("1" if (x + y + z).count("1") >= 2 else "0" for x, y, z in zip(a, b, c))


def median(model, a, b, c):
    s = majority_str(bitstr(model, a), bitstr(model, b), bitstr(model, c))
    return int(s, 2) if s else 0


def hamming(model, u, v):
    return sum(x != y for x, y in zip(bitstr(model, u), bitstr(model, v)))


def interval(model, a, b):
    """Geodesic interval in the Hamming metric."""
    d = hamming(model, a, b)
    return {x for x in model.vertices if hamming(model, a, x) + hamming(model, x, b) == d}


def convex(model, S):
    S = set(S)
    return all(interval(model, a, b) <= S for a, b in combinations(sorted(S), 2))


def hull_by_halfspaces(model, S):
    """Intersection of every wall side containing ``S``."""
    S = [bitstr(model, v) for v in S]
    out = set()
    for v in model.vertices:
        s = bitstr(model, v)
        if all(s[i] == S[0][i] for i in range(model.n_walls)
               if len({t[i] for t in S}) == 1):
            out.add(v)
    return out


def hull_by_subsets(model, S):
    """Smallest convex superset, by enumerating every superset (tiny models)."""
    S = set(S)
    rest = [v for v in model.vertices if v not in S]
    best = set(model.vertices)
    for k in range(len(rest) + 1):
        for extra in combinations(rest, k):
            cand = S | set(extra)
            if convex(model, cand):
                return cand  # the first convex superset found is the smallest
    return best


def cubes_with_corner(model, a, tips):
    """Every median embedding of ``{0,1}^n`` sending 0 to ``a`` and the unit
    vectors to ``tips``, found by backtracking over all vertices."""
    n = len(tips)
    pts = sorted(product((0, 1), repeat=n), key=lambda p: (sum(p), p))
    fixed = {tuple(0 for _ in range(n)): a}
    for i, t in enumerate(tips):
        fixed[tuple(int(j == i) for j in range(n))] = t
    verts = list(model.vertices)
    found = []

    def maj_pt(p, q, r):
        return tuple(int(x + y + z >= 2) for x, y, z in zip(p, q, r))

    def consistent(f, new=None):
        # with ``new`` given, only triples involving it need checking
        keys = list(f)
        if len(set(f.values())) != len(f):
            return False
        for p, q, r in product(keys, repeat=3):
            if new is not None and new not in (p, q, r, maj_pt(p, q, r)):
                continue
            m = maj_pt(p, q, r)
            if m in f and f[m] != median(model, f[p], f[q], f[r]):
                return False
        return True

    def extend(k, f):
        if k == len(pts):
            found.append(dict(f))
            return
        p = pts[k]
        if p in f:
            extend(k + 1, f)
            return
        for v in verts:
            if v in f.values():
                continue
            f[p] = v
            if consistent(f, p):
                extend(k + 1, f)
            del f[p]

    if consistent(fixed):
        extend(0, dict(fixed))
    return found


def rank_by_patterns(model):
    """Largest family of walls realising every sign pattern on the vertices."""
    n = model.n_walls
    rows = [bitstr(model, v) for v in model.vertices]
    best = 0
    for k in range(1, n + 1):
        ok = False
        for walls in combinations(range(n), k):
            if len({tuple(r[i] for i in walls) for r in rows}) == 2 ** k:
                ok = True
                break
        if not ok:
            break
        best = k
    return best


def weighted_distance(model, weights, u, v):
    su, sv = bitstr(model, u), bitstr(model, v)
    return sum((Fraction(weights[w]) for w, x, y in zip(model.walls, su, sv) if x != y),
               Fraction(0))


def gate(model, K, v):
    """Closest point of ``K`` in the Hamming metric (unique for convex K)."""
    d = min(hamming(model, v, k) for k in K)
    near = [k for k in K if hamming(model, v, k) == d]
    assert len(near) == 1
    return near[0]
