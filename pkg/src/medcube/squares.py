"""Median squares and cubes: classification, product structure, the flag
construction and the square-producing lemmas."""

import enum
from dataclasses import dataclass
from itertools import combinations, product

from .algebra import interval_members
from .errors import (
    EmbeddingCheckFailed,
    InternalInvariantViolation,
    NotASquare,
    PreconditionViolated,
    PrerequisiteSquareMissing,
)
from .model import MedianModel, between, maj


class SquareKind(enum.Enum):
    NOT_SQUARE = "NotSquare"
    POINT = "Point"
    DEGENERATE_INTERVAL = "DegenerateInterval"
    SQUARE = "Square"


@dataclass(frozen=True)
class SquareClass:
    quad: tuple
    kind: SquareKind

    @property
    def is_square(self):
        return self.kind is SquareKind.SQUARE


def _classify(q):
    for i in range(4):
        if maj(q[i - 1], q[i], q[(i + 1) % 4]) != q[i]:
            return SquareKind.NOT_SQUARE
    distinct = len(set(q))
    if distinct == 1:
        return SquareKind.POINT
    if distinct == 4:
        return SquareKind.SQUARE
    a1, a2, a3, a4 = q
    if distinct == 2 and ((a1 == a2 and a3 == a4) or (a2 == a3 and a4 == a1)):
        return SquareKind.DEGENERATE_INTERVAL
    # the square equations force every other coincidence pattern to collapse
    raise InternalInvariantViolation(f"impossible degenerate square {q}")


def classify_quadruple(model: MedianModel, a1, a2, a3, a4) -> SquareClass:
    """Classify ``(a1, a2, a3, a4)`` read cyclically around a square."""
    q = tuple(model.vertex(v) for v in (a1, a2, a3, a4))
    return SquareClass(q, _classify(q))


def iter_squares(model: MedianModel):
    """Every labelled median square ``(a, b, c, d)`` of the model.

    The fourth corner of a square is determined by the other three, so the
    scan runs over ``a``, ``c`` and ``b`` in ``[a, c]``.
    """
    for a in model.vertices:
        for c in model.vertices:
            if (a ^ c).bit_count() < 2:
                continue
            for b in interval_members(model, a, c):
                if b == a or b == c:
                    continue
                d = a ^ b ^ c
                if d in model and _classify((a, b, c, d)) is SquareKind.SQUARE:
                    yield (a, b, c, d)


@dataclass(frozen=True)
class SquareIso:
    """The product decomposition ``[a,c] ~ [a,b] x [a,d]`` of a square."""

    square: tuple
    phi: dict   # (y, z) -> x
    psi: dict   # x -> (y, z)


def square_product_iso(model: MedianModel, square) -> SquareIso:
    """Explicit tables for ``phi(y, z) = yzc`` and ``psi(x) = (abx, adx)``.

    Both composites are checked to be identities.
    """
    cls = classify_quadruple(model, *square)
    if not cls.is_square:
        raise NotASquare(f"{[model.label(v) for v in cls.quad]} is {cls.kind.value}")
    a, b, c, d = cls.quad
    ab = sorted(interval_members(model, a, b))
    ad = sorted(interval_members(model, a, d))
    ac = sorted(interval_members(model, a, c))
    phi = {(y, z): maj(y, z, c) for y in ab for z in ad}
    psi = {x: (maj(a, b, x), maj(a, d, x)) for x in ac}
    for x in ac:
        if phi.get(psi[x]) != x:
            raise InternalInvariantViolation(f"phi(psi({model.label(x)})) != x")
    for yz, x in phi.items():
        if psi.get(x) != yz:
            raise InternalInvariantViolation("psi(phi(y, z)) != (y, z)")
    return SquareIso(cls.quad, phi, psi)


def find_square_in_interval(model: MedianModel, a, b):
    """A median square inside ``[a, b]`` with corner ``a``, or None.

    None certifies that ``[a, b]`` minus ``a`` is convex. The witness is
    ``(a, c, e, d)`` where ``(c, d)`` is the least pair of the punctured
    interval with ``a`` in ``[c, d]`` and ``e = bcd``.
    """
    a, b = model.vertex(a), model.vertex(b)
    punctured = sorted(interval_members(model, a, b) - {a})
    for i, c in enumerate(punctured):
        for d in punctured[i + 1:]:
            if between(c, d, a):
                e = maj(b, c, d)
                quad = (a, c, e, d)
                if _classify(quad) is not SquareKind.SQUARE:
                    raise InternalInvariantViolation(f"degenerate witness {quad}")
                return quad
    return None


def double_projection(model: MedianModel, a, b, c, d) -> SquareClass:
    """Project ``d`` onto ``[a,b]`` and ``a`` onto ``[c,d]``.

    Requires ``abc = b``, ``bcd = c`` and four distinct points; the result
    ``(abd, b, c, cda)`` always satisfies the square equations, possibly
    degenerately.
    """
    a, b, c, d = (model.vertex(v) for v in (a, b, c, d))
    failed = []
    if maj(a, b, c) != b:
        failed.append("abc = b")
    if maj(b, c, d) != c:
        failed.append("bcd = c")
    if len({a, b, c, d}) != 4:
        failed.append("a, b, c, d distinct")
    if failed:
        raise PreconditionViolated("failed: " + ", ".join(failed))
    a_hat = maj(a, b, d)
    d_hat = maj(c, d, a)
    quad = (a_hat, b, c, d_hat)
    kind = _classify(quad)
    if kind is SquareKind.NOT_SQUARE:
        raise InternalInvariantViolation(f"double projection {quad} is not a square")
    return SquareClass(quad, kind)


# -- cubes -----------------------------------------------------------------


@dataclass(frozen=True)
class CubeWitness:
    """A median embedding of ``{0,1}^k``; keys of ``vertex_map`` are bit tuples."""

    corner: int
    tips: tuple
    vertex_map: dict

    @property
    def dim(self):
        return len(self.tips)

    @property
    def vertex_set(self):
        return frozenset(self.vertex_map.values())

    @property
    def far_corner(self):
        return self.vertex_map[(1,) * self.dim]


def is_median_embedding(vertex_map, k):
    """Injective and majority-preserving on all triples of ``{0,1}^k``."""
    points = list(product((0, 1), repeat=k))
    if len(set(vertex_map[p] for p in points)) != len(points):
        return False
    for p, q, r in product(points, repeat=3):
        m = tuple(int(x + y + z >= 2) for x, y, z in zip(p, q, r))
        if vertex_map[m] != maj(vertex_map[p], vertex_map[q], vertex_map[r]):
            return False
    return True


def _span(a, tips, squares):
    """Vertex map of the cube spanned by ``a`` and ``tips`` (keys are frozensets
    of tip positions), following the inductive construction."""
    n = len(tips)
    if n == 0:
        return {frozenset(): a}
    if n == 1:
        return {frozenset(): a, frozenset({0}): tips[0]}
    if n == 2:
        return {frozenset(): a, frozenset({0}): tips[0], frozenset({1}): tips[1],
                frozenset({0, 1}): squares[0, 1]}
    # C_n: spanned by tips 0..n-2; C_{n-1}: tips 0..n-3 and n-1.
    lo = list(range(n - 2))
    c_n = _span(a, tips[:-1], squares)
    sub_squares = {
        (i, j): squares[_reindex(i, n), _reindex(j, n)]
        for i in range(n - 1) for j in range(i + 1, n - 1)
    }
    c_n1 = _span(a, tips[:-2] + (tips[-1],), sub_squares)
    a_prime = c_n[frozenset(lo)]
    x = c_n[frozenset(lo + [n - 2])]
    y = c_n1[frozenset(lo + [n - 2])]
    a_pen, a_last = tips[-2], tips[-1]
    # squares (a_{n-1}, x, a', a) and (a_n, y, a', a) share the edge {a', a}
    for quad in ((a_pen, x, a_prime, a), (a_last, y, a_prime, a), (a_pen, x, y, a_last)):
        if _classify(quad) is not SquareKind.SQUARE:
            raise EmbeddingCheckFailed(f"rectangle {quad} is not a median square")
    # Hull of square (a_{n-1}, x, y, a_n) is [a_{n-1}, x] x [a_{n-1}, a_n]
    # via (u, v) -> u v y; the face C x {a_{n-1}} sits in the first factor.
    corners = {(0, 0): a, (1, 0): a_pen, (0, 1): a_last, (1, 1): squares[n - 2, n - 1]}
    out = {}
    for T in range(1 << (n - 2)):
        base = frozenset(i for i in lo if T >> i & 1)
        u = c_n[base | {n - 2}]
        for (s, t), q in corners.items():
            key = base | ({n - 2} if s else set()) | ({n - 1} if t else set())
            out[frozenset(key)] = maj(u, q, y)
    return out


def _reindex(i, n):
    # position i in the C_{n-1} tip list (0..n-3, then the last tip n-1)
    return i if i < n - 2 else n - 1


def flag_span(model: MedianModel, a, tips, pairwise_squares=None) -> CubeWitness:
    """Cube spanned by edges ``{a, a_i}`` that pairwise span squares.

    ``pairwise_squares`` maps index pairs ``(i, j)``, ``i < j``, to the
    fourth corner ``a_ij`` of the square ``(a, a_i, a_ij, a_j)``. Missing
    entries are looked up in the model.
    """
    a = model.vertex(a)
    tips = tuple(model.vertex(t) for t in tips)
    n = len(tips)
    squares = {}
    for i, j in combinations(range(n), 2):
        given = None if pairwise_squares is None else pairwise_squares.get((i, j))
        if given is None:
            given = square_corner(model, a, tips[i], tips[j])
            if given is None:
                raise PrerequisiteSquareMissing(
                    f"tips {model.label(tips[i])}, {model.label(tips[j])} span no square at "
                    f"{model.label(a)}"
                )
        given = model.vertex(given)
        if _classify((a, tips[i], given, tips[j])) is not SquareKind.SQUARE:
            raise PrerequisiteSquareMissing(
                f"({model.label(a)}, {model.label(tips[i])}, {model.label(given)}, "
                f"{model.label(tips[j])}) is not a median square"
            )
        squares[i, j] = given
    if len(set(tips) | {a}) != n + 1:
        raise PreconditionViolated("corner and tips must be distinct")
    spanned = _span(a, tips, squares)
    vertex_map = {
        tuple(int(i in S) for i in range(n)): v for S, v in spanned.items()
    }
    if not all(v in model for v in vertex_map.values()) or not is_median_embedding(vertex_map, n):
        raise EmbeddingCheckFailed("constructed map is not a median embedding")
    return CubeWitness(a, tips, vertex_map)


def square_corner(model, a, b, d):
    """The fourth corner ``c`` of a square ``(a, b, c, d)``, if one exists."""
    c = b ^ a ^ d
    if c in model and len({a, b, c, d}) == 4 and _classify((a, b, c, d)) is SquareKind.SQUARE:
        return c
    return None
