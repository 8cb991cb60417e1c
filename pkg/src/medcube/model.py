"""Finite median algebras as median-closed sets of bitvectors.

A vertex is stored as a Python ``int``. Wall ``i`` (0-based, in the order of
``model.walls``) is the bit at position ``n - 1 - i``, so the integer order of
vertices is the lexicographic order of their bit strings. Every search in the
package walks vertices in this order and returns the least witness it finds.
"""

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import InvalidModel, NotMedianClosed, TooLarge, UnknownVertex, UnknownWall


def maj(a: int, b: int, c: int) -> int:
    """Coordinatewise majority of three bitvectors."""
    return (a & b) | (a & c) | (b & c)


def between(a: int, b: int, x: int) -> bool:
    """True iff ``x`` agrees with ``a`` wherever ``a`` and ``b`` agree."""
    return (x ^ a) & ~(a ^ b) == 0


def parse_bits(text: str) -> int:
    return int(text, 2) if text else 0


def closure_violation(vertices: Sequence[int], n_walls: int):
    """Return a triple whose majority leaves ``vertices``, or None.

    Exhaustive over unordered triples; the lexicographically least violating
    triple is returned.
    """
    verts = sorted(set(vertices))
    if not verts:
        return None
    if _closed_by_pair_constraints(verts, n_walls):
        return None
    if n_walls <= 63:
        arr = np.array(verts, dtype=np.uint64)
        for i, a in enumerate(arr):
            rest = arr[i:]
            ab = a & rest
            # rows: b = rest[j]; cols: c = rest[k]; only j <= k matters
            m = ab[:, None] | (a & rest)[None, :] | (rest[:, None] & rest[None, :])
            pos = np.searchsorted(arr, m)
            pos = np.minimum(pos, len(arr) - 1)
            bad = arr[pos] != m
            if bad.any():
                js, ks = np.nonzero(np.triu(bad))
                if len(js):
                    order = np.lexsort((ks, js))
                    j, k = int(js[order[0]]), int(ks[order[0]])
                    return (verts[i], verts[i + j], verts[i + k])
        return None
    vset = set(verts)
    for i, a in enumerate(verts):
        for j in range(i, len(verts)):
            b = verts[j]
            for c in verts[j:]:
                if maj(a, b, c) not in vset:
                    return (a, b, c)
    return None


def _pair_solutions(verts, n):
    """Every bitvector satisfying the 2-clauses that hold on ``verts``.

    A bitvector set is majority-closed iff it equals this solution set, and
    for any set the solutions form its median closure. They are enumerated
    with full implication closure, which never backtracks.
    """
    if n == 0:
        yield 0
        return
    B = np.array([[(v >> (n - 1 - i)) & 1 for i in range(n)] for v in verts], dtype=np.int64)
    ones, zeros = B, 1 - B
    seen = {
        (1, 1): ones.T @ ones > 0, (1, 0): ones.T @ zeros > 0,
        (0, 1): zeros.T @ ones > 0, (0, 0): zeros.T @ zeros > 0,
    }
    # literal "wall i has value s" is index 2*i + s
    direct = [set() for _ in range(2 * n)]
    for (a, b), present in seen.items():
        for i, j in zip(*np.nonzero(~present)):
            i, j = int(i), int(j)
            if i == j:
                if a == b:       # value a never occurs at wall i
                    direct[2 * i + a].add(2 * i + 1 - a)
                continue
            direct[2 * i + a].add(2 * j + 1 - b)
    closure = []   # per literal: (mask forced to 1, mask forced to 0)
    for lit in range(2 * n):
        reach, stack = {lit}, [lit]
        while stack:
            for nxt in direct[stack.pop()]:
                if nxt not in reach:
                    reach.add(nxt)
                    stack.append(nxt)
        pos = neg = 0
        for x in reach:
            bit = 1 << (n - 1 - x // 2)
            if x % 2:
                pos |= bit
            else:
                neg |= bit
        closure.append((pos, neg))

    stack = [(0, 0, 0)]
    while stack:
        i, pos, neg = stack.pop()
        while i < n and (pos | neg) & (1 << (n - 1 - i)):
            i += 1
        if i == n:
            yield pos
            continue
        for s in (1, 0):
            cp, cn = closure[2 * i + s]
            p, q = pos | cp, neg | cn
            if not p & q:
                stack.append((i + 1, p, q))


def _closed_by_pair_constraints(verts, n):
    vset = set(verts)
    count = 0
    for v in _pair_solutions(verts, n):
        count += 1
        if v not in vset or count > len(vset):
            return False
    return True


def median_closure(vertices: Iterable[int], limit=None) -> frozenset:
    """Smallest median-closed set of bitvectors containing ``vertices``.

    Raises TooLarge as soon as the set grows past ``limit``.
    """
    verts = sorted(set(vertices))
    if not verts:
        return frozenset()
    n = max(verts).bit_length()
    out = set()
    for v in _pair_solutions(verts, n):
        out.add(v)
        if limit is not None and len(out) > limit:
            raise TooLarge(f"median closure exceeds {limit} vertices")
    return frozenset(out)


@dataclass(frozen=True, eq=False)
class MedianModel:
    """A finite median algebra presented as bitvectors over named walls.

    ``names`` maps vertex ints to optional display names. With
    ``allow_parallel`` two walls may induce the same partition of the
    vertex set.
    """

    walls: tuple
    vertices: tuple
    names: Mapping[int, str] = field(default_factory=dict)
    allow_parallel: bool = False

    def __init__(self, walls, vertices, names=None, allow_parallel=False, check=True):
        walls = tuple(walls)
        verts = list(vertices)
        if len(set(verts)) != len(verts):
            raise InvalidModel("duplicate vertices")
        verts = tuple(sorted(verts))
        object.__setattr__(self, "walls", walls)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "names", dict(names or {}))
        object.__setattr__(self, "allow_parallel", bool(allow_parallel))
        object.__setattr__(self, "_vset", frozenset(verts))
        object.__setattr__(self, "_by_name", {v: k for k, v in self.names.items()})
        object.__setattr__(self, "_wall_index", {w: i for i, w in enumerate(walls)})
        object.__setattr__(self, "_intervals", {})
        if check:
            self.validate()

    # -- structure -------------------------------------------------------

    def validate(self):
        n = len(self.walls)
        if not self.vertices:
            raise InvalidModel("a median model needs at least one vertex")
        if len(self._wall_index) != n:
            raise InvalidModel("duplicate wall names")
        if len(self._by_name) != len(self.names):
            raise InvalidModel("duplicate vertex names")
        for v in self.vertices:
            if v < 0 or v >> n:
                raise InvalidModel(f"vertex {v} does not fit in {n} walls")
        for v in self.names:
            if v not in self._vset:
                raise InvalidModel(f"name given for unknown vertex {self.bits(v)}")
        if not self.allow_parallel:
            seen = {}
            for i in range(n):
                key = self.partition_key(i)
                if key in seen:
                    raise InvalidModel(
                        f"walls {self.walls[seen[key]]!r} and {self.walls[i]!r} "
                        "induce the same partition"
                    )
                seen[key] = i
        witness = closure_violation(self.vertices, n)
        if witness is not None:
            labels = ", ".join(self.label(v) for v in witness)
            raise NotMedianClosed(
                f"majority of ({labels}) is {self.bits(maj(*witness))}, not a vertex",
                witness=witness,
            )

    @property
    def n_walls(self):
        return len(self.walls)

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def __contains__(self, v):
        return v in self._vset

    def __eq__(self, other):
        if not isinstance(other, MedianModel):
            return NotImplemented
        return self.walls == other.walls and self.vertices == other.vertices

    def __hash__(self):
        return hash((self.walls, self.vertices))

    def __repr__(self):
        return f"MedianModel({len(self.walls)} walls, {len(self.vertices)} vertices)"

    @property
    def vertex_set(self):
        return self._vset

    def mask(self, i):
        return 1 << (len(self.walls) - 1 - i)

    def side(self, v, i):
        return (v >> (len(self.walls) - 1 - i)) & 1

    def partition_key(self, i):
        ones = frozenset(v for v in self.vertices if self.side(v, i))
        zeros = self._vset - ones
        return frozenset((ones, zeros))

    def is_constant(self, i):
        s = self.side(self.vertices[0], i)
        return all(self.side(v, i) == s for v in self.vertices)

    def wall_index(self, wall):
        if isinstance(wall, int) and not isinstance(wall, bool):
            if 0 <= wall < len(self.walls):
                return wall
        elif wall in self._wall_index:
            return self._wall_index[wall]
        raise UnknownWall(f"unknown wall {wall!r}")

    def separating(self, u, v):
        """Indices of walls separating ``u`` and ``v``."""
        diff = u ^ v
        n = len(self.walls)
        return [i for i in range(n) if (diff >> (n - 1 - i)) & 1]

    # -- naming ----------------------------------------------------------

    def bits(self, v):
        n = len(self.walls)
        return format(v, f"0{n}b") if n else ""

    def label(self, v):
        return self.names.get(v) or self.bits(v)

    def vertex(self, ref):
        """Resolve a vertex reference: an int, a name, or a bit string."""
        if isinstance(ref, (int, np.integer)) and not isinstance(ref, bool):
            v = int(ref)
            if v in self._vset:
                return v
            raise UnknownVertex(f"unknown vertex {ref!r}")
        if isinstance(ref, str):
            if ref in self._by_name:
                return self._by_name[ref]
            if len(ref) == len(self.walls) and set(ref) <= {"0", "1"}:
                v = parse_bits(ref)
                if v in self._vset:
                    return v
        if isinstance(ref, tuple) and len(ref) == len(self.walls) and set(ref) <= {0, 1}:
            v = parse_bits("".join(map(str, ref)))
            if v in self._vset:
                return v
        raise UnknownVertex(f"unknown vertex {ref!r}")

    def vertices_of(self, refs):
        return frozenset(self.vertex(r) for r in refs)

    def labels(self, vs):
        return [self.label(v) for v in sorted(vs)]

    # -- derived models --------------------------------------------------

    def submodel(self, vertices, drop_constant=True, check=False):
        """The median subalgebra on ``vertices`` with constant walls removed.

        Walls inducing identical partitions of the subset are kept; the
        result is flagged ``allow_parallel`` when that happens.
        """
        verts = sorted(set(vertices))
        if not verts:
            raise InvalidModel("empty submodel")
        for v in verts:
            if v not in self._vset:
                raise UnknownVertex(f"unknown vertex {self.bits(v)}")
        n = len(self.walls)
        keep = [
            i for i in range(n)
            if not drop_constant or len({self.side(v, i) for v in verts}) == 2
        ]

        def project(v):
            out = 0
            for i in keep:
                out = (out << 1) | self.side(v, i)
            return out

        new = {v: project(v) for v in verts}
        names = {new[v]: self.names[v] for v in verts if v in self.names}
        sub = MedianModel(
            [self.walls[i] for i in keep], new.values(), names,
            allow_parallel=True, check=False,
        )
        parallel = len({sub.partition_key(i) for i in range(len(keep))}) < len(keep)
        object.__setattr__(sub, "allow_parallel", parallel or self.allow_parallel)
        if check:
            sub.validate()
        return sub

    def lift(self, sub, v):
        """Map a vertex of ``sub`` (a submodel of self) back into self."""
        name = sub.names.get(v)
        if name is not None and name in self._by_name:
            return self._by_name[name]
        wanted = {w: sub.side(v, i) for i, w in enumerate(sub.walls)}
        hits = [
            u for u in self.vertices
            if all(self.side(u, self._wall_index[w]) == s for w, s in wanted.items())
        ]
        if len(hits) != 1:
            raise UnknownVertex(f"cannot lift {sub.label(v)} uniquely")
        return hits[0]


def from_bitstrings(walls, rows, names=None, **kw):
    """Build a model from bit strings such as ``["00", "10", "11"]``."""
    verts = [parse_bits(r) for r in rows]
    named = None
    if names is not None:
        named = dict(zip(verts, names))
    return MedianModel(walls, verts, named, **kw)
