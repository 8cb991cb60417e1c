"""Explicit median tables: axiom verification and Sholander reconstruction."""

from dataclasses import dataclass, field
from itertools import permutations, product

import numpy as np

from .model import MedianModel, maj

EXHAUSTIVE_LIMIT = 32

LAWS = ("majority", "symmetry", "distributivity", "associativity", "long_distributivity")


class MedianTable:
    """A ternary operation on ``elements`` stored as an index array.

    ``op[i, j, k]`` is the index of the value of the triple of elements
    ``(i, j, k)``. Nothing is assumed about the operation; use
    ``verify_axioms`` to check it.
    """

    def __init__(self, elements, op):
        self.elements = tuple(elements)
        self.op = np.asarray(op, dtype=np.int32)
        n = len(self.elements)
        if self.op.shape != (n, n, n):
            raise ValueError(f"table shape {self.op.shape} does not match {n} elements")
        if n and (self.op.min() < 0 or self.op.max() >= n):
            raise ValueError("table values out of range")
        self._index = {e: i for i, e in enumerate(self.elements)}

    @classmethod
    def from_function(cls, elements, fn):
        elements = tuple(elements)
        index = {e: i for i, e in enumerate(elements)}
        n = len(elements)
        op = np.empty((n, n, n), dtype=np.int32)
        for i, j, k in product(range(n), repeat=3):
            op[i, j, k] = index[fn(elements[i], elements[j], elements[k])]
        return cls(elements, op)

    @classmethod
    def from_model(cls, model: MedianModel):
        n = len(model.vertices)
        index = {v: i for i, v in enumerate(model.vertices)}
        op = np.empty((n, n, n), dtype=np.int32)
        for i, a in enumerate(model.vertices):
            for j, b in enumerate(model.vertices):
                op[i, j] = [index[maj(a, b, c)] for c in model.vertices]
        return cls(model.vertices, op)

    def __len__(self):
        return len(self.elements)

    def __call__(self, a, b, c):
        i, j, k = self._index[a], self._index[b], self._index[c]
        return self.elements[self.op[i, j, k]]

    def __eq__(self, other):
        if not isinstance(other, MedianTable):
            return NotImplemented
        if set(self.elements) != set(other.elements):
            return False
        perm = np.array([other._index[e] for e in self.elements])
        remapped = perm[self.op]
        return bool(np.array_equal(remapped, other.op[np.ix_(perm, perm, perm)]))

    __hash__ = None


@dataclass
class AxiomReport:
    size: int
    exhaustive: bool
    checked: dict = field(default_factory=dict)
    violations: dict = field(default_factory=dict)

    @property
    def ok(self):
        return not any(self.violations.values())

    @property
    def n_violations(self):
        return sum(len(v) for v in self.violations.values())

    def to_dict(self, label=str):
        return {
            "size": self.size,
            "exhaustive": self.exhaustive,
            "ok": self.ok,
            "checked": dict(self.checked),
            "violations": {
                law: [[label(x) for x in t] for t in tuples]
                for law, tuples in self.violations.items()
            },
        }


def _sides(op, law, idx):
    """Left and right sides of ``law`` evaluated on index arrays ``idx``."""
    a, b, c, d, e = idx
    if law == "majority":
        return op[a, a, b], a
    if law == "distributivity":
        return op[a, b, op[c, d, e]], op[op[a, b, c], op[a, b, d], e]
    if law == "associativity":
        # (axb)xc = ax(bxc) with x := e
        return op[op[a, e, b], e, c], op[a, e, op[b, e, c]]
    if law == "long_distributivity":
        # ab(xyz) = (abx)(aby)(abz) with x, y, z := c, d, e
        return op[a, b, op[c, d, e]], op[op[a, b, c], op[a, b, d], op[a, b, e]]
    raise ValueError(law)


_ARITY = {"majority": 2, "symmetry": 3, "distributivity": 5, "associativity": 4,
          "long_distributivity": 5}


def _violations_for(op, law, idx):
    """Boolean mask of violations of ``law`` over the given index arrays."""
    a, b, c = idx[0], idx[1], idx[2]
    if law == "symmetry":
        base = op[a, b, c]
        bad = np.zeros(base.shape, dtype=bool)
        for p in permutations((a, b, c)):
            bad |= op[p] != base
        return bad
    lhs, rhs = _sides(op, law, idx)
    return lhs != rhs


def verify_axioms(table: MedianTable, budget: int = 20000, seed: int = 0,
                  exhaustive_limit: int = EXHAUSTIVE_LIMIT) -> AxiomReport:
    """Check majority, symmetry, distributivity, associativity and the long
    distributive law.

    Exhaustive when the table has at most ``exhaustive_limit`` elements;
    otherwise ``budget`` seeded random tuples are drawn per law. Every
    violating tuple found is listed in the report, as element tuples whose
    arity is that of the law.
    """
    n = len(table)
    op = table.op
    exhaustive = n <= exhaustive_limit
    report = AxiomReport(size=n, exhaustive=exhaustive)
    rng = np.random.default_rng(seed)
    for law in LAWS:
        k = _ARITY[law]
        found = []
        checked = 0
        if exhaustive:
            # chunk over the first coordinate to bound memory at n**(k-1)
            for first in range(n):
                grids = np.meshgrid(*([np.array([first])] + [np.arange(n)] * (k - 1)),
                                    indexing="ij")
                flat = [g.ravel() for g in grids]
                idx = flat + [flat[0]] * (5 - k)
                bad = _violations_for(op, law, idx)
                checked += bad.size
                for pos in np.flatnonzero(bad):
                    found.append(tuple(table.elements[int(f[pos])] for f in flat))
        else:
            samples = rng.integers(0, n, size=(k, budget))
            idx = [samples[i] for i in range(k)] + [samples[0]] * (5 - k)
            bad = _violations_for(op, law, idx)
            checked = budget
            seen = set()
            for pos in np.flatnonzero(bad):
                t = tuple(table.elements[int(samples[i, pos])] for i in range(k))
                if t not in seen:
                    seen.add(t)
                    found.append(t)
        report.checked[law] = checked
        report.violations[law] = found
    return report


def verify_model_axioms(model: MedianModel) -> AxiomReport:
    """Exhaustive axiom check for a bitvector model of any size.

    The model's operation is coordinatewise majority, so each law holds on
    the model iff the vertex set is median-closed and the law holds on the
    projection of the vertex set to every wall. Closure is scanned over all
    triples; each projection is a subset of ``{0, 1}`` and is checked
    exhaustively.
    """
    from .model import closure_violation

    report = AxiomReport(size=len(model), exhaustive=True)
    witness = closure_violation(model.vertices, model.n_walls)
    n = len(model)
    report.checked["closure"] = n * (n + 1) * (n + 2) // 6  # unordered triples
    report.violations["closure"] = [witness] if witness else []
    for i in range(model.n_walls):
        values = sorted({model.side(v, i) for v in model.vertices})
        proj = MedianTable.from_function(values, maj)
        sub = verify_axioms(proj, exhaustive_limit=2)
        for law in LAWS:
            report.checked[law] = report.checked.get(law, 0) + sub.checked[law]
            report.violations.setdefault(law, [])
            report.violations[law].extend((model.walls[i],) + t for t in sub.violations[law])
    return report


# -- Sholander -------------------------------------------------------------


@dataclass
class SholanderResult:
    table: MedianTable = None
    failed_property: int = None
    witness: tuple = None

    @property
    def ok(self):
        return self.failed_property is None


def interval_map_of(model: MedianModel):
    """Interval map ``(a, b) -> frozenset`` of a model, over vertex ints."""
    from .algebra import interval_members

    return {
        (a, b): interval_members(model, a, b)
        for a in model.vertices for b in model.vertices
    }


def sholander_median(interval_map) -> SholanderResult:
    """Rebuild a median table from an interval map, if it satisfies
    Sholander's three properties.

    The properties are: ``I(a,a) = {a}``; ``c, d`` in ``I(a,b)`` implies
    ``I(d,c)`` is inside ``I(a,b)``; and every triple intersection
    ``I(a,b) & I(b,c) & I(a,c)`` is a single point. The first failure is
    returned with a witness; on success the table maps each triple to its
    triple-intersection point.
    """
    carrier = sorted({x for pair in interval_map for x in pair})
    index = {x: i for i, x in enumerate(carrier)}
    n = len(carrier)
    bits = {}
    for a in carrier:
        for b in carrier:
            try:
                members = interval_map[(a, b)]
            except KeyError:
                return SholanderResult(failed_property=0, witness=(a, b))
            m = 0
            for x in members:
                m |= 1 << index[x]
            bits[a, b] = m

    for a in carrier:
        if bits[a, a] != 1 << index[a]:
            return SholanderResult(failed_property=1, witness=(a,))

    for a in carrier:
        for b in carrier:
            S = bits[a, b]
            inside = [x for x in carrier if S >> index[x] & 1]
            for i, c in enumerate(inside):
                for d in inside[i:]:
                    if bits[d, c] & ~S or bits[c, d] & ~S:
                        return SholanderResult(failed_property=2, witness=(a, b, c, d))

    op = np.empty((n, n, n), dtype=np.int32)
    for i, a in enumerate(carrier):
        for j, b in enumerate(carrier):
            ab = bits[a, b]
            for k, c in enumerate(carrier):
                t = ab & bits[b, c] & bits[a, c]
                if t.bit_count() != 1:
                    return SholanderResult(failed_property=3, witness=(a, b, c))
                op[i, j, k] = t.bit_length() - 1
    return SholanderResult(table=MedianTable(carrier, op))
