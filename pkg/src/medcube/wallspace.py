"""Halfspace systems, ultrafilters and the dual cubulation."""

from dataclasses import dataclass

from .errors import InternalInvariantViolation, InvalidModel, NotRealized
from .model import MedianModel


@dataclass(frozen=True)
class HalfspaceSystem:
    """Walls over a finite vertex set, each with its two halfspaces.

    The vertex set is arbitrary bitvectors (it need not be median-closed);
    halfspace ``(i, s)`` is the set of vertices whose bit ``i`` equals ``s``.
    """

    walls: tuple
    vertices: frozenset
    halfspaces: tuple  # per wall: (side-0 set, side-1 set)

    @classmethod
    def from_vertices(cls, walls, vertices):
        walls = tuple(walls)
        vertices = frozenset(vertices)
        n = len(walls)
        halves = []
        for i in range(n):
            shift = n - 1 - i
            one = frozenset(v for v in vertices if v >> shift & 1)
            zero = vertices - one
            if not one or not zero:
                raise InvalidModel(f"wall {walls[i]!r} has an empty side")
            halves.append((zero, one))
        return cls(walls, vertices, tuple(halves))

    @classmethod
    def from_model(cls, model: MedianModel):
        return cls.from_vertices(model.walls, model.vertices)

    def halfspace(self, i, side):
        return self.halfspaces[i][side]

    def contains(self, h1, h2):
        """Inclusion order between halfspaces ``(wall, side)``."""
        return self.halfspace(*h1) <= self.halfspace(*h2)

    def compatible(self, h1, h2):
        return bool(self.halfspace(*h1) & self.halfspace(*h2))


@dataclass(frozen=True)
class Ultrafilter:
    """A choice of side per wall, stored as the set of chosen halfspaces."""

    halfspaces: frozenset  # of (wall index, side)

    @classmethod
    def from_sides(cls, sides):
        return cls(frozenset(enumerate(sides)))

    def sides(self):
        return tuple(s for _, s in sorted(self.halfspaces))

    def as_bits(self):
        v = 0
        for s in self.sides():
            v = (v << 1) | s
        return v


def is_consistent(system: HalfspaceSystem, alpha: Ultrafilter):
    """No two chosen halfspaces are disjoint."""
    chosen = sorted(alpha.halfspaces)
    if [i for i, _ in chosen] != list(range(len(system.walls))):
        return False
    for k, h1 in enumerate(chosen):
        for h2 in chosen[k + 1:]:
            if not system.compatible(h1, h2):
                return False
    return True


def ultrafilter_of_vertex(model: MedianModel, v) -> Ultrafilter:
    """The halfspaces containing ``v``."""
    v = model.vertex(v)
    return Ultrafilter.from_sides([model.side(v, i) for i in range(model.n_walls)])


def vertex_of_ultrafilter(model: MedianModel, alpha: Ultrafilter):
    system = HalfspaceSystem.from_model(model)
    if not is_consistent(system, alpha):
        raise NotRealized("orientation chooses two disjoint halfspaces")
    v = alpha.as_bits()
    if v not in model:
        raise NotRealized(
            f"consistent orientation {model.bits(v)} is not a vertex; "
            "the cubulation of this system is strictly larger"
        )
    return v


def ultrafilter_median(a: Ultrafilter, b: Ultrafilter, c: Ultrafilter) -> Ultrafilter:
    ha, hb, hc = a.halfspaces, b.halfspaces, c.halfspaces
    return Ultrafilter((ha & hb) | (hb & hc) | (hc & ha))


def consistent_orientations(system: HalfspaceSystem):
    """All consistent orientations, as bitvectors, in increasing order."""
    n = len(system.walls)
    out = []

    def extend(i, chosen, bits):
        if i == n:
            out.append(bits)
            return
        for side in (0, 1):
            h = (i, side)
            if all(system.compatible(h, g) for g in chosen):
                chosen.append(h)
                extend(i + 1, chosen, (bits << 1) | side)
                chosen.pop()

    extend(0, [], 0)
    return out


def sageev_cubulation(system: HalfspaceSystem) -> MedianModel:
    """Every consistent orientation of a finite system, as a median model.

    Finite systems satisfy the descending chain condition automatically, so
    the vertex set of the dual cube complex is exactly the set of consistent
    orientations. It contains every principal ultrafilter.
    """
    verts = consistent_orientations(system)
    return MedianModel(system.walls, verts, allow_parallel=True)


@dataclass(frozen=True)
class CubulationReport:
    principal: frozenset
    cubulation: frozenset

    @property
    def extra(self):
        return self.cubulation - self.principal

    @property
    def strict(self):
        return bool(self.extra)


def compare_cubulation(system: HalfspaceSystem) -> CubulationReport:
    cub = sageev_cubulation(system)
    missing = system.vertices - cub.vertex_set
    if missing:
        raise InternalInvariantViolation("a principal ultrafilter is inconsistent")
    return CubulationReport(system.vertices, cub.vertex_set)
