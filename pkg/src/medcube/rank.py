"""Rank of a finite median algebra and additive intervals.

An embedded median k-cube is the same thing as k pairwise crossing walls,
so the rank is the clique number of the crossing graph.
"""

import networkx as nx

from .algebra import interval_members
from .model import MedianModel


def crosses(model: MedianModel, i, j):
    """All four sign patterns of walls ``i`` and ``j`` occur among the vertices."""
    seen = set()
    for v in model.vertices:
        seen.add((model.side(v, i), model.side(v, j)))
        if len(seen) == 4:
            return True
    return False


def crossing_graph(model: MedianModel):
    g = nx.Graph()
    n = model.n_walls
    g.add_nodes_from(range(n))
    patterns = [[model.side(v, i) for i in range(n)] for v in model.vertices]
    for i in range(n):
        for j in range(i + 1, n):
            if len({(p[i], p[j]) for p in patterns}) == 4:
                g.add_edge(i, j)
    return g


def max_crossing_family(model: MedianModel):
    """Lexicographically least largest set of pairwise crossing walls."""
    if model.n_walls == 0 or len(model) < 2:
        return ()
    best = ()
    for clique in nx.find_cliques(crossing_graph(model)):
        c = tuple(sorted(clique))
        if len(c) > len(best) or (len(c) == len(best) and c < best):
            best = c
    return best


def rank(model: MedianModel) -> int:
    """Largest k such that a median k-cube embeds in the model."""
    return len(max_crossing_family(model))


def rank_interval(model: MedianModel, a, b) -> int:
    a, b = model.vertex(a), model.vertex(b)
    return rank(model.submodel(interval_members(model, a, b)))


def is_additive(model: MedianModel, a, b) -> bool:
    """``[a,x] | [x,b] == [a,b]`` for every ``x`` in ``[a,b]``."""
    a, b = model.vertex(a), model.vertex(b)
    ab = interval_members(model, a, b)
    for x in ab:
        if interval_members(model, a, x) | interval_members(model, x, b) != ab:
            return False
    return True
