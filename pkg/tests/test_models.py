import random
from itertools import product as cartesian

import pytest

from medcube import models
from medcube.errors import InvalidModel, NotATree, NotMedianClosed, TooLarge
from medcube.model import maj
from medcube.models import GridSpec, grid_point, l1_grid


def test_grid_median_is_axiswise_median():
    g = models.grid(3, 2)
    pts = list(cartesian(range(4), range(3)))
    for p, q, r in cartesian(pts, repeat=3):
        want = tuple(sorted(t)[1] for t in zip(p, q, r))
        got = maj(grid_point(g, *p), grid_point(g, *q), grid_point(g, *r))
        assert got == grid_point(g, *want)


def test_window_sizes():
    assert len(models.window(2, 5)) == 121
    assert models.window(2, 5).n_walls == 20
    assert len(models.window(3, 2)) == 125


def test_plane_minus_quadrant():
    m = models.plane_minus_quadrant(4)
    assert len(m) == 56 and m.n_walls == 16
    with pytest.raises(KeyError):
        grid_point(m, -1, 0)
    assert grid_point(m, -1, 1) in m
    assert not models.in_plane_minus_quadrant(-1, 0)
    assert models.in_plane_minus_quadrant(-1, 1)


def test_predicate_breaking_closure():
    with pytest.raises(NotMedianClosed):
        l1_grid(GridSpec((2, 2), lambda p: p != (1, 1)))


def test_grid_limits():
    with pytest.raises(TooLarge):
        models.grid(200, 200)
    with pytest.raises(InvalidModel):
        l1_grid(GridSpec(((3, 1),)))


def test_tree_model():
    t = models.tree_model([("a", "b"), ("b", "c"), ("b", "d")])
    assert t.walls == ("a-b", "b-c", "b-d")
    assert t.label(maj(t.vertex("a"), t.vertex("c"), t.vertex("d"))) == "b"
    with pytest.raises(NotATree):
        models.tree_model([("a", "b"), ("b", "c"), ("c", "a")])


def test_product_names_and_size():
    p = models.product(models.path(1), models.path(2))
    assert len(p) == 6
    assert p.walls == ("x>=1", "x>=1'", "x>=2")
    assert p.vertex("((1),(2))") == 0b111


def test_random_model_is_seeded():
    assert models.random_model(6, 5, 11) == models.random_model(6, 5, 11)
    with pytest.raises(TooLarge):
        models.random_model(12, 12, 0, max_vertices=8)


def test_presets_build():
    for name, build in models.PRESETS.items():
        assert len(build()) > 0, name


def test_cycle_distances():
    nodes, d = models.cycle_distances(5)
    assert d[0, 2] == 2 and d[0, 3] == 2 and d[1, 4] == 2
