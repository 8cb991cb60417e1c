import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from medcube import models
from medcube.algebra import center, hull, interval_members
from medcube.errors import AmbientExhausted, InvalidCount, NotConvex, UnknownWall
from medcube.metric import (
    WeightedWallspace,
    build_exhaustion,
    cauchy_gap_check,
    check_exhaustion,
    check_median_metric,
    distance,
    floyd,
    floyd_check,
    fmt,
    frontier,
    metric_interval,
    neighbourhood,
    retract_layer,
    subdivide_wall,
    thicken,
    verify_median_metric,
)
from medcube.models import grid_point

import oracles
from conftest import small_models


def random_weights(model, rng):
    return {w: Fraction(rng.randint(1, 7), rng.randint(1, 7)) for w in model.walls}


def test_distance_examples():
    cube = WeightedWallspace(models.hypercube(3))
    assert distance(cube, "000", "111") == 3
    sq = WeightedWallspace(models.hypercube(2), {"w1": Fraction(1, 2), "w2": Fraction(1, 3)})
    assert distance(sq, "00", "11") == Fraction(5, 6)
    assert fmt(Fraction(3)) == "3/1"


def test_weights_must_be_positive_and_exact():
    with pytest.raises(ValueError):
        WeightedWallspace(models.hypercube(1), {"w1": 0})
    with pytest.raises(TypeError):
        WeightedWallspace(models.hypercube(1), {"w1": 0.5})


@given(small_models(), st.integers(0, 1000))
def test_distance_matches_oracle_and_is_a_metric(m, seed):
    rng = random.Random(seed)
    w = random_weights(m, rng)
    ws = WeightedWallspace(m, w)
    vs = m.vertices[:6]
    for u in vs:
        for v in vs:
            assert distance(ws, u, v) == oracles.weighted_distance(m, w, u, v)
            for x in vs:
                assert ws.dist(u, x) <= ws.dist(u, v) + ws.dist(v, x)


@given(small_models(), st.integers(0, 1000))
def test_random_weightings_give_median_metrics(m, seed):
    ws = WeightedWallspace(m, random_weights(m, random.Random(seed)))
    assert verify_median_metric(ws).ok
    for a in m.vertices[:4]:
        for b in m.vertices[-4:]:
            assert metric_interval(ws, a, b) == interval_members(m, a, b)


def test_five_cycle_is_not_a_median_metric():
    nodes, d = models.cycle_distances(5)
    rep = check_median_metric(nodes, [[d[a, b] for b in nodes] for a in nodes])
    assert not rep.ok
    assert rep.violations[0] == ((0, 1, 3), [])


def test_subdivide_single_edge():
    ws = subdivide_wall(WeightedWallspace(models.hypercube(1)), "w1", 2)
    assert len(ws.model) == 3
    assert ws.weight_map() == {"w1#1": Fraction(1, 2), "w1#2": Fraction(1, 2)}
    assert distance(ws, "0", "1") == 1
    assert ws.parents == {"w1#1": "w1", "w1#2": "w1"}


def test_subdivide_square_gives_grid():
    ws = subdivide_wall(WeightedWallspace(models.hypercube(2)), "w1", 3)
    assert len(ws.model) == 8
    assert distance(ws, "00", "11") == 2
    assert subdivide_wall(ws, "w2", 1) is ws
    with pytest.raises(InvalidCount):
        subdivide_wall(ws, "w2", 0)
    with pytest.raises(UnknownWall):
        subdivide_wall(ws, "nope", 2)


@pytest.mark.parametrize("n", [2, 3, 7])
def test_subdivision_keeps_distances(n):
    base = WeightedWallspace(models.grid(2, 1), {"x>=1": Fraction(3, 5)})
    out = subdivide_wall(base, "x>=1", n)
    m = base.model
    for u in m.vertices:
        for v in m.vertices:
            assert distance(out, m.label(u), m.label(v)) == distance(base, u, v)
    assert all(out.weight(f"x>=1#{k}") == Fraction(3, 5) / n for k in range(1, n + 1))


def test_thicken_single_vertex():
    z = models.window(2, 3)
    th = thicken(WeightedWallspace(z), [center(z)])
    assert len(th.region) == 9 and len(th.new_walls) == 4
    assert th.gap == 1 and len(th.frontier) == 8


def test_thicken_everything_is_a_fixed_point():
    z = models.window(2, 1)
    th = thicken(WeightedWallspace(z), z.vertices)
    assert th.region == z.vertex_set and th.new_walls == () and th.gap is None


def test_thicken_requires_convex():
    z = models.window(2, 1)
    with pytest.raises(NotConvex):
        thicken(WeightedWallspace(z), [grid_point(z, -1, -1), grid_point(z, 1, 1)])


@given(st.integers(0, 10_000))
def test_thickening_gap(seed):
    rng = random.Random(seed)
    z = models.window(2, 3)
    K, _ = hull(z, rng.sample(z.vertices, rng.randint(1, 3)))
    th = thicken(WeightedWallspace(z), K)
    w = th.wallspace.weight_map()
    for b in th.frontier:
        assert min(oracles.weighted_distance(z, w, b, k) for k in K) >= 1
    assert th.unclassified == ()


def test_exhaustion_in_window():
    z = models.window(2, 5)
    exh = build_exhaustion(z, [center(z)], 3)
    assert [len(K) for K in exh.layers] == [1, 9, 25]
    assert exh.gaps() == {1: 1, 2: 1}
    assert check_exhaustion(exh).ok
    assert cauchy_gap_check(exh).ok


def test_exhaustion_single_layer():
    z = models.window(2, 2)
    exh = build_exhaustion(z, hull(z, [grid_point(z, 0, 0), grid_point(z, 1, 1)])[0], 1)
    assert exh.depth == 1 and set(exh.registry.values()) == {1}
    assert all(exh.wallspace.weight(w) == 1 for w in exh.registry)
    assert cauchy_gap_check(exh).ok and cauchy_gap_check(exh).checked == 0


def test_exhaustion_runs_out():
    z = models.window(2, 1)
    with pytest.raises(AmbientExhausted) as e:
        build_exhaustion(z, [center(z)], 4)
    assert e.value.largest == 2


def test_gap_check_negative_control():
    z = models.window(2, 5)
    exh = build_exhaustion(z, [center(z)], 3)
    dropped = {w: k for w, k in exh.registry.items() if k != 3}
    rep = cauchy_gap_check(exh, dropped)
    assert not rep.ok and rep.witness[0] == 2 and rep.witness[2] == 0


def test_extensions_are_hulled():
    z = models.window(2, 5)
    far = grid_point(z, 3, 0)
    exh = build_exhaustion(z, [center(z)], 2, extensions=[[far]])
    assert far in exh.layer(2)
    assert exh.hull_walls[2] == ("x>=1", "x>=2", "x>=3")


def test_floyd_on_path():
    p = models.path(8)
    exh = floyd(p, ["(0)"], 4)
    assert exh.wallspace.set_distance([p.vertex("(3)")], exh.layer(1)) == Fraction(7, 16)
    exh = floyd(p, ["(0)", "(1)"], 5)
    assert distance(exh.wallspace, "(0)", "(5)") == Fraction(31, 32)
    assert exh.wallspace.weight("x>=1") == Fraction(1, 2)


def test_floyd_single_layer_weights():
    z = models.window(2, 2)
    exh = floyd(z, hull(z, [grid_point(z, 0, 0), grid_point(z, 1, 1)])[0], 1)
    assert {exh.wallspace.weight(w) for w in exh.registry} == {Fraction(1, 2)}


def test_floyd_crossing_counts():
    g = models.grid(7, 7)
    seed = [grid_point(g, x, y) for x in (0, 1) for y in (0, 1)]
    rep = floyd_check(floyd(g, seed, 4))
    assert rep.ok and rep.crossing_counts == {1: 0, 2: 2, 3: 2, 4: 2}
    assert rep.max_distance == Fraction(7, 8)


def test_retraction_onto_star():
    z = models.window(2, 3)
    exh = build_exhaustion(z, [center(z)], 3)
    r = retract_layer(exh, 2)
    K2 = sorted(exh.layer(2))
    for v in exh.layer(3):
        assert r[v] == oracles.gate(z, K2, v)
    assert r[grid_point(z, 2, 2)] == grid_point(z, 1, 1)
    assert r[grid_point(z, -2, 0)] == grid_point(z, -1, 0)
    with pytest.raises(InvalidCount):
        retract_layer(exh, 3)


def test_neighbourhood_and_frontier(cube3):
    assert neighbourhood(cube3, [0]) == frozenset(range(8))
    assert frontier(cube3, {0, 1}) == {0, 1}
    assert frontier(cube3, frozenset(range(8))) == frozenset()
