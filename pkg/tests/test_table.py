import numpy as np
from hypothesis import given

from medcube import models
from medcube.model import maj
from medcube.table import (
    LAWS,
    MedianTable,
    interval_map_of,
    sholander_median,
    verify_axioms,
    verify_model_axioms,
)

from conftest import small_models


def cycle_table(n):
    im = models.cycle_interval_map(n)

    def op(a, b, c):
        t = im[a, b] & im[b, c] & im[a, c]
        return min(t) if t else a

    return MedianTable.from_function(range(n), op)


def test_cube_table_satisfies_every_law(cube3):
    rep = verify_axioms(MedianTable.from_model(cube3))
    assert rep.exhaustive and rep.ok
    assert rep.checked["distributivity"] == 8 ** 5


def test_five_cycle_table_fails():
    rep = verify_axioms(cycle_table(5))
    assert not rep.ok
    # intervals [0,1], [1,3], [0,3] of the 5-cycle have empty intersection
    assert (0, 1, 3) in rep.violations["symmetry"]


def test_four_cycle_is_median():
    assert verify_axioms(cycle_table(4)).ok


def test_broken_table_reports_majority_violation():
    t = MedianTable.from_model(models.hypercube(1))
    op = t.op.copy()
    op[0, 0, 1] = 1
    rep = verify_axioms(MedianTable(t.elements, op))
    assert (0, 1) in rep.violations["majority"]


def test_sampled_mode_is_seeded():
    t = MedianTable.from_model(models.window(2, 2))
    r1 = verify_axioms(t, budget=500, seed=3, exhaustive_limit=8)
    r2 = verify_axioms(t, budget=500, seed=3, exhaustive_limit=8)
    assert not r1.exhaustive and r1.ok and r1.checked == r2.checked


def test_model_axioms_by_projection():
    rep = verify_model_axioms(models.hypercube(10))
    assert rep.ok and rep.exhaustive
    assert set(LAWS) <= set(rep.checked)


def test_sholander_on_cycles():
    assert sholander_median(models.cycle_interval_map(5)).failed_property == 3
    assert sholander_median(models.cycle_interval_map(5)).witness == (0, 1, 3)
    assert sholander_median(models.cycle_interval_map(4)).ok


def test_sholander_property_one_and_two():
    im = dict(interval_map_of(models.path(2)))
    v = sorted({a for a, _ in im})
    im[v[0], v[0]] = frozenset({v[0], v[1]})
    assert sholander_median(im).failed_property == 1
    im = dict(interval_map_of(models.path(2)))
    im[v[0], v[2]] = frozenset({v[0], v[1], v[2]})
    im[v[1], v[2]] = frozenset({v[0], v[1], v[2]})
    assert sholander_median(im).failed_property == 2


def test_table_equality_ignores_element_order(cube3):
    t = MedianTable.from_model(cube3)
    rev = MedianTable.from_function(list(reversed(cube3.vertices)), maj)
    assert t == rev


@given(small_models())
def test_sholander_round_trip(m):
    res = sholander_median(interval_map_of(m))
    assert res.ok
    assert res.table == MedianTable.from_model(m)
    assert np.array_equal(res.table.op, MedianTable.from_model(m).op)
