import pytest
from hypothesis import given, strategies as st

from medcube import MedianModel, from_bitstrings, median_closure
from medcube.errors import InvalidModel, NotMedianClosed, UnknownVertex, UnknownWall
from medcube.model import between, closure_violation, maj

import oracles
from conftest import small_models


def test_majority_is_coordinatewise():
    assert maj(0b100, 0b110, 0b011) == 0b110
    assert maj(0b000, 0b111, 0b100) == 0b100


def test_between_matches_geodesic_oracle(cube3):
    for a in cube3.vertices:
        for b in cube3.vertices:
            got = {x for x in cube3.vertices if between(a, b, x)}
            assert got == oracles.interval(cube3, a, b)


def test_vertex_references(cube3):
    assert cube3.vertex("101") == 0b101
    assert cube3.vertex(5) == 5
    assert cube3.vertex((1, 0, 1)) == 5
    with pytest.raises(UnknownVertex):
        cube3.vertex("1010")
    with pytest.raises(UnknownWall):
        cube3.wall_index("nope")


def test_rejects_non_closed_set_with_witness():
    with pytest.raises(NotMedianClosed) as e:
        from_bitstrings(["a", "b", "c"], ["011", "101", "110", "000"])
    rows = [0b000, 0b011, 0b101, 0b110]
    bad = [t for t in sorted(
        (a, b, c) for a in rows for b in rows for c in rows if a <= b <= c)
        if maj(*t) not in rows]
    assert e.value.witness == bad[0] == (0b000, 0b011, 0b101)


def test_rejects_parallel_walls_unless_allowed():
    rows = ["00", "11"]
    with pytest.raises(InvalidModel):
        from_bitstrings(["a", "b"], rows)
    assert len(from_bitstrings(["a", "b"], rows, allow_parallel=True)) == 2


def test_rejects_duplicate_names():
    with pytest.raises(InvalidModel):
        from_bitstrings(["a"], ["0", "1"], names=["x", "x"])


def test_submodel_drops_constant_walls(cube3):
    sub = cube3.submodel([0b000, 0b001, 0b010, 0b011])
    assert sub.walls == ("w2", "w3")
    assert len(sub) == 4
    assert cube3.lift(sub, 0b11) == 0b011


@given(st.sets(st.integers(0, 31), min_size=1, max_size=6))
def test_closure_is_closed_and_minimal(points):
    closed = median_closure(points)
    assert closure_violation(list(closed), 5) is None
    assert set(points) <= closed
    # every element is generated: removing a non-generator breaks closure
    for v in closed - set(points):
        assert closure_violation(list(closed - {v}), 5) is not None or not (closed - {v}) >= set(points)


def naive_closure(points):
    current = set(points)
    while True:
        new = {maj(a, b, c) for a in current for b in current for c in current} - current
        if not new:
            return current
        current |= new


@given(st.sets(st.integers(0, 127), min_size=1, max_size=7))
def test_closure_matches_iterated_majority(points):
    assert median_closure(points) == naive_closure(points)


@given(small_models())
def test_model_median_matches_string_oracle(m):
    for a in m.vertices[:6]:
        for b in m.vertices:
            for c in m.vertices[:6]:
                assert maj(a, b, c) == oracles.median(m, a, b, c)
                assert maj(a, b, c) in m
