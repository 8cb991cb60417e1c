import pytest
from hypothesis import settings, strategies as st

from medcube import models
from medcube.errors import TooLarge

settings.register_profile("medcube", max_examples=40, deadline=None)
settings.load_profile("medcube")

ACCEPTANCE = {}


def record(number, ok, detail=""):
    ACCEPTANCE[number] = (ok, detail)
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:2d}: {detail}"
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(
            f"{'PASS' if ok else 'FAIL'} criterion {number:2d}: {detail}")


def seeded_model(seed, n_walls=8, n_points=6, max_vertices=64):
    try:
        return models.random_model(n_walls, n_points, seed, max_vertices=max_vertices)
    except TooLarge:
        return models.random_model(n_walls, 3, seed, max_vertices=max_vertices)


@st.composite
def small_models(draw):
    seed = draw(st.integers(0, 10_000))
    n_walls = draw(st.integers(1, 5))
    n_points = draw(st.integers(1, 5))
    return seeded_model(seed, n_walls, n_points, max_vertices=32)


@pytest.fixture
def cube3():
    return models.hypercube(3)


@pytest.fixture
def z2():
    return models.window(2, 2)
