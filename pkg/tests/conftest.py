import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from lcpspin.exterior import Form, OrthMap
from lcpspin.octonion import Octonion

settings.register_profile("default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

small = st.fractions(min_value=-4, max_value=4, max_denominator=4)


@st.composite
def forms(draw, dim, degree, max_terms=6):
    idxs = list(itertools.combinations(range(dim), degree))
    chosen = draw(st.lists(st.sampled_from(idxs), max_size=min(max_terms, len(idxs)), unique=True))
    return Form(dim, degree, {i: draw(small) for i in chosen})


@st.composite
def any_form(draw, dim, max_degree=None):
    k = draw(st.integers(0, dim if max_degree is None else max_degree))
    return draw(forms(dim, k))


def vectors(dim):
    return st.lists(small, min_size=dim, max_size=dim)


def octonions():
    return st.lists(small, min_size=8, max_size=8).map(lambda c: Octonion(tuple(c)))


@st.composite
def skew(draw, dim):
    rows = [[Fraction(0)] * dim for _ in range(dim)]
    for i in range(dim):
        for j in range(i + 1, dim):
            v = draw(st.integers(-3, 3))
            rows[i][j], rows[j][i] = Fraction(v), Fraction(-v)
    return OrthMap(tuple(map(tuple, rows)))


@st.composite
def rotations(draw, dim):
    """Exact SO(dim) element via the Cayley transform of a drawn seed."""
    from lcpspin.groups import random_orthogonal

    return random_orthogonal(dim, random.Random(draw(st.integers(0, 10**6))), bound=2)


@pytest.fixture
def rng():
    return random.Random(0)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(test_acceptance.LINES, key=lambda s: int(s.split("[")[1].split("]")[0])):
            terminalreporter.write_line(line)
