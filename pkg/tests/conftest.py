import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from projmetric.algebra import Poly
from projmetric.geometry import COORDINATES, ProjectiveStructure
from projmetric.tensor import Tensor

import numpy as np

SMALL_VARS = ("x", "y", "z")

coefficients = st.fractions(min_value=-5, max_value=5, max_denominator=4)
exponents = st.tuples(*(st.integers(0, 2) for _ in SMALL_VARS))


@st.composite
def polys(draw, variables=SMALL_VARS, max_terms=4):
    terms = draw(st.dictionaries(st.tuples(*(st.integers(0, 2) for _ in variables)),
                                 coefficients, max_size=max_terms))
    return Poly(terms, variables)


def random_poly(rng: random.Random, variables=COORDINATES, degree=1, terms=3) -> Poly:
    out = {}
    for _ in range(terms):
        e = [0] * len(variables)
        for _ in range(rng.randint(0, degree)):
            e[rng.randrange(len(variables))] += 1
        out[tuple(e)] = Fraction(rng.randint(-4, 4), rng.choice((1, 1, 2)))
    return Poly(out, variables)


def random_gamma(rng: random.Random, degree=1) -> ProjectiveStructure:
    entries = {}
    for a in (1, 2, 3):
        for b in (1, 2, 3):
            for c in range(b, 4):
                if rng.random() < 0.6:
                    entries[(a, b, c)] = random_poly(rng, degree=degree, terms=2)
    return ProjectiveStructure.from_entries(entries)


def random_one_form(rng: random.Random, degree=1) -> Tensor:
    return Tensor(np.array([random_poly(rng, degree=degree, terms=2) for _ in range(3)],
                           dtype=object), "d")


@pytest.fixture
def rng():
    return random.Random(20240601)


# acceptance summary: one line per criterion, printed after the run
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
