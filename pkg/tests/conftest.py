import sys
import random
from fractions import Fraction

from hypothesis import settings
from hypothesis import strategies as st

from mdlie.linalg import Matrix
from mdlie.scalars import quad

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

small_ints = st.integers(min_value=-6, max_value=6)
rationals = st.builds(Fraction, small_ints, st.integers(min_value=1, max_value=5))
nonzero_rationals = rationals.filter(bool)


def quad_values(d=2):
    return st.builds(lambda a, b: quad(a, b, d), rationals, rationals)


@st.composite
def matrices(draw, max_rows=5, max_cols=5, elements=rationals):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    return Matrix([[draw(elements) for _ in range(c)] for _ in range(r)])


@st.composite
def invertible_matrices(draw, n):
    """Unit lower times unit upper triangular times a nonzero diagonal."""
    low = [[Fraction(1) if i == j else (draw(small_ints) if j < i else Fraction(0)) for j in range(n)] for i in range(n)]
    up = [[Fraction(1) if i == j else (draw(small_ints) if j > i else Fraction(0)) for j in range(n)] for i in range(n)]
    d = Matrix.diag([draw(nonzero_rationals) for _ in range(n)])
    return Matrix(low) @ Matrix(up) @ d


def random_rational(rng: random.Random, height=7) -> Fraction:
    return Fraction(rng.randint(-height, height), rng.randint(1, height))


def random_functional(rng: random.Random, n: int):
    return tuple(random_rational(rng) for _ in range(n))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n][1])
