import random
from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from bihamflat.expr import ChartContext, Polynomial, RationalFunction

settings.register_profile("default", max_examples=60, deadline=None, derandomize=True)
settings.load_profile("default")


def small_poly(nvars, max_deg=2):
    """Strategy for small integer polynomials in ``nvars`` variables."""
    mono = st.tuples(*[st.integers(0, max_deg) for _ in range(nvars)]).filter(lambda m: sum(m) <= max_deg)
    return st.dictionaries(mono, st.integers(-4, 4), max_size=4).map(lambda d: Polynomial(nvars, d))


def small_rf(nvars, max_deg=2):
    nonzero = small_poly(nvars, max_deg).filter(lambda p: not p.is_zero())
    return st.tuples(small_poly(nvars, max_deg), nonzero).map(lambda t: RationalFunction(t[0], t[1]))


def rational_points(nvars):
    r = st.fractions(min_value=-7, max_value=7, max_denominator=5)
    return st.tuples(*[r for _ in range(nvars)])


def random_poly(rng, nvars, max_deg=2, terms=3):
    d = {}
    for _ in range(terms):
        while True:
            m = tuple(rng.randint(0, max_deg) for _ in range(nvars))
            if sum(m) <= max_deg:
                break
        d[m] = d.get(m, 0) + rng.randint(-3, 3)
    return Polynomial(nvars, d)


def random_rational_skew(size, rng, low=-9, high=9):
    M = [[Fraction(0)] * size for _ in range(size)]
    for i in range(size):
        for j in range(i + 1, size):
            M[i][j] = Fraction(rng.randint(low, high), rng.randint(1, 3))
            M[j][i] = -M[i][j]
    return M


def leibniz_det(M):
    """Determinant by the permutation expansion; independent of the elimination code."""
    from itertools import permutations
    n = len(M)
    total = Fraction(0)
    for perm in permutations(range(n)):
        sign = 1
        seen = list(perm)
        for i in range(n):
            for j in range(i + 1, n):
                if seen[i] > seen[j]:
                    sign = -sign
        prod = Fraction(1)
        for i, j in enumerate(perm):
            prod *= M[i][j]
            if not prod:
                break
        total += sign * prod
    return total


@pytest.fixture
def chart3():
    return ChartContext.standard(3)


@pytest.fixture
def rng():
    return random.Random(1234)
