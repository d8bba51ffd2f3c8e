import random

import pytest
from hypothesis import given, settings, strategies as st

from bihamflat.expr import ChartContext, RationalFunction
from bihamflat.models import canonical_pair, mutate_drop_term, volterra
from bihamflat.poisson import bracket, hamiltonian_vf, is_compatible, is_poisson, jacobiator, schouten
from bihamflat.tensor import SkewBivectorField, iter_triples

from conftest import random_poly, small_rf

C3 = ChartContext.standard(3)


def broken():
    # with v = (P23, P31, P12) = (1, 0, x2), Jacobi reads v . curl v = 1
    return SkewBivectorField(C3, {(0, 1): "x2", (1, 2): 1})


def random_bivector(rng, chart, max_deg=2):
    n = chart.dim
    entries = {}
    for i in range(n):
        for j in range(i + 1, n):
            entries[(i, j)] = RationalFunction.from_poly(random_poly(rng, n, max_deg))
    return SkewBivectorField(chart, entries)


def extend_with_lambda(P, Q):
    """``P + λQ`` on the chart with λ appended as a coordinate."""
    names = P.chart.coordinate_names + ("lam",)
    chart = ChartContext(names)
    n = len(names)
    lam = chart.coordinate(n - 1)
    entries = {}
    for i in range(P.dim):
        for j in range(i + 1, P.dim):
            entries[(i, j)] = P[i, j].extend(n) + lam * Q[i, j].extend(n)
    return SkewBivectorField(chart, entries)


# -- bracket ------------------------------------------------------------------

@given(small_rf(3))
def test_bracket_skew(f):
    P, _ = volterra(3)
    assert bracket(P, f, f).is_zero()


def test_canonical_bracket():
    P, _ = canonical_pair(1)
    x = [P.chart.coordinate(i) for i in range(3)]
    assert bracket(P, x[0], x[1]) == 1
    assert bracket(P, x[0], x[2]) == 0


@settings(max_examples=20)
@given(small_rf(3, 1), small_rf(3, 1), small_rf(3, 1))
def test_leibniz(f, g, h):
    P, _ = volterra(3)
    assert bracket(P, f, g * h) == bracket(P, f, g) * h + g * bracket(P, f, h)


def test_hamiltonian_vf():
    P, _ = canonical_pair(1)
    assert hamiltonian_vf(P, P.chart.constant(7)).is_zero()
    assert list(hamiltonian_vf(P, P.chart.coordinate(1))) == [1, 0, 0]


@pytest.mark.parametrize("n", [3, 5])
def test_volterra_flow(n):
    P, _ = volterra(n)
    chart = P.chart
    x = [chart.coordinate(i) for i in range(n)]
    H = sum(x[1:], x[0])
    v = hamiltonian_vf(P, H)
    for i in range(n):
        assert v[i] == x[i] * (x[(i + 1) % n] - x[(i - 1) % n])


# -- Schouten -----------------------------------------------------------------

def test_constant_schouten_is_zero():
    P, Q = canonical_pair(2)
    assert schouten(P, Q).is_zero()


@pytest.mark.parametrize("n", [3, 5, 7])
def test_volterra_poisson(n):
    P, Q = volterra(n)
    assert schouten(P, P).is_zero()
    assert is_poisson(P) and is_poisson(Q)
    assert is_compatible(P, Q)


def test_broken_example_against_jacobiator():
    P = broken()
    S = schouten(P, P)
    assert not S.is_zero()
    for ijk in iter_triples(3):
        assert S[ijk] == jacobiator(P, *ijk) * 2
    check = is_poisson(P)
    assert not check
    (i, j, k), value = check.witness
    assert value == jacobiator(P, i, j, k) * 2


def test_linear_entry_example_is_poisson():
    P = SkewBivectorField(C3, {(0, 1): 1, (1, 2): "x1"})
    assert all(jacobiator(P, *ijk).is_zero() for ijk in iter_triples(3))
    assert is_poisson(P)


def test_constant_is_poisson():
    rng = random.Random(5)
    chart = ChartContext.standard(4)
    P = random_bivector(rng, chart, max_deg=0)
    assert is_poisson(P)


def test_compatible_with_itself():
    P, _ = volterra(5)
    assert is_compatible(P, P)


def test_dropped_band_term_is_incompatible():
    P, Q = volterra(5)
    Q2 = mutate_drop_term(Q, 0, 1)
    check = is_compatible(P, Q2)
    assert not check
    (i, j, k), value = check.witness
    # oracle: Jacobiators through the bracket
    mixed = jacobiator(P + Q2, i, j, k) - jacobiator(P, i, j, k) - jacobiator(Q2, i, j, k)
    assert mixed == value and not value.is_zero()


def test_schouten_jacobiator_equivalence_random():
    rng = random.Random(11)
    for _ in range(25):
        P = random_bivector(rng, C3)
        Q = random_bivector(rng, C3)
        S = schouten(P, Q)
        for ijk in iter_triples(3):
            oracle = jacobiator(P + Q, *ijk) - jacobiator(P, *ijk) - jacobiator(Q, *ijk)
            assert S[ijk] == oracle


def test_dropped_cubic_band_term_stays_compatible():
    # the x1*x2*x3 entry commutes with P on its own; dropping it breaks Jacobi for Q instead
    P, Q = volterra(5)
    Q2 = mutate_drop_term(Q, 0, 2)
    assert all((jacobiator(P + Q2, *t) - jacobiator(P, *t) - jacobiator(Q2, *t)).is_zero()
               for t in iter_triples(5))
    assert is_compatible(P, Q2)
    assert not is_poisson(Q2)


@given(st.integers(0, 10 ** 6), st.fractions(max_denominator=5), st.fractions(max_denominator=5))
def test_bilinearity(seed, a, b):
    rng = random.Random(seed)
    P, Q1, Q2 = (random_bivector(rng, C3) for _ in range(3))
    left = schouten(P, Q1.scale(a) + Q2.scale(b))
    right1, right2 = schouten(P, Q1), schouten(P, Q2)
    for ijk in iter_triples(3):
        assert left[ijk] == right1[ijk] * a + right2[ijk] * b


@pytest.mark.parametrize("pair", [volterra(3), volterra(5), canonical_pair(2)])
def test_pencil_closure(pair):
    P, Q = pair
    assert is_poisson(extend_with_lambda(P, Q))


def test_pencil_closure_fails_when_incompatible():
    P, Q = volterra(5)
    assert not is_poisson(extend_with_lambda(P, mutate_drop_term(Q, 0, 1)))
