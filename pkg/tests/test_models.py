import warnings

import pytest

from bihamflat.expr import ChartContext, Polynomial
from bihamflat.models import canonical_pair, mutate_drop_term, mutate_restore_term, volterra
from bihamflat.poisson import is_compatible, is_poisson
from bihamflat.unimod import default_point, flatness_verdict


def delta_oracle(n):
    """Entry tables of the Volterra pair from the four δ-families, 1-based,
    over all ordered pairs (i, j), with cyclic representatives 1..n."""
    def rep(k):
        return (k - 1) % n + 1

    def x(k):
        return Polynomial.var(n, rep(k) - 1)

    def delta(a, b):
        return 1 if rep(a) == rep(b) else 0

    P, Q = {}, {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            band = delta(i + 1, j) - delta(i, j + 1)
            P[(i, j)] = x(i) * x(j) * band
            Q[(i, j)] = (x(i) * x(j) * (x(i) + x(j)) * band
                         + x(i) * x(i + 1) * x(i + 2) * delta(i + 2, j)
                         - x(i) * x(i - 1) * x(i - 2) * delta(i - 2, j))
    return P, Q


@pytest.mark.parametrize("n", [3, 5, 7, 9])
def test_volterra_matches_delta_oracle(n):
    P, Q = volterra(n)
    oP, oQ = delta_oracle(n)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            assert oP[(i, j)] == -oP[(j, i)]
            assert oQ[(i, j)] == -oQ[(j, i)]
            assert P[i - 1, j - 1] == oP[(i, j)]
            assert Q[i - 1, j - 1] == oQ[(i, j)]


def test_volterra_5_entries():
    P, Q = volterra(5)
    c = P.chart
    assert P[0, 1] == c.parse("x1*x2")
    assert P[0, 4] == c.parse("-x1*x5")
    assert Q[0, 2] == c.parse("x1*x2*x3")
    assert len(P.items()) == 5 and len(Q.items()) == 10


def test_volterra_3_overlapping_bands_summed():
    _, Q = volterra(3)
    c = Q.chart
    # δ_{1+2,3} band plus the wrap term δ_{1,3+1}
    assert Q[0, 2] == c.parse("x1*x2*x3 - x1*x3*(x1+x3)")


@pytest.mark.parametrize("n", [3, 5, 7, 9])
def test_bands(n):
    P, Q = volterra(n)
    for T in (P, Q):
        for (i, j), _ in T.items():
            d = (j - i) % n
            assert min(d, n - d) in (1, 2)


@pytest.mark.parametrize("n", [3, 5, 7, 9])
def test_volterra_poisson_and_compatible(n):
    P, Q = volterra(n)
    assert is_poisson(P) and is_poisson(Q) and is_compatible(P, Q)


def test_volterra_preconditions():
    with pytest.raises(ValueError):
        volterra(2)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        volterra(4)
    assert caught


def test_canonical_entries():
    P, Q = canonical_pair(1)
    assert [k for k, _ in P.items()] == [(0, 1)]
    assert [k for k, _ in Q.items()] == [(0, 2)]
    P, Q = canonical_pair(2)
    assert dict(P.items()) == {(0, 2): 1, (1, 3): 1}
    assert dict(Q.items()) == {(0, 3): 1, (1, 4): 1}
    with pytest.raises(ValueError):
        canonical_pair(0)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_canonical_pipeline(n):
    P, Q = canonical_pair(n)
    assert is_poisson(P) and is_poisson(Q) and is_compatible(P, Q)
    report = flatness_verdict(P, Q, default_point(2 * n + 1))
    assert report.flat and report.alpha.is_zero()


def test_drop_and_restore():
    _, Q = volterra(5)
    value = Q[0, 2]
    dropped = mutate_drop_term(Q, 0, 2)
    assert dropped[0, 2].is_zero()
    assert mutate_restore_term(dropped, 0, 2, value) == Q
    with pytest.raises(ValueError):
        mutate_drop_term(dropped, 0, 2)
    with pytest.raises(ValueError):
        mutate_restore_term(Q, 0, 2, value)


def test_drop_on_canonical_degenerates():
    P, Q = canonical_pair(2)
    Q2 = mutate_drop_term(Q, 1, 4)
    assert is_poisson(Q2)
    assert flatness_verdict(P, Q2, default_point(5)).verdict == "not_generic"


def test_chart_is_standard():
    P, _ = volterra(3)
    assert P.chart == ChartContext.standard(3)
