import random
from fractions import Fraction

import pytest

from bihamflat import linalg
from bihamflat.expr import ChartContext, Polynomial, RationalFunction
from bihamflat.models import canonical_pair, mutate_drop_term, volterra
from bihamflat.pencil_point import ConstantSkewPair, genericity_certificate, random_skew
from bihamflat.poisson import InternalConsistencyError
from bihamflat.tensor import OneFormField, SkewBivectorField, divergence, gradient
from bihamflat.unimod import (
    build_system,
    check_closed,
    coprime_factors,
    default_point,
    flatness_verdict,
    integrate_log_rational,
    reconstruct_volume,
    residual,
    solve_alpha,
)


def volterra_alpha(n):
    chart = ChartContext.standard(n)
    return OneFormField(chart, [chart.parse(f"-3/(2*x{i + 1})") for i in range(n)])


# -- system -------------------------------------------------------------------

def test_constant_system_has_zero_rhs():
    P, Q = canonical_pair(2)
    assert all(b.is_zero() for b in build_system(P, Q).rhs)


def test_volterra_system_blocks():
    P, Q = volterra(5)
    system = build_system(P, Q)
    assert all(b.is_zero() for b in system.rhs[:5])
    divQ = divergence(Q)
    assert list(system.rhs[5:]) == [-v for v in divQ]
    assert not divQ.is_zero()


def test_system_rows_are_tensor_rows():
    P, Q = volterra(3)
    system = build_system(P, Q)
    assert system.matrix[0] == tuple(P.matrix()[0])
    assert system.matrix[4] == tuple(Q.matrix()[1])


# -- solve --------------------------------------------------------------------

@pytest.mark.parametrize("n", [1, 2, 3])
def test_canonical_alpha_zero(n):
    P, Q = canonical_pair(n)
    sol = solve_alpha(build_system(P, Q))
    assert sol.solved and sol.alpha.is_zero()


@pytest.mark.parametrize("n", [3, 5, 7, 9])
def test_volterra_alpha(n):
    P, Q = volterra(n)
    system = build_system(P, Q)
    sol = solve_alpha(system)
    assert sol.solved
    assert sol.alpha == volterra_alpha(n)
    assert all(r.is_zero() for r in residual(system, sol.alpha))


@pytest.mark.parametrize("row", [0, 2, 6, 9])
def test_perturbed_rhs_is_inconsistent(row):
    P, Q = volterra(5)
    system = build_system(P, Q).perturbed(row)
    sol = solve_alpha(system)
    assert sol.status == "inconsistent"
    origin, value = sol.witness
    assert not value.is_zero()
    # the witness row really fails for the unperturbed solution
    alpha = volterra_alpha(5)
    assert any(not r.is_zero() for r in residual(system, alpha))


def test_scaled_constant_pair_solution():
    # P = f P0, Q = f Q0 gives α = -d log f
    rng = random.Random(4)
    chart = ChartContext.standard(5)
    while True:
        A, B = random_skew(5, rng), random_skew(5, rng)
        if genericity_certificate(ConstantSkewPair(A, B)).generic:
            break
    f = chart.parse("x1^2 + x2*x3 + 1")
    P = SkewBivectorField.from_matrix(chart, A)
    Q = SkewBivectorField.from_matrix(chart, B)
    P = SkewBivectorField(chart, {k: v * f for k, v in P.items()})
    Q = SkewBivectorField(chart, {k: v * f for k, v in Q.items()})
    system = build_system(P, Q)
    sol = solve_alpha(system)
    assert sol.solved
    assert sol.alpha == OneFormField(chart, [-(f.diff(i) / f) for i in range(5)])
    assert all(r.is_zero() for r in residual(system, sol.alpha))


def test_rank_deficient_system_is_underdetermined():
    chart = ChartContext.standard(3)
    P = SkewBivectorField(chart, {(0, 1): 1})
    sol = solve_alpha(build_system(P, P))
    assert sol.status == "underdetermined"


# -- closedness ---------------------------------------------------------------

def test_closedness():
    assert check_closed(volterra_alpha(5))
    chart = ChartContext.standard(2)
    assert check_closed(OneFormField.zero(chart))
    check = check_closed(OneFormField(chart, ["x2", 0]))
    assert not check
    assert check.witness == (0, 1, -1)


# -- volume reconstruction ----------------------------------------------------

@pytest.mark.parametrize("n", [3, 5, 7])
def test_volterra_density(n):
    vol = reconstruct_volume(volterra_alpha(n))
    dens = vol.explicit_density
    assert dens.rational_part.is_zero()
    prod = Polynomial.one(n)
    for i in range(n):
        prod = prod * Polynomial.var(n, i)
    assert dens.log_terms == ((prod, Fraction(-3, 2)),)


def test_zero_alpha_unit_density():
    vol = reconstruct_volume(OneFormField.zero(ChartContext.standard(3)))
    assert vol.explicit_density.is_unit()


def test_exact_alpha_rational_part():
    chart = ChartContext.standard(2)
    f = chart.parse("x1^2*x2")
    dens = reconstruct_volume(gradient(chart, f)).explicit_density
    assert dens.rational_part == f
    assert dens.log_terms == ()


def test_mixed_rational_and_log():
    chart = ChartContext.standard(2)
    R = chart.parse("x1/x2^2")
    s = chart.parse("x1 + x2")
    alpha = gradient(chart, R) + OneFormField(chart, [s.diff(i) / s * Fraction(1, 3) for i in range(2)])
    dens = integrate_log_rational(alpha)
    assert dens is not None
    assert dens.log_derivative(chart) == alpha
    assert dens.log_terms == ((s.num, Fraction(1, 3)),)


def test_non_closed_alpha_rejected():
    chart = ChartContext.standard(2)
    with pytest.raises(ValueError):
        reconstruct_volume(OneFormField(chart, ["x2", 0]))


def test_coprime_factors():
    x1, x2 = Polynomial.var(2, 0), Polynomial.var(2, 1)
    basis = coprime_factors([x1 ** 2 * (x1 + x2), (x1 + x2) ** 3 * x2, Polynomial.constant(2, 5)])
    assert sorted(map(str, basis)) == sorted(map(str, [x1, x2, x1 + x2]))


# -- verdict ------------------------------------------------------------------

def test_volterra_flat_at_point():
    P, Q = volterra(5)
    report = flatness_verdict(P, Q, (1, 2, 3, 4, 5))
    assert report.flat
    assert report.alpha == volterra_alpha(5)
    assert report.volume.explicit_density.format(P.chart) == "(x1*x2*x3*x4*x5)^(-3/2)"
    assert report.genericity.generic


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_canonical_flat(n):
    P, Q = canonical_pair(n)
    report = flatness_verdict(P, Q, default_point(2 * n + 1))
    assert report.flat and report.alpha.is_zero()
    assert report.volume.explicit_density.is_unit()


def test_random_point_default_is_seeded():
    P, Q = volterra(3)
    a = flatness_verdict(P, Q, seed=5)
    b = flatness_verdict(P, Q, seed=5)
    assert a.point == b.point and a.flat


def test_mutated_volterra_negative():
    P, Q = volterra(5)
    for ij in [(0, 1), (0, 2)]:
        report = flatness_verdict(P, mutate_drop_term(Q, *ij), (2, 3, 5, 7, 11))
        assert report.verdict in ("not_poisson", "not_compatible")


def test_perturbed_verdict():
    P, Q = volterra(5)
    report = flatness_verdict(P, Q, (2, 3, 5, 7, 11), perturb_rhs=7)
    assert report.verdict == "not_unimodular"
    assert report.inconsistency_witness is not None


def test_degenerate_canonical_drop():
    P, Q = canonical_pair(2)
    report = flatness_verdict(P, mutate_drop_term(Q, 0, 3), default_point(5))
    assert report.verdict == "not_generic"


def test_even_dimension_not_generic():
    chart = ChartContext.standard(4)
    P = SkewBivectorField(chart, {(0, 1): 1, (2, 3): 1})
    assert flatness_verdict(P, P, default_point(4)).verdict == "not_generic"


def test_undefined_point_rejected():
    P, Q = volterra(3)
    P2 = SkewBivectorField(P.chart, {(0, 1): "1/x1"})
    with pytest.raises(ZeroDivisionError):
        flatness_verdict(P2, Q, (0, 1, 1))


def test_underdetermined_generic_raises(monkeypatch):
    import bihamflat.unimod as unimod
    from bihamflat.unimod import SolveResult
    monkeypatch.setattr(unimod, "solve_alpha", lambda system: SolveResult("underdetermined", witness=0))
    P, Q = canonical_pair(1)
    with pytest.raises(InternalConsistencyError):
        flatness_verdict(P, Q, default_point(3))


# -- coordinate covariance ----------------------------------------------------

def unimodular_change(dim, rng):
    """Integer matrix with determinant 1 and its inverse, from random shears."""
    A = [[Fraction(int(i == j)) for j in range(dim)] for i in range(dim)]
    Ainv = [row[:] for row in A]
    for _ in range(dim + 1):
        i, j = rng.sample(range(dim), 2)
        c = rng.choice([-1, 1])
        E = [[Fraction(int(a == b)) for b in range(dim)] for a in range(dim)]
        Einv = [row[:] for row in E]
        E[i][j], Einv[i][j] = Fraction(c), Fraction(-c)
        A = linalg.matmul(A, E)
        Ainv = linalg.matmul(Einv, Ainv)
    return A, Ainv


def pull_back(P, A, Ainv):
    chart = P.chart
    n = chart.dim
    images = [Polynomial(n, {tuple(int(k == l) for k in range(n)): A[i][l] for l in range(n) if A[i][l]})
              for i in range(n)]
    M = [[P[i, j].compose(images) for j in range(n)] for i in range(n)]
    out = {}
    for k in range(n):
        for l in range(k + 1, n):
            acc = RationalFunction.zero(n)
            for i in range(n):
                for j in range(n):
                    if Ainv[k][i] and Ainv[l][j] and not M[i][j].is_zero():
                        acc = acc + M[i][j] * (Ainv[k][i] * Ainv[l][j])
            out[(k, l)] = acc
    return SkewBivectorField(chart, out), images


@pytest.mark.parametrize("n,seed", [(3, 0), (3, 1), (5, 2)])
def test_coordinate_covariance(n, seed):
    rng = random.Random(seed)
    A, Ainv = unimodular_change(n, rng)
    assert linalg.det(A) == 1
    P, Q = volterra(n)
    P2, images = pull_back(P, A, Ainv)
    Q2, _ = pull_back(Q, A, Ainv)
    sol = solve_alpha(build_system(P2, Q2))
    assert sol.solved
    alpha = volterra_alpha(n)
    expected = [sum((alpha[i].compose(images) * A[i][k] for i in range(n) if A[i][k]), RationalFunction.zero(n))
                for k in range(n)]
    assert list(sol.alpha) == expected
