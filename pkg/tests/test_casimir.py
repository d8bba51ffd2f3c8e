from fractions import Fraction

import pytest

from bihamflat.casimir import (
    casimir_certificate,
    lambda_alpha,
    pencil_kernel_residual,
    sample_parameters,
    twisted_differential,
    verify_kernel_form,
)
from bihamflat.expr import ChartContext
from bihamflat.models import canonical_pair, volterra
from bihamflat.tensor import (
    BivectorPencil,
    ExplicitDensity,
    MissingDensityError,
    OneFormField,
    SkewBivectorField,
    VolumeForm,
    contract_with_volume,
    exterior_derivative,
)
from bihamflat.unimod import default_point, flatness_verdict


def reconstructed(n):
    P, Q = volterra(n)
    report = flatness_verdict(P, Q, default_point(n))
    assert report.flat
    return P, Q, report.volume


@pytest.mark.parametrize("n", [3, 5, 7])
def test_volterra_certificate(n):
    P, Q, vol = reconstructed(n)
    cert = casimir_certificate(P, Q, vol, default_point(n))
    assert cert.valid
    assert cert.degree == (n - 1) // 2
    assert len(cert.samples) == n + 2
    # top coefficient is the contraction of Λ^k Q alone
    top = contract_with_volume(BivectorPencil(Q, SkewBivectorField(Q.chart)), vol).coefficient(0)
    assert cert.form.coefficient(cert.degree) == top
    assert not top.is_zero()


def test_kernel_residual_identically_zero():
    P, Q, vol = reconstructed(5)
    form = lambda_alpha(P, Q, vol)
    residuals = pencil_kernel_residual(P, Q, form)
    assert len(residuals) == form.degree + 2
    assert all(r.is_zero() for r in residuals)


def test_canonical_dim3_unit_density():
    P, Q = canonical_pair(1)
    cert = casimir_certificate(P, Q, None, default_point(3), unit_density=True)
    assert cert.valid and cert.degree == 1
    assert [list(c) for c in cert.form.coefficients] == [[0, 0, 1], [0, -1, 0]]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_canonical_with_reconstructed_volume(n):
    P, Q = canonical_pair(n)
    report = flatness_verdict(P, Q, default_point(2 * n + 1))
    cert = casimir_certificate(P, Q, report.volume, report.point)
    assert cert.valid and cert.degree == n


def test_zero_Q_degree_zero():
    P, _ = canonical_pair(2)
    Q = SkewBivectorField(P.chart)
    cert = casimir_certificate(P, Q, None, default_point(5), unit_density=True)
    assert cert.degree == 0 and cert.valid


def test_non_invariant_density_reports_flag():
    P, Q = canonical_pair(1)
    chart = P.chart
    x1 = chart.parse("x1").num
    vol = VolumeForm.from_density(chart, ExplicitDensity(chart.zero(), ((x1, Fraction(1)),)))
    cert = casimir_certificate(P, Q, vol, default_point(3))
    assert not cert.valid
    assert cert.failed_flags() == ["closed_ok"]


def test_density_undefined_at_point():
    P, Q, vol = reconstructed(3)
    cert = casimir_certificate(P, Q, vol, (0, 1, 1))
    assert not cert.nonvanishing_ok
    assert cert.failed_flags() == ["nonvanishing_ok"]


def test_missing_volume_requires_unit_flag():
    P, Q = canonical_pair(1)
    with pytest.raises(MissingDensityError):
        lambda_alpha(P, Q, None)


def test_sample_parameters_distinct_and_seeded():
    a = sample_parameters(9, seed=3)
    assert len(set(a)) == 9
    assert a == sample_parameters(9, seed=3)


# -- single-tensor kernel form ------------------------------------------------

@pytest.mark.parametrize("n", [1, 2, 3])
def test_kernel_form_canonical(n):
    P, _ = canonical_pair(n)
    check = verify_kernel_form(P)
    comps = list(check.alpha)
    assert all(c == 0 for c in comps[:-1])
    assert comps[-1] in (1, -1)
    assert check.kernel_ok and check.closed_ok and check.invariant


def test_kernel_form_rank_deficient():
    chart = ChartContext.standard(5)
    P = SkewBivectorField(chart, {(0, 1): 1})
    check = verify_kernel_form(P)
    assert check.alpha.is_zero()
    assert check.kernel_ok and check.closed_ok


def test_kernel_form_volterra():
    P, _, vol = reconstructed(5)
    check = verify_kernel_form(P, vol)
    assert check.kernel_ok and check.closed_ok and check.invariant


def test_twisted_differential_matches_product_rule():
    chart = ChartContext.standard(2)
    beta = OneFormField(chart, ["x2", "x1^2"])
    # ρ = x1: d(ρβ)/ρ = dβ + dx1/x1 ∧ β
    gamma = OneFormField(chart, ["1/x1", 0])
    rho_beta = OneFormField(chart, ["x1*x2", "x1^3"])
    direct = exterior_derivative(rho_beta)[0, 1] / chart.parse("x1")
    assert twisted_differential(beta, gamma)[0, 1] == direct
