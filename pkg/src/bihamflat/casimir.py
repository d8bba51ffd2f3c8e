"""λ-Casimir certificates built from the invariant volume form.

For a volume form ``ω`` invariant under the whole pencil, the one-form
``α(λ) = ω̂(Λ^n(P + λQ))`` is a degree-``n`` polynomial in ``λ`` lying in the
kernel of ``P + λQ`` and closed for every ``λ``. Its potential ``F(λ)`` is
never computed; all three properties are checked on ``α(λ)`` itself.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .expr import RationalFunction
from .tensor import (
    BivectorPencil,
    LambdaOneForm,
    MissingDensityError,
    OneFormField,
    SkewBivectorField,
    TwoFormField,
    VolumeForm,
    apply,
    contract_with_volume,
    divergence,
    exterior_derivative,
)


def lambda_alpha(P: SkewBivectorField, Q: SkewBivectorField, volume: Optional[VolumeForm],
                 unit_density: bool = False) -> LambdaOneForm:
    """``ω̂(Λ^n(P + λQ))``; ``volume=None`` is only accepted with ``unit_density``."""
    if volume is None and not unit_density:
        raise MissingDensityError("no volume form given; pass unit_density=True for dx^1∧...∧dx^N")
    return contract_with_volume(BivectorPencil(P, Q), volume)


def twisted_differential(beta: OneFormField, log_derivative: OneFormField) -> TwoFormField:
    """Rational part of ``d(ρβ)`` divided by ``ρ``, where ``d log ρ = log_derivative``:
    ``dβ + (d log ρ) ∧ β``."""
    d = exterior_derivative(beta)
    n = beta.chart.dim
    entries = {}
    for i in range(n):
        for j in range(i + 1, n):
            g = log_derivative[i] * beta[j] - log_derivative[j] * beta[i]
            entries[(i, j)] = d[i, j] + g
    return TwoFormField(beta.chart, entries)


def pencil_kernel_residual(P: SkewBivectorField, Q: SkewBivectorField, form: LambdaOneForm):
    """Coefficients of ``(P + λQ) α(λ)`` in powers of λ (rational parts)."""
    out = []
    for k in range(form.degree + 2):
        v = apply(P, form.coefficient(k))
        if k > 0:
            v = v + apply(Q, form.coefficient(k - 1))
        out.append(v)
    return out


def is_invariant(P: SkewBivectorField, volume: VolumeForm) -> bool:
    """``P^{ij} γ_j + ∂_j P^{ij} = 0`` for the log-derivative ``γ``."""
    return (apply(P, volume.log_derivative) + divergence(P)).is_zero()


@dataclass(frozen=True)
class KernelFormCheck:
    alpha: OneFormField
    kernel_ok: bool
    closed_ok: bool
    invariant: Optional[bool] = None


def verify_kernel_form(P: SkewBivectorField, volume: Optional[VolumeForm] = None) -> KernelFormCheck:
    """Kernel membership and closedness of ``ω̂(Λ^n P)``; ``volume=None`` means
    the coordinate volume element."""
    zero = SkewBivectorField(P.chart)
    form = contract_with_volume(BivectorPencil(P, zero), volume, require_density=False)
    beta = form.coefficient(0)
    kernel_ok = apply(P, beta).is_zero()
    closed_ok = twisted_differential(beta, form.log_derivative()).is_zero()
    invariant = is_invariant(P, volume) if volume is not None else divergence(P).is_zero()
    return KernelFormCheck(beta, kernel_ok, closed_ok, invariant)


@dataclass(frozen=True)
class CasimirCertificate:
    kernel_ok: bool
    closed_ok: bool
    nonvanishing_ok: bool
    degree: int
    point: Tuple[Fraction, ...]
    samples: Tuple[Fraction, ...]
    form: LambdaOneForm

    @property
    def valid(self) -> bool:
        return self.kernel_ok and self.closed_ok and self.nonvanishing_ok

    def failed_flags(self):
        return [name for name in ("kernel_ok", "closed_ok", "nonvanishing_ok") if not getattr(self, name)]


def sample_parameters(count: int, seed: int) -> Tuple[Fraction, ...]:
    """``count`` distinct rational values of λ."""
    rng = random.Random(seed)
    seen = []
    while len(seen) < count:
        v = Fraction(rng.randint(-50, 50), rng.randint(1, 7))
        if v not in seen:
            seen.append(v)
    return tuple(seen)


def casimir_certificate(P: SkewBivectorField, Q: SkewBivectorField, volume: Optional[VolumeForm],
                        point: Sequence, seed: int = 0, unit_density: bool = False) -> CasimirCertificate:
    """Check the λ-Casimir properties of ``α(λ)``.

    ``kernel_ok`` and ``closed_ok`` are identities in λ, tested coefficient by
    coefficient. ``nonvanishing_ok`` evaluates ``α(λ0)`` at ``point`` for
    ``dim + 2`` distinct sampled ``λ0`` and requires a nonzero covector each
    time, with the density defined at the point.
    """
    form = lambda_alpha(P, Q, volume, unit_density=unit_density)
    point = tuple(Fraction(x) for x in point)
    kernel_ok = all(v.is_zero() for v in pencil_kernel_residual(P, Q, form))
    gamma = form.log_derivative()
    closed_ok = all(twisted_differential(c, gamma).is_zero() for c in form.coefficients)

    samples = sample_parameters(P.dim + 2, seed)
    density_ok = True
    if volume is not None and volume.explicit_density is not None:
        try:
            density_ok = volume.explicit_density.defined_at(point)
        except ZeroDivisionError:
            density_ok = False
    nonvanishing_ok = density_ok and bool(form.coefficients)
    if nonvanishing_ok:
        for lam in samples:
            try:
                values = form.at(RationalFunction.constant(P.dim, lam)).evaluate(point)
            except ZeroDivisionError:
                raise ZeroDivisionError("α(λ) has a vanishing denominator at the test point") from None
            if all(v == 0 for v in values):
                nonvanishing_ok = False
                break
    return CasimirCertificate(kernel_ok, closed_ok, nonvanishing_ok, form.degree, point, samples, form)
