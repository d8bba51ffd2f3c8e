"""Unimodularity system for a bihamiltonian pair and the flatness verdict.

A volume form ``f dx^1 ∧ ... ∧ dx^N`` is invariant for ``P`` exactly when
``P^{ij} ∂_j f + f ∂_j P^{ij} = 0``; with ``α = d log f`` this is linear in
``α``. Stacking the equations for ``P`` and ``Q`` gives an overdetermined
system whose unique solution, when closed, is the log-derivative of a
common invariant volume.
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from .expr import ChartContext, Polynomial, RationalFunction, poly_gcd
from .pencil_point import GenericityCertificate, genericity_certificate
from .poisson import BracketCheck, InternalConsistencyError, is_compatible, is_poisson
from .tensor import (
    BivectorPencil,
    ExplicitDensity,
    OneFormField,
    SkewBivectorField,
    VolumeForm,
    divergence,
    exterior_derivative,
)

log = logging.getLogger(__name__)

VERDICTS = ("flat", "not_unimodular", "not_generic", "not_compatible", "not_poisson")


@dataclass(frozen=True)
class UnimodularSystem:
    """Rows ``0..N-1``: ``P^{ij} α_j = -∂_j P^{ij}``; rows ``N..2N-1``: same for ``Q``."""

    chart: ChartContext
    matrix: Tuple[Tuple[RationalFunction, ...], ...]
    rhs: Tuple[RationalFunction, ...]

    def perturbed(self, row: int, amount=1) -> "UnimodularSystem":
        rhs = list(self.rhs)
        rhs[row] = rhs[row] + amount
        return UnimodularSystem(self.chart, self.matrix, tuple(rhs))


def build_system(P: SkewBivectorField, Q: SkewBivectorField) -> UnimodularSystem:
    if P.chart != Q.chart:
        raise ValueError("P and Q live on different charts")
    rows, rhs = [], []
    for T in (P, Q):
        div = divergence(T)
        M = T.matrix()
        for i in range(T.dim):
            rows.append(tuple(M[i]))
            rhs.append(-div[i])
    return UnimodularSystem(P.chart, tuple(rows), tuple(rhs))


@dataclass(frozen=True)
class SolveResult:
    """``status`` is ``solved``, ``inconsistent`` or ``underdetermined``.

    For ``inconsistent`` the witness is ``(row, value)``: input row whose
    reduced form has zero coefficients and nonzero right-hand side ``value``.
    For ``underdetermined`` it is a free column index.
    """

    status: str
    alpha: Optional[OneFormField] = None
    witness: object = None

    @property
    def solved(self) -> bool:
        return self.status == "solved"


def solve_alpha(system: UnimodularSystem) -> SolveResult:
    """Exact elimination over the rational-function field, pivoting on the
    entry with the fewest monomials."""
    ech = linalg.row_reduce([list(r) for r in system.matrix], list(system.rhs))
    bad = ech.inconsistent_row()
    if bad is not None:
        return SolveResult("inconsistent", witness=(ech.origin[bad], ech.rhs[bad]))
    free = ech.free_columns()
    if free:
        return SolveResult("underdetermined", witness=free[0])
    comps = [None] * ech.ncols
    for r, c in ech.pivots:
        comps[c] = ech.rhs[r]
    return SolveResult("solved", alpha=OneFormField(system.chart, comps))


def residual(system: UnimodularSystem, alpha: OneFormField) -> List[RationalFunction]:
    """``matrix · α - rhs`` row by row."""
    out = []
    for row, b in zip(system.matrix, system.rhs):
        acc = -b
        for a, x in zip(row, alpha):
            if not a.is_zero() and not x.is_zero():
                acc = acc + a * x
        out.append(acc)
    return out


@dataclass(frozen=True)
class ClosedCheck:
    closed: bool
    witness: Optional[Tuple[int, int, RationalFunction]] = None

    def __bool__(self):
        return self.closed


def check_closed(alpha: OneFormField) -> ClosedCheck:
    d = exterior_derivative(alpha)
    items = d.items()
    if not items:
        return ClosedCheck(True)
    (i, j), v = items[0]
    return ClosedCheck(False, (i, j, v))


# -- restricted integrator ----------------------------------------------------

def _split_monomial(p: Polynomial) -> Tuple[List[Polynomial], Polynomial]:
    n = p.nvars
    mono = p.monomial_content()
    factors = []
    for i, e in enumerate(mono):
        factors.extend([Polynomial.var(n, i)] * e)
    rest = p.try_divide(Polynomial(n, {mono: 1})) if any(mono) else p
    return factors, rest.primitive()


def coprime_factors(polys: Sequence[Polynomial]) -> List[Polynomial]:
    """Pairwise coprime, squarefree nonconstant factors whose products recover
    every input up to constants (gcd-based refinement, no factorization)."""
    basis: List[Polynomial] = []
    for p in polys:
        if p.is_zero() or p.is_constant():
            continue
        vs, rest = _split_monomial(p)
        basis.extend(vs)
        if not rest.is_constant():
            basis.append(rest)
    changed = True
    while changed:
        changed = False
        uniq = []
        for b in basis:
            if b not in uniq:
                uniq.append(b)
        basis = uniq
        for a_i in range(len(basis)):
            for b_i in range(a_i + 1, len(basis)):
                a, b = basis[a_i], basis[b_i]
                g = poly_gcd(a, b)
                if not g.is_constant():
                    new = [g, a.divmod_exact(g).primitive(), b.divmod_exact(g).primitive()]
                    rest = [x for k, x in enumerate(basis) if k not in (a_i, b_i)]
                    basis = rest + [x for x in new if not x.is_constant()]
                    changed = True
                    break
            if changed:
                break
        if changed:
            continue
        for k, f in enumerate(basis):
            for v in sorted(f.variables()):
                g = poly_gcd(f, f.diff(v))
                if not g.is_constant():
                    basis = basis[:k] + basis[k + 1:] + [g, f.divmod_exact(g).primitive()]
                    changed = True
                    break
            if changed:
                break
    return sorted(basis, key=lambda q: (q.total_degree(), q.sorted_terms()[0][0][::-1]), reverse=False)


def _multiplicity(p: Polynomial, q: Polynomial) -> int:
    k = 0
    while True:
        r = p.try_divide(q)
        if r is None:
            return k
        p = r
        k += 1


def _monomials_up_to(nvars: int, degree: int):
    out = []
    for d in range(degree + 1):
        for combo in combinations_with_replacement(range(nvars), d):
            m = [0] * nvars
            for i in combo:
                m[i] += 1
            out.append(tuple(m))
    return out


MAX_ANSATZ_UNKNOWNS = 3000


def integrate_log_rational(alpha: OneFormField) -> Optional[ExplicitDensity]:
    """Find ``R`` and constants ``c_k`` with ``α = dR + sum c_k dq_k / q_k``.

    The ``q_k`` run over gcd-coprime factors of the denominators; ``R`` has
    denominator ``prod q_k^(m_k - 1)`` and a numerator of bounded degree with
    unknown coefficients. Returns None when the ansatz has no solution.
    """
    chart = alpha.chart
    n = chart.dim
    if alpha.is_zero():
        return ExplicitDensity(RationalFunction.zero(n))
    qs = coprime_factors([a.den for a in alpha])
    mult = [max(_multiplicity(a.den, q) for a in alpha) for q in qs]
    one = Polynomial.one(n)
    DR = one
    for q, m in zip(qs, mult):
        if m > 1:
            DR = DR * q ** (m - 1)
    Pq = one
    for q in qs:
        Pq = Pq * q
    M = DR * DR * Pq
    targets = []
    for a in alpha:
        t = RationalFunction(M) * a
        if not t.is_polynomial():
            return None
        targets.append(t.num.scale(1 / Fraction(t.den.constant_value())))
    excess = max(a.num.total_degree() - a.den.total_degree() for a in alpha if not a.is_zero())
    dN = max(0, DR.total_degree() + excess + 1)
    if comb(n + dN, dN) + len(qs) > MAX_ANSATZ_UNKNOWNS:
        log.info("integrator ansatz too large (degree %d in %d variables)", dN, n)
        return None
    monos = [m for m in _monomials_up_to(n, dN) if any(m)]  # constants in N are irrelevant
    dDR = [DR.diff(j) for j in range(n)]
    columns: List[List[Polynomial]] = []
    for m in monos:
        mp = Polynomial(n, {m: 1})
        columns.append([(mp.diff(j) * DR - mp * dDR[j]) * Pq for j in range(n)])
    DR2 = DR * DR
    for k, q in enumerate(qs):
        others = one
        for l, ql in enumerate(qs):
            if l != k:
                others = others * ql
        columns.append([q.diff(j) * DR2 * others for j in range(n)])
    keys = set()
    for col in columns:
        for j, p in enumerate(col):
            keys.update((j, mm) for mm in p.terms)
    for j, t in enumerate(targets):
        keys.update((j, mm) for mm in t.terms)
    keys = sorted(keys)
    rows = [[Fraction(col[j].terms.get(mm, 0)) for col in columns] for j, mm in keys]
    rhs = [Fraction(targets[j].terms.get(mm, 0)) for j, mm in keys]
    sol = linalg.solve_affine(rows, rhs)
    if sol is None:
        return None
    N = Polynomial(n, {m: c for m, c in zip(monos, sol[:len(monos)])})
    R = RationalFunction(N, DR)
    cs = sol[len(monos):]
    grouped: Dict[Fraction, Polynomial] = {}
    for q, c in zip(qs, cs):
        if c != 0:
            grouped[c] = grouped[c] * q if c in grouped else q
    log_terms = tuple(sorted(((p, c) for c, p in grouped.items()), key=lambda t: t[1]))
    dens = ExplicitDensity(R, log_terms)
    if dens.log_derivative(chart) != alpha:
        return None
    return dens


def reconstruct_volume(alpha: OneFormField) -> VolumeForm:
    """Invariant volume with log-derivative ``α``; the explicit density is
    filled in when the restricted integrator succeeds."""
    if not check_closed(alpha):
        raise ValueError("volume reconstruction needs a closed log-derivative")
    return VolumeForm(alpha.chart, alpha, integrate_log_rational(alpha))


# -- verdict ------------------------------------------------------------------

@dataclass
class FlatnessReport:
    verdict: str
    point: Tuple[Fraction, ...]
    chart: ChartContext
    poisson_P: Optional[BracketCheck] = None
    poisson_Q: Optional[BracketCheck] = None
    compatibility: Optional[BracketCheck] = None
    genericity: Optional[GenericityCertificate] = None
    solve_status: Optional[str] = None
    inconsistency_witness: Optional[Tuple[int, RationalFunction]] = None
    alpha: Optional[OneFormField] = None
    closedness_witness: Optional[Tuple[int, int, RationalFunction]] = None
    volume: Optional[VolumeForm] = None
    notes: List[str] = field(default_factory=list)

    @property
    def flat(self) -> bool:
        return self.verdict == "flat"


def default_point(dim: int) -> Tuple[Fraction, ...]:
    """Distinct small primes, away from the coordinate hyperplanes."""
    primes = []
    k = 2
    while len(primes) < dim:
        if all(k % p for p in primes):
            primes.append(k)
        k += 1
    return tuple(Fraction(p) for p in primes)


def _defined_at(T: SkewBivectorField, point) -> bool:
    return all(v.den.evaluate(point) != 0 for _, v in T.items())


def random_point(P: SkewBivectorField, Q: SkewBivectorField, seed: int, tries: int = 64):
    rng = random.Random(seed)
    for _ in range(tries):
        pt = tuple(Fraction(rng.choice([-1, 1]) * rng.randint(1, 30), rng.randint(1, 5)) for _ in range(P.dim))
        if _defined_at(P, pt) and _defined_at(Q, pt):
            return pt
    raise ValueError("could not find a random point where the pencil is defined")


def flatness_verdict(P: SkewBivectorField, Q: SkewBivectorField, point: Optional[Sequence] = None,
                     seed: int = 0, perturb_rhs: Optional[int] = None) -> FlatnessReport:
    """Run the whole criterion: Poisson and compatibility checks, genericity at
    ``point``, then solve, closedness and volume reconstruction.

    ``point=None`` draws a seeded random rational point. ``perturb_rhs`` adds
    one to the right-hand side of the given (0-based) row of the system, a
    hook for exercising the non-unimodular path.
    """
    chart = P.chart
    if point is None:
        point = random_point(P, Q, seed)
    point = tuple(Fraction(x) for x in point)
    if len(point) != chart.dim:
        raise ValueError(f"point has {len(point)} coordinates, expected {chart.dim}")
    if not (_defined_at(P, point) and _defined_at(Q, point)):
        raise ZeroDivisionError("a tensor entry has a vanishing denominator at the evaluation point")
    report = FlatnessReport("flat", point, chart)

    report.poisson_P = is_poisson(P)
    report.poisson_Q = is_poisson(Q)
    if not (report.poisson_P and report.poisson_Q):
        report.verdict = "not_poisson"
        return report
    report.compatibility = is_compatible(P, Q)
    if not report.compatibility:
        report.verdict = "not_compatible"
        return report
    if chart.dim % 2 == 0:
        report.verdict = "not_generic"
        report.notes.append("even dimension: the criterion covers odd-dimensional structures only")
        return report
    report.genericity = genericity_certificate(BivectorPencil(P, Q), point)
    if not report.genericity.generic:
        report.verdict = "not_generic"
        return report

    system = build_system(P, Q)
    if perturb_rhs is not None:
        system = system.perturbed(perturb_rhs)
        report.notes.append(f"right-hand side of row {perturb_rhs + 1} perturbed by +1")
    sol = solve_alpha(system)
    report.solve_status = sol.status
    if sol.status == "inconsistent":
        report.verdict = "not_unimodular"
        report.inconsistency_witness = sol.witness
        return report
    if sol.status == "underdetermined":
        raise InternalConsistencyError("generic pencil produced a rank-deficient unimodularity system")
    if any(not r.is_zero() for r in residual(system, sol.alpha)):
        raise InternalConsistencyError("solved α does not satisfy the system")
    report.alpha = sol.alpha
    closed = check_closed(sol.alpha)
    if not closed:
        report.verdict = "not_unimodular"
        report.closedness_witness = closed.witness
        return report
    report.volume = reconstruct_volume(sol.alpha)
    if report.volume.explicit_density is None:
        report.notes.append("no closed-form density found; the volume is recorded through its log-derivative")
    return report
