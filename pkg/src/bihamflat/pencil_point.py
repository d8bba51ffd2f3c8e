"""Pointwise pencil analysis for odd-dimensional pairs of skew forms."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from . import linalg
from .expr import ChartContext, Polynomial, poly_gcd
from .tensor import BivectorPencil, LamPoly, SkewBivectorField, deleted_pfaffians

Matrix = List[List[Fraction]]


@dataclass(frozen=True)
class ConstantSkewPair:
    """Two exact skew matrices of the same odd size."""

    A: Tuple[Tuple[Fraction, ...], ...]
    B: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        A = tuple(tuple(Fraction(x) for x in row) for row in self.A)
        B = tuple(tuple(Fraction(x) for x in row) for row in self.B)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        n = len(A)
        for M, name in ((A, "A"), (B, "B")):
            if len(M) != n or any(len(r) != n for r in M):
                raise ValueError(f"{name} must be a {n}x{n} matrix")
            for i in range(n):
                for j in range(n):
                    if M[i][j] != -M[j][i]:
                        raise ValueError(f"{name} is not skew-symmetric at ({i}, {j})")

    @property
    def dim(self) -> int:
        return len(self.A)

    def member(self, mu, nu) -> Matrix:
        mu, nu = Fraction(mu), Fraction(nu)
        return [[mu * a + nu * b for a, b in zip(ra, rb)] for ra, rb in zip(self.A, self.B)]

    def as_pencil(self) -> BivectorPencil:
        chart = ChartContext.standard(self.dim)
        return BivectorPencil(SkewBivectorField.from_matrix(chart, self.A),
                              SkewBivectorField.from_matrix(chart, self.B))

    @classmethod
    def from_pencil(cls, pencil: BivectorPencil, point) -> "ConstantSkewPair":
        A, B = pencil.evaluate(point)
        return cls(A, B)


def corank_at(pair: ConstantSkewPair, mu, nu) -> int:
    """``dim - rank(μA + νB)``."""
    if mu == 0 and nu == 0:
        raise ValueError("(mu, nu) must be nonzero")
    return pair.dim - linalg.rank(pair.member(mu, nu))


@dataclass(frozen=True)
class GenericityCertificate:
    """Deleted-Pfaffian witness for ``dim Ker(μP + νQ) = 1`` on all of CP^1.

    The pencil parameter is ``λ = ν/μ``; ``infinity_ok`` covers ``μ = 0``.
    For a degenerate verdict ``locus`` is the common factor of the deleted
    Pfaffians (the zero polynomial when they all vanish identically), and
    ``degenerate_at_infinity`` flags the point ``μ = 0``.
    """

    point: Tuple[Fraction, ...]
    deleted_pfaffians: Tuple[Tuple[Fraction, ...], ...]
    gcd_finite: Tuple[Fraction, ...]
    infinity_ok: bool
    verdict: str

    @property
    def generic(self) -> bool:
        return self.verdict == "generic"

    @property
    def locus(self) -> Optional[Tuple[Fraction, ...]]:
        if self.generic:
            return None
        return self.gcd_finite

    @property
    def degenerate_at_infinity(self) -> bool:
        return not self.infinity_ok


def _univariate(p: LamPoly) -> Polynomial:
    return Polynomial(1, {(k,): c for k, c in enumerate(p.coeffs)})


def _coeff_tuple(p: Polynomial) -> Tuple[Fraction, ...]:
    deg = p.total_degree()
    return tuple(Fraction(p.terms.get((k,), 0)) for k in range(deg + 1))


def genericity_certificate(pencil: Union[BivectorPencil, ConstantSkewPair], point=None) -> GenericityCertificate:
    """Certify Kronecker corank one of the pencil at ``point``.

    Corank exceeds one at some ``(μ:ν)`` exactly when every deleted Pfaffian
    vanishes there, so a nonconstant gcd over Q[λ] (its complex roots
    included) or vanishing of all top coefficients marks degeneracy.
    """
    if isinstance(pencil, ConstantSkewPair):
        pencil = pencil.as_pencil()
        point = tuple(Fraction(0) for _ in range(pencil.dim))
    if point is None:
        raise ValueError("an evaluation point is required")
    point = tuple(Fraction(x) for x in point)
    dim = pencil.dim
    if dim % 2 == 0:
        raise ValueError("genericity certificates are for odd dimension")
    if len(point) != dim:
        raise ValueError(f"point has {len(point)} coordinates, expected {dim}")
    for _, v in list(pencil.P.items()) + list(pencil.Q.items()):
        if v.den.evaluate(point) == 0:
            raise ZeroDivisionError("an entry of the pencil is undefined at the point")
    n = (dim - 1) // 2
    pfs = deleted_pfaffians(pencil, point)
    g = Polynomial.zero(1)
    for p in pfs:
        g = poly_gcd(g, _univariate(p))
    infinity_ok = any(p.coeff(n) != 0 for p in pfs)
    generic = (not g.is_zero()) and g.is_constant() and infinity_ok
    return GenericityCertificate(
        point=point,
        deleted_pfaffians=tuple(tuple(Fraction(c) for c in p.coeffs) for p in pfs),
        gcd_finite=_coeff_tuple(g),
        infinity_ok=infinity_ok,
        verdict="generic" if generic else "degenerate",
    )


def stratum_codim(m: int, dim: int) -> Optional[int]:
    """Codimension of the corank-``m`` forms in ``Λ^2`` of a ``dim``-space;
    None when that stratum is empty."""
    if m < 0:
        raise ValueError("corank must be non-negative")
    if m > dim or (m - dim) % 2:
        return None
    return m * (m - 1) // 2


def random_skew(dim: int, rng: random.Random, low: int = -9, high: int = 9) -> Matrix:
    M = [[Fraction(0)] * dim for _ in range(dim)]
    for i in range(dim):
        for j in range(i + 1, dim):
            v = Fraction(rng.randint(low, high))
            M[i][j] = v
            M[j][i] = -v
    return M


def genericity_sampling(dim: int, trials: int, seed: int, low: int = -9, high: int = 9) -> int:
    """Number of generic pairs among ``trials`` random integer skew pairs."""
    rng = random.Random(seed)
    hits = 0
    for _ in range(trials):
        pair = ConstantSkewPair(random_skew(dim, rng, low, high), random_skew(dim, rng, low, high))
        hits += genericity_certificate(pair).generic
    return hits


# -- Jordan-Kronecker canonical basis -----------------------------------------

class NotGenericError(ValueError):
    pass


class ChainConstructionError(RuntimeError):
    pass


def canonical_matrices(n: int) -> Tuple[Matrix, Matrix]:
    """``A = sum e^i ∧ e^{n+i}``, ``B = sum e^i ∧ e^{n+i+1}`` in dimension ``2n+1``."""
    dim = 2 * n + 1
    A = [[Fraction(0)] * dim for _ in range(dim)]
    B = [[Fraction(0)] * dim for _ in range(dim)]
    for i in range(n):
        A[i][n + i], A[n + i][i] = Fraction(1), Fraction(-1)
        B[i][n + i + 1], B[n + i + 1][i] = Fraction(1), Fraction(-1)
    return A, B


@dataclass(frozen=True)
class CanonicalBasisChange:
    """Columns of ``T`` are the new basis; ``Tᵀ A T`` and ``Tᵀ B T`` are canonical."""

    dim: int
    T: Tuple[Tuple[Fraction, ...], ...]
    attempts: int = field(default=1, compare=False)

    def columns(self) -> List[List[Fraction]]:
        return [list(c) for c in zip(*self.T)]


def _form(M, u, v) -> Fraction:
    return sum((u[i] * M[i][j] * v[j] for i in range(len(u)) for j in range(len(v)) if u[i] and v[j]), Fraction(0))


def _matvec(M, v) -> List[Fraction]:
    return [sum((a * b for a, b in zip(row, v) if a and b), Fraction(0)) for row in M]


def verify_canonical(pair: ConstantSkewPair, T: Sequence[Sequence[Fraction]]) -> bool:
    n = (pair.dim - 1) // 2
    Acan, Bcan = canonical_matrices(n)
    Tt = linalg.transpose(T)
    if linalg.det(T) == 0:
        return False
    return (linalg.matmul(linalg.matmul(Tt, pair.A), T) == Acan
            and linalg.matmul(linalg.matmul(Tt, pair.B), T) == Bcan)


def jk_canonical_basis(pair: ConstantSkewPair, seed: int = 0, max_attempts: int = 16) -> CanonicalBasisChange:
    """Basis ``p_1..p_n, q_1..q_{n+1}`` bringing a generic pair to the single
    Kronecker block.

    The ``q`` chain comes from the coefficients of the polynomial kernel
    vector of ``A + λB`` (its deleted Pfaffians). Each ``p_i`` is a particular
    solution of ``A(p_i, q_j) = δ_ij`` corrected by a combination of the ``q``
    vectors so that the ``p`` span is isotropic for both forms; free
    parameters of that correction are seeded random rationals. The result is
    verified exactly before it is returned.
    """
    dim = pair.dim
    if dim % 2 == 0:
        raise ValueError("canonical basis construction needs odd dimension")
    cert = genericity_certificate(pair)
    if not cert.generic:
        raise NotGenericError("pair is not generic: the pencil has corank > 1 somewhere on CP^1")
    n = (dim - 1) // 2
    A, B = [list(r) for r in pair.A], [list(r) for r in pair.B]
    pfs = cert.deleted_pfaffians

    def w(k):
        return [p[k] if k < len(p) else Fraction(0) for p in pfs]

    # q_j = (-1)^(j-1) w_{n+1-j}, j = 1..n+1
    q = [[x * (-1) ** (j - 1) for x in w(n + 1 - j)] for j in range(1, n + 2)]
    Aq = [_matvec(A, qj) for qj in q]

    rng = random.Random(seed)
    for attempt in range(1, max_attempts + 1):
        def rand():
            return Fraction(rng.randint(-5, 5), rng.randint(1, 4)) if attempt > 1 else Fraction(0)

        p0 = []
        ok = True
        for i in range(n):
            rows = [Aq[j] for j in range(n)]
            rhs = [Fraction(1 if j == i else 0) for j in range(n)]
            ech = linalg.row_reduce(rows, rhs)
            free = ech.free_columns()
            sol = linalg.solve_affine(rows, rhs, [rand() for _ in free])
            if sol is None:
                ok = False
                break
            p0.append(sol)
        if not ok:
            continue
        # unknowns c[i][j], i < n, j <= n, flattened as i * (n+1) + j
        ncol = n * (n + 1)

        def idx(i, j):
            return i * (n + 1) + j

        rows, rhs = [], []
        for i in range(n):
            for k in range(i + 1, n):
                r = [Fraction(0)] * ncol
                r[idx(k, i)] += 1
                r[idx(i, k)] -= 1
                rows.append(r)
                rhs.append(-_form(A, p0[i], p0[k]))
                r = [Fraction(0)] * ncol
                r[idx(k, i + 1)] += 1
                r[idx(i, k + 1)] -= 1
                rows.append(r)
                rhs.append(-_form(B, p0[i], p0[k]))
        if rows:
            ech = linalg.row_reduce(rows, rhs)
            c = linalg.solve_affine(rows, rhs, [rand() for _ in ech.free_columns()])
            if c is None:
                continue
        else:
            c = []
        basis = []
        for i in range(n):
            v = list(p0[i])
            for j in range(n + 1):
                cij = c[idx(i, j)] if c else Fraction(0)
                if cij:
                    v = [a + cij * b for a, b in zip(v, q[j])]
            basis.append(v)
        basis.extend(q)
        T = [[basis[col][row] for col in range(dim)] for row in range(dim)]
        if verify_canonical(pair, T):
            return CanonicalBasisChange(dim, tuple(tuple(r) for r in T), attempt)
    raise ChainConstructionError(f"no verified canonical basis after {max_attempts} attempts")
