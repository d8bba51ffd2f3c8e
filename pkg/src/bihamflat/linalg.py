"""Exact Gaussian elimination over a field of exact scalars.

Works for ``Fraction`` entries and for ``RationalFunction`` entries alike;
``size`` ranks candidate pivots so the structurally simplest one is used.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple


def _default_size(x) -> int:
    size = getattr(x, "size", None)
    if callable(size):
        return size()
    if isinstance(x, Fraction):
        return x.numerator.bit_length() + x.denominator.bit_length()
    return 0


@dataclass
class Echelon:
    """Reduced row echelon form of an augmented matrix ``[A | b]``.

    ``pivots`` lists ``(row, column)``; rows below ``rank`` have zero
    coefficient part.
    """

    rows: List[list]
    rhs: List
    pivots: List[Tuple[int, int]]
    ncols: int
    origin: List[int]

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def inconsistent_row(self) -> Optional[int]:
        for r in range(self.rank, len(self.rows)):
            if not _is_zero(self.rhs[r]):
                return r
        return None

    def free_columns(self) -> List[int]:
        used = {c for _, c in self.pivots}
        return [c for c in range(self.ncols) if c not in used]


def _is_zero(x) -> bool:
    z = getattr(x, "is_zero", None)
    if callable(z):
        return z()
    return x == 0


def row_reduce(A: Sequence[Sequence], b: Optional[Sequence] = None, *,
               size: Callable = _default_size, zero=None) -> Echelon:
    """Gauss-Jordan elimination with row and column choice by pivot ``size``.

    ``origin[r]`` is the input row that was swapped into position ``r``.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    rows = [list(r) for r in A]
    if zero is None:
        zero = rows[0][0] - rows[0][0] if m and n else Fraction(0)
    rhs = list(b) if b is not None else [zero] * m
    pivots: List[Tuple[int, int]] = []
    origin = list(range(m))
    done_cols = set()
    r = 0
    while r < m:
        best = None
        for i in range(r, m):
            for j in range(n):
                if j in done_cols:
                    continue
                x = rows[i][j]
                if _is_zero(x):
                    continue
                key = (size(x), j, i)
                if best is None or key < best[0]:
                    best = (key, i, j)
        if best is None:
            break
        _, i, j = best
        rows[r], rows[i] = rows[i], rows[r]
        rhs[r], rhs[i] = rhs[i], rhs[r]
        origin[r], origin[i] = origin[i], origin[r]
        piv = rows[r][j]
        if not (piv == 1):
            inv = 1 / piv
            rows[r] = [x * inv if not _is_zero(x) else x for x in rows[r]]
            rhs[r] = rhs[r] * inv if not _is_zero(rhs[r]) else rhs[r]
        for k in range(m):
            if k == r:
                continue
            f = rows[k][j]
            if _is_zero(f):
                continue
            rk, rr = rows[k], rows[r]
            rows[k] = [x - f * y if not _is_zero(y) else x for x, y in zip(rk, rr)]
            if not _is_zero(rhs[r]):
                rhs[k] = rhs[k] - f * rhs[r]
        pivots.append((r, j))
        done_cols.add(j)
        r += 1
    return Echelon(rows, rhs, pivots, n, origin)


def rank(A: Sequence[Sequence]) -> int:
    if not A or not A[0]:
        return 0
    return row_reduce(A).rank


def solve_affine(A: Sequence[Sequence], b: Sequence, free_values: Optional[Sequence] = None):
    """One solution of ``A x = b``, free variables set from ``free_values``
    (zeros by default). Returns None when inconsistent."""
    ech = row_reduce(A, b)
    if ech.inconsistent_row() is not None:
        return None
    n = ech.ncols
    zero = Fraction(0)
    x = [zero] * n
    free = ech.free_columns()
    values = list(free_values) if free_values is not None else [zero] * len(free)
    for c, v in zip(free, values):
        x[c] = v
    for r, c in ech.pivots:
        acc = ech.rhs[r]
        for f in free:
            if not _is_zero(ech.rows[r][f]):
                acc = acc - ech.rows[r][f] * x[f]
        x[c] = acc
    return x


def nullspace(A: Sequence[Sequence]) -> List[List]:
    """Basis of the right kernel."""
    ech = row_reduce(A)
    n = ech.ncols
    basis = []
    for f in ech.free_columns():
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for r, c in ech.pivots:
            v[c] = -ech.rows[r][f]
        basis.append(v)
    return basis


def matmul(A, B):
    return [[sum((A[i][k] * B[k][j] for k in range(len(B))), Fraction(0)) for j in range(len(B[0]))]
            for i in range(len(A))]


def transpose(A):
    return [list(r) for r in zip(*A)]


def det(A: Sequence[Sequence[Fraction]]) -> Fraction:
    """Determinant by fraction Gaussian elimination with partial pivoting."""
    n = len(A)
    M = [[Fraction(x) for x in row] for row in A]
    sign = 1
    d = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            M[c], M[p] = M[p], M[c]
            sign = -sign
        d *= M[c][c]
        for r in range(c + 1, n):
            f = M[r][c] / M[c][c]
            if f:
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return sign * d
