"""Built-in bihamiltonian structures and mutation helpers."""
from __future__ import annotations

import warnings
from typing import Tuple

from .expr import ChartContext, RationalFunction
from .tensor import SkewBivectorField


def volterra(n: int) -> Tuple[SkewBivectorField, SkewBivectorField]:
    """Bihamiltonian pair of the periodic Volterra lattice on ``(x1, ..., xn)``.

    With cyclic indices,

        P_ij = (δ_{i+1,j} - δ_{i,j+1}) x_i x_j
        Q_ij = (δ_{i+1,j} - δ_{i,j+1}) x_i x_j (x_i + x_j)
               + δ_{i+2,j} x_i x_{i+1} x_{i+2} - δ_{i-2,j} x_i x_{i-1} x_{i-2}

    No summation is implied; every matching δ-term contributes, so the bands
    that coincide for small ``n`` are added together.
    """
    if n < 3:
        raise ValueError("the periodic Volterra lattice needs n >= 3")
    if n % 2 == 0:
        warnings.warn(f"volterra({n}): even n gives a non-generic pencil", stacklevel=2)
    chart = ChartContext.standard(n)
    x = [chart.coordinate(i) for i in range(n)]

    def cyc(k):
        return k % n

    P_entries = {}
    Q_entries = {}
    for i in range(n):
        for j in range(i + 1, n):
            p = RationalFunction.zero(n)
            q = RationalFunction.zero(n)
            quad = x[i] * x[j]
            cubic = quad * (x[i] + x[j])
            if cyc(i + 1) == j:
                p = p + quad
                q = q + cubic
            if i == cyc(j + 1):
                p = p - quad
                q = q - cubic
            if cyc(i + 2) == j:
                q = q + x[i] * x[cyc(i + 1)] * x[cyc(i + 2)]
            if cyc(i - 2) == j:
                q = q - x[i] * x[cyc(i - 1)] * x[cyc(i - 2)]
            if not p.is_zero():
                P_entries[(i, j)] = p
            if not q.is_zero():
                Q_entries[(i, j)] = q
    return SkewBivectorField(chart, P_entries), SkewBivectorField(chart, Q_entries)


def canonical_pair(n: int) -> Tuple[SkewBivectorField, SkewBivectorField]:
    """Constant generic pair in dimension ``2n+1``:
    ``P = sum ∂_i ∧ ∂_{n+i}``, ``Q = sum ∂_i ∧ ∂_{n+i+1}`` (1-based)."""
    if n < 1:
        raise ValueError("canonical_pair needs n >= 1")
    chart = ChartContext.standard(2 * n + 1)
    P = {(i, n + i): 1 for i in range(n)}
    Q = {(i, n + i + 1): 1 for i in range(n)}
    return SkewBivectorField(chart, P), SkewBivectorField(chart, Q)


def mutate_drop_term(Q: SkewBivectorField, i: int, j: int) -> SkewBivectorField:
    """Copy of ``Q`` with entry ``(i, j)`` (0-based) set to zero."""
    if Q[i, j].is_zero():
        raise ValueError(f"entry ({i}, {j}) is already zero")
    a, b = (i, j) if i < j else (j, i)
    return SkewBivectorField(Q.chart, {k: v for k, v in Q.items() if k != (a, b)})


def mutate_restore_term(Q: SkewBivectorField, i: int, j: int, value: RationalFunction) -> SkewBivectorField:
    if not Q[i, j].is_zero():
        raise ValueError(f"entry ({i}, {j}) is not zero")
    entries = dict(Q.items())
    if i < j:
        entries[(i, j)] = value
    else:
        entries[(j, i)] = -value
    return SkewBivectorField(Q.chart, entries)
