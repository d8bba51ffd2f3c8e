"""Poisson brackets, Hamiltonian vector fields and the Schouten bracket."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

from .expr import RationalFunction
from .tensor import SkewBivectorField, TrivectorField, VectorField, iter_triples


def bracket(P: SkewBivectorField, f: RationalFunction, g: RationalFunction) -> RationalFunction:
    """``{f, g} = P^{ij} ∂_i f ∂_j g``."""
    n = P.dim
    df = [f.diff(i) for i in range(n)]
    dg = [g.diff(i) for i in range(n)]
    acc = RationalFunction.zero(n)
    for (i, j), v in P.items():
        t = df[i] * dg[j] - df[j] * dg[i]
        if not t.is_zero():
            acc = acc + v * t
    return acc


def hamiltonian_vf(P: SkewBivectorField, H: RationalFunction) -> VectorField:
    """``v^i = P^{ij} ∂_j H``."""
    n = P.dim
    dH = [H.diff(j) for j in range(n)]
    comps = [RationalFunction.zero(n) for _ in range(n)]
    for (i, j), v in P.items():
        comps[i] = comps[i] + v * dH[j]
        comps[j] = comps[j] - v * dH[i]
    return VectorField(P.chart, comps)


def schouten(P: SkewBivectorField, Q: SkewBivectorField) -> TrivectorField:
    """Schouten bracket of two bivectors.

    ``[P, Q]^{ijk} = sum_l (P^{li} ∂_l Q^{jk} + Q^{li} ∂_l P^{jk}) + cyclic(i, j, k)``.
    With this normalization ``[P, P]^{abc}`` is twice the Jacobiator
    ``{{x_a, x_b}, x_c} + cyclic`` of the bracket defined by ``P``.
    """
    if P.chart != Q.chart:
        raise ValueError("bivectors live on different charts")
    n = P.dim
    # derivative tables, only for nonzero entries
    dP = {k: [v.diff(l) for l in range(n)] for k, v in P.items()}
    dQ = {k: [v.diff(l) for l in range(n)] for k, v in Q.items()}
    Pm, Qm = P.matrix(), Q.matrix()

    def d(table, a, b, l):
        if a < b:
            row = table.get((a, b))
            return row[l] if row is not None else None
        row = table.get((b, a))
        return -row[l] if row is not None else None

    entries = {}
    for i, j, k in iter_triples(n):
        acc = RationalFunction.zero(n)
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            for l in range(n):
                p_la, q_la = Pm[l][a], Qm[l][a]
                if not p_la.is_zero():
                    dq = d(dQ, b, c, l)
                    if dq is not None and not dq.is_zero():
                        acc = acc + p_la * dq
                if not q_la.is_zero():
                    dp = d(dP, b, c, l)
                    if dp is not None and not dp.is_zero():
                        acc = acc + q_la * dp
        entries[(i, j, k)] = acc
    return TrivectorField(P.chart, entries)


@dataclass(frozen=True)
class BracketCheck:
    """Outcome of a Jacobi or compatibility test; ``witness`` is a nonzero
    component ``((i, j, k), value)`` of the relevant Schouten bracket."""

    ok: bool
    witness: Optional[Tuple[Tuple[int, int, int], RationalFunction]] = None

    def __bool__(self):
        return self.ok


def is_poisson(P: SkewBivectorField) -> BracketCheck:
    w = schouten(P, P).first_nonzero()
    return BracketCheck(w is None, w)


class InternalConsistencyError(RuntimeError):
    pass


def is_compatible(P: SkewBivectorField, Q: SkewBivectorField) -> BracketCheck:
    """Mixed bracket ``[P, Q] = 0``.

    Cross-checked through the sum path: ``[P+Q, P+Q] - [P, P] - [Q, Q]`` must
    equal ``2 [P, Q]``, so for Poisson ``P`` and ``Q`` the verdict coincides
    with ``is_poisson(P + Q)``.
    """
    mixed = schouten(P, Q)
    total = schouten(P + Q, P + Q)
    pp, qq = schouten(P, P), schouten(Q, Q)
    for ijk in iter_triples(P.dim):
        if total[ijk] - pp[ijk] - qq[ijk] != mixed[ijk] * 2:
            raise InternalConsistencyError(f"mixed Schouten bracket and [P+Q, P+Q] disagree at {ijk}")
    w = mixed.first_nonzero()
    return BracketCheck(w is None, w)


def jacobiator(P: SkewBivectorField, a: int, b: int, c: int) -> RationalFunction:
    """``{{x_a, x_b}, x_c} + cyclic`` computed through ``bracket``."""
    chart = P.chart
    x = [chart.coordinate(i) for i in range(chart.dim)]

    def br(f, g):
        return bracket(P, f, g)

    return br(br(x[a], x[b]), x[c]) + br(br(x[b], x[c]), x[a]) + br(br(x[c], x[a]), x[b])
