"""Multivariate polynomial gcd over the rationals.

Recursive content / primitive-part reduction: a main variable is chosen,
contents in the remaining variables are handled recursively, and the
primitive parts go through a subresultant polynomial remainder sequence.
Everything is exact; there are no modular or randomized steps.
"""
from __future__ import annotations

from typing import Dict, List, Tuple

from .poly import Monomial, Polynomial

UPoly = List[Polynomial]  # coefficient list in the main variable, index = degree


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Primitive, sign-normalized gcd. ``gcd(0, b)`` is ``b`` normalized."""
    if a.nvars != b.nvars:
        raise ValueError("gcd of polynomials in different rings")
    if a.is_zero():
        return b.primitive()
    if b.is_zero():
        return a.primitive()
    return _gcd(a.primitive(), b.primitive())


def poly_lcm(a: Polynomial, b: Polynomial) -> Polynomial:
    if a.is_zero() or b.is_zero():
        return Polynomial.zero(a.nvars)
    g = poly_gcd(a, b)
    return (a.primitive().divmod_exact(g) * b.primitive()).primitive()


def _one(n: int) -> Polynomial:
    return Polynomial.one(n)


def _gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    # a, b: nonzero, primitive, integer coefficients
    n = a.nvars
    if a.is_constant() or b.is_constant():
        return _one(n)
    if a == b:
        return a
    ma, mb = a.monomial_content(), b.monomial_content()
    mono = tuple(min(x, y) for x, y in zip(ma, mb))
    if any(ma):
        a = a.try_divide(Polynomial(n, {ma: 1}))
    if any(mb):
        b = b.try_divide(Polynomial(n, {mb: 1}))
    g = _gcd_stripped(a, b)
    if any(mono):
        g = g.mul_monomial(mono)
    return g.primitive()


def _gcd_stripped(a: Polynomial, b: Polynomial) -> Polynomial:
    n = a.nvars
    if a.is_constant() or b.is_constant():
        return _one(n)
    va, vb = a.variables(), b.variables()
    common = va & vb
    if not common:
        return _one(n)
    if va != common or vb != common:
        ca = _content_over(a, va - common)
        cb = _content_over(b, vb - common)
        return _gcd(ca, cb)
    # cheap exact-divisibility shortcut
    small, big = (a, b) if len(a) <= len(b) else (b, a)
    if small.total_degree() <= big.total_degree() and big.try_divide(small) is not None:
        return small
    v = min(common, key=lambda i: (max(a.degree_in(i), b.degree_in(i)), i))
    ua, ub = _to_upoly(a, v), _to_upoly(b, v)
    conta, contb = _upoly_content(ua), _upoly_content(ub)
    c = _gcd(conta, contb)
    if not conta.is_constant():
        ua = [x.divmod_exact(conta) for x in ua]
    if not contb.is_constant():
        ub = [x.divmod_exact(contb) for x in ub]
    if len(ua) < len(ub):
        ua, ub = ub, ua
    s = subresultant_last(ua, ub)
    if len(s) == 1:
        return c
    cs = _upoly_content(s)
    if not cs.is_constant():
        s = [x.divmod_exact(cs) for x in s]
    return (c * _from_upoly(s, v)).primitive()


def _content_over(p: Polynomial, drop: frozenset) -> Polynomial:
    """gcd of the coefficients of ``p`` viewed as a polynomial in ``drop``."""
    groups: Dict[Tuple[int, ...], Dict[Monomial, object]] = {}
    drop = sorted(drop)
    keep_mask = [i not in drop for i in range(p.nvars)]
    for m, c in p.terms.items():
        key = tuple(m[i] for i in drop)
        mm = tuple(e if k else 0 for e, k in zip(m, keep_mask))
        groups.setdefault(key, {})[mm] = c
    g = None
    for terms in sorted(groups.values(), key=len):
        q = Polynomial(p.nvars, terms, _trusted=True).primitive()
        g = q if g is None else _gcd(g, q)
        if g.is_constant():
            break
    return g


def _to_upoly(p: Polynomial, v: int) -> UPoly:
    deg = p.degree_in(v)
    buckets: List[Dict[Monomial, object]] = [dict() for _ in range(deg + 1)]
    for m, c in p.terms.items():
        e = m[v]
        buckets[e][m[:v] + (0,) + m[v + 1:]] = c
    return [Polynomial(p.nvars, t, _trusted=True) for t in buckets]


def _from_upoly(u: UPoly, v: int) -> Polynomial:
    n = u[0].nvars
    out = {}
    for e, coeff in enumerate(u):
        for m, c in coeff.terms.items():
            out[m[:v] + (e,) + m[v + 1:]] = c
    return Polynomial(n, out, _trusted=True)


def _upoly_content(u: UPoly) -> Polynomial:
    g = None
    for x in sorted((x for x in u if not x.is_zero()), key=len):
        x = x.primitive()
        g = x if g is None else _gcd(g, x)
        if g.is_constant():
            return _one(x.nvars)
    return g


def _trim(u: UPoly) -> UPoly:
    while len(u) > 1 and u[-1].is_zero():
        u.pop()
    return u


def _is_zero(u: UPoly) -> bool:
    return len(u) == 1 and u[0].is_zero()


def prem(a: UPoly, b: UPoly) -> UPoly:
    """Pseudo-remainder ``lc(b)^(deg a - deg b + 1) * a mod b``."""
    m, n = len(a) - 1, len(b) - 1
    if m < n:
        return list(a)
    lcb = b[-1]
    r = list(a)
    e = m - n + 1
    while not _is_zero(r) and len(r) - 1 >= n:
        d = len(r) - 1 - n
        lcr = r[-1]
        r = [lcb * x for x in r]
        for k, bk in enumerate(b):
            r[k + d] = r[k + d] - lcr * bk
        r.pop()  # leading term cancels exactly
        r = _trim(r) if r else [Polynomial.zero(lcb.nvars)]
        e -= 1
    if e:
        f = lcb ** e
        r = [f * x for x in r]
    return r


def subresultant_last(a: UPoly, b: UPoly) -> UPoly:
    """Last nonzero element of the subresultant PRS of ``a`` and ``b`` (deg a >= deg b)."""
    n = a[0].nvars
    g = _one(n)
    h = _one(n)
    while True:
        delta = (len(a) - 1) - (len(b) - 1)
        r = prem(a, b)
        if _is_zero(r):
            return b
        if len(r) == 1:
            return r
        div = g * h ** delta
        a, b = b, [x.divmod_exact(div) for x in r]
        g = a[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = (g ** delta).divmod_exact(h ** (delta - 1))
