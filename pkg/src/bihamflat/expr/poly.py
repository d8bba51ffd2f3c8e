"""Sparse multivariate polynomials with exact rational coefficients.

A polynomial lives in a fixed number of variables ``nvars``. Monomials are
dense exponent tuples of that length; coefficients are ``int`` when integral
and ``Fraction`` otherwise, so that integer-only work stays on the fast path.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Dict, Iterable, Mapping, Sequence, Tuple, Union

Monomial = Tuple[int, ...]
Coeff = Union[int, Fraction]


def norm_coeff(c) -> Coeff:
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, int):
        return c
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


def grlex_key(m: Monomial):
    """Sort key of the graded lexicographic order (x1 > x2 > ...)."""
    return (sum(m), m)


def monomial_degree(m: Monomial) -> int:
    return sum(m)


class Polynomial:
    """Immutable sparse polynomial ``{exponent tuple: nonzero coefficient}``."""

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Monomial, Coeff] | None = None, *, _trusted=False):
        self.nvars = nvars
        if _trusted:
            self.terms: Dict[Monomial, Coeff] = terms  # type: ignore[assignment]
        else:
            clean = {}
            for m, c in (terms or {}).items():
                m = tuple(m)
                if len(m) != nvars:
                    raise ValueError(f"monomial {m} does not have {nvars} exponents")
                if any(e < 0 for e in m):
                    raise ValueError(f"negative exponent in {m}")
                if c != 0:
                    clean[m] = norm_coeff(c)
            self.terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls(nvars, {}, _trusted=True)

    @classmethod
    def constant(cls, nvars: int, c) -> "Polynomial":
        c = norm_coeff(c)
        if c == 0:
            return cls.zero(nvars)
        return cls(nvars, {(0,) * nvars: c}, _trusted=True)

    @classmethod
    def one(cls, nvars: int) -> "Polynomial":
        return cls.constant(nvars, 1)

    @classmethod
    def var(cls, nvars: int, i: int, power: int = 1) -> "Polynomial":
        if not 0 <= i < nvars:
            raise IndexError(f"variable index {i} out of range for {nvars} variables")
        m = [0] * nvars
        m[i] = power
        return cls(nvars, {tuple(m): 1}, _trusted=True)

    @classmethod
    def monomial(cls, m: Sequence[int], c=1) -> "Polynomial":
        return cls(len(m), {tuple(m): c})

    # -- basic queries ------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        if not self.terms:
            return True
        return len(self.terms) == 1 and not any(next(iter(self.terms)))

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def constant_value(self) -> Coeff:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get((0,) * self.nvars, 0)

    def __len__(self):
        return len(self.terms)

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def degree_in(self, i: int) -> int:
        if not self.terms:
            return -1
        return max(m[i] for m in self.terms)

    def variables(self) -> frozenset:
        used = set()
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    used.add(i)
        return frozenset(used)

    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return max(self.terms, key=grlex_key)

    def leading_coefficient(self) -> Coeff:
        return self.terms[self.leading_monomial()] if self.terms else 0

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    # -- equality -----------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if len(self.terms) < len(other.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        out = dict(a)
        for m, c in b.items():
            s = out.get(m, 0) + c
            if s == 0:
                out.pop(m, None)
            else:
                out[m] = norm_coeff(s)
        return Polynomial(self.nvars, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.nvars, {m: -c for m, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) - c
            if s == 0:
                out.pop(m, None)
            else:
                out[m] = norm_coeff(s)
        return Polynomial(self.nvars, out, _trusted=True)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Polynomial":
        c = norm_coeff(c)
        if c == 0:
            return Polynomial.zero(self.nvars)
        if c == 1:
            return self
        return Polynomial(self.nvars, {m: norm_coeff(v * c) for m, v in self.terms.items()}, _trusted=True)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.terms or not other.terms:
            return Polynomial.zero(self.nvars)
        out: Dict[Monomial, Coeff] = {}
        get = out.get
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = get(m, 0) + c1 * c2
        return Polynomial(self.nvars, {m: norm_coeff(c) for m, c in out.items() if c != 0}, _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = Polynomial.one(self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def mul_monomial(self, m: Monomial, c=1) -> "Polynomial":
        c = norm_coeff(c)
        return Polynomial(
            self.nvars,
            {tuple(a + b for a, b in zip(k, m)): norm_coeff(v * c) for k, v in self.terms.items()},
            _trusted=True,
        )

    # -- division -----------------------------------------------------
    def divmod_exact(self, other: "Polynomial") -> "Polynomial":
        """Quotient ``self / other``; raises ``ArithmeticError`` if inexact."""
        q = self.try_divide(other)
        if q is None:
            raise ArithmeticError("polynomial division is not exact")
        return q

    def try_divide(self, other: "Polynomial") -> "Polynomial | None":
        if not other.terms:
            raise ZeroDivisionError("division by zero polynomial")
        if not self.terms:
            return Polynomial.zero(self.nvars)
        if other.is_constant():
            return self.scale(Fraction(1) / Fraction(other.constant_value()))
        if len(other.terms) == 1:
            (bm, bc), = other.terms.items()
            inv = Fraction(1) / Fraction(bc)
            out = {}
            for m, c in self.terms.items():
                d = tuple(a - b for a, b in zip(m, bm))
                if min(d) < 0:
                    return None
                out[d] = norm_coeff(c * inv)
            return Polynomial(self.nvars, out, _trusted=True)
        # quick degree rejections
        for i in range(self.nvars):
            if other.degree_in(i) > self.degree_in(i):
                return None
        lm_b = other.leading_monomial()
        inv_lc = Fraction(1) / Fraction(other.terms[lm_b])
        btail = [(m, c) for m, c in other.terms.items() if m != lm_b]
        rem = dict(self.terms)
        quot: Dict[Monomial, Coeff] = {}
        while rem:
            lm = max(rem, key=grlex_key)
            d = tuple(a - b for a, b in zip(lm, lm_b))
            if min(d) < 0:
                return None
            qc = norm_coeff(rem.pop(lm) * inv_lc)
            quot[d] = qc
            for m, c in btail:
                mm = tuple(a + b for a, b in zip(m, d))
                s = rem.get(mm, 0) - qc * c
                if s == 0:
                    rem.pop(mm, None)
                else:
                    rem[mm] = norm_coeff(s)
        return Polynomial(self.nvars, quot, _trusted=True)

    # -- content ------------------------------------------------------
    def content(self) -> Fraction:
        """Rational content: ``self = content * primitive`` with the primitive part
        having coprime integer coefficients and positive leading coefficient."""
        if not self.terms:
            return Fraction(0)
        den = 1
        for c in self.terms.values():
            if isinstance(c, Fraction):
                den = lcm(den, c.denominator)
        g = 0
        for c in self.terms.values():
            g = gcd(g, int(c * den))
            if g == 1:
                break
        cont = Fraction(g, den)
        if self.leading_coefficient() < 0:
            cont = -cont
        return cont

    def primitive(self) -> "Polynomial":
        if not self.terms:
            return self
        return self.scale(1 / self.content())

    def monomial_content(self) -> Monomial:
        """Largest monomial dividing every term."""
        if not self.terms:
            return (0,) * self.nvars
        it = iter(self.terms)
        low = list(next(it))
        for m in it:
            for i, e in enumerate(m):
                if e < low[i]:
                    low[i] = e
        return tuple(low)

    # -- calculus and evaluation ---------------------------------------
    def diff(self, i: int) -> "Polynomial":
        out = {}
        for m, c in self.terms.items():
            e = m[i]
            if e:
                mm = m[:i] + (e - 1,) + m[i + 1:]
                out[mm] = c * e
        return Polynomial(self.nvars, out, _trusted=True)

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.nvars:
            raise ValueError(f"point has {len(point)} coordinates, expected {self.nvars}")
        point = [Fraction(p) for p in point]
        total = Fraction(0)
        for m, c in self.terms.items():
            t = Fraction(c)
            for p, e in zip(point, m):
                if e:
                    t *= p ** e
            total += t
        return total

    def compose(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Substitute ``x_i -> images[i]``; images share a common variable count."""
        if len(images) != self.nvars:
            raise ValueError("one image per variable is required")
        target = images[0].nvars if images else 0
        cache: Dict[Tuple[int, int], Polynomial] = {}

        def power(i, e):
            key = (i, e)
            if key not in cache:
                cache[key] = images[i] ** e
            return cache[key]

        total = Polynomial.zero(target)
        for m, c in self.terms.items():
            t = Polynomial.constant(target, c)
            for i, e in enumerate(m):
                if e:
                    t = t * power(i, e)
            total = total + t
        return total

    def extend(self, nvars: int) -> "Polynomial":
        """Embed into a ring with more trailing variables."""
        pad = (0,) * (nvars - self.nvars)
        return Polynomial(nvars, {m + pad: c for m, c in self.terms.items()}, _trusted=True)

    # -- display -------------------------------------------------------
    def format(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        if names is None:
            names = [f"x{i + 1}" for i in range(self.nvars)]
        pieces = []
        for m, c in self.sorted_terms():
            factors = []
            for name, e in zip(names, m):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            mono = "*".join(factors)
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            elif isinstance(a, Fraction):
                body = f"{a.numerator}*{mono}/{a.denominator}"
            else:
                body = f"{a}*{mono}"
            pieces.append((sign, body))
        first_sign, first = pieces[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"Polynomial({self.nvars}, {self.format()!r})"


def poly_sum(polys: Iterable[Polynomial], nvars: int) -> Polynomial:
    out: Dict[Monomial, Coeff] = {}
    for p in polys:
        for m, c in p.terms.items():
            out[m] = out.get(m, 0) + c
    return Polynomial(nvars, {m: c for m, c in out.items() if c != 0})
