"""Canonical reduced fractions of polynomials."""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

from .gcd import poly_gcd
from .poly import Polynomial, norm_coeff


class RationalFunction:
    """``numerator / denominator`` in lowest terms.

    Canonical form: gcd of the pair is a unit, the denominator is primitive
    with integer coefficients and positive leading coefficient, and zero is
    ``0/1``. Two equal rational functions therefore have identical
    representations.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Polynomial, den: Polynomial | None = None, *, _reduced=False):
        if den is None:
            den = Polynomial.one(num.nvars)
        if num.nvars != den.nvars:
            raise ValueError("numerator and denominator live in different rings")
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not _reduced:
            num, den = _canonical(num, den)
        self.num = num
        self.den = den
        self._hash = None

    @property
    def nvars(self) -> int:
        return self.num.nvars

    @classmethod
    def zero(cls, nvars: int) -> "RationalFunction":
        return cls(Polynomial.zero(nvars), Polynomial.one(nvars), _reduced=True)

    @classmethod
    def one(cls, nvars: int) -> "RationalFunction":
        return cls.constant(nvars, 1)

    @classmethod
    def constant(cls, nvars: int, c) -> "RationalFunction":
        return cls(Polynomial.constant(nvars, c), Polynomial.one(nvars), _reduced=True)

    @classmethod
    def var(cls, nvars: int, i: int) -> "RationalFunction":
        return cls(Polynomial.var(nvars, i), Polynomial.one(nvars), _reduced=True)

    @classmethod
    def from_poly(cls, p: Polynomial) -> "RationalFunction":
        return cls(p, Polynomial.one(p.nvars), _reduced=True)

    # -- queries ------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("rational function is not constant")
        return Fraction(self.num.constant_value()) / Fraction(self.den.constant_value())

    def size(self) -> int:
        """Number of monomials in numerator and denominator; used for pivoting."""
        return len(self.num) + len(self.den)

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        if isinstance(other, Polynomial):
            return self.den.is_constant() and self.den.constant_value() == 1 and self.num == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            if other.nvars != self.nvars:
                raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")
            return other
        if isinstance(other, Polynomial):
            return RationalFunction.from_poly(other)
        if isinstance(other, (int, Fraction)):
            return RationalFunction.constant(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        a, b, c, d = self.num, self.den, other.num, other.den
        if b == d:
            if b.is_constant():
                return RationalFunction(a + c, b, _reduced=True)
            return RationalFunction(a + c, b)
        if b.is_constant():
            return RationalFunction(a * d + c.scale(b.constant_value()), d, _reduced=True)
        if d.is_constant():
            return RationalFunction(a.scale(d.constant_value()) + c * b, b, _reduced=True)
        g = poly_gcd(b, d)
        if g.is_constant():
            return RationalFunction(a * d + b * c, b * d, _reduced=True)
        b1 = b.divmod_exact(g)
        d1 = d.divmod_exact(g)
        num = a * d1 + c * b1
        den = b1 * d
        # only factors of g can survive in common with num
        h = poly_gcd(num, g)
        if not h.is_constant():
            num, den = num.divmod_exact(h), den.divmod_exact(h)
        return RationalFunction(*_normalize_den(num, den), _reduced=True)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = norm_coeff(other)
            if c == 0:
                return RationalFunction.zero(self.nvars)
            return RationalFunction(self.num.scale(c), self.den, _reduced=True)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.num.is_zero() or other.num.is_zero():
            return RationalFunction.zero(self.nvars)
        a, b, c, d = self.num, self.den, other.num, other.den
        if b.is_constant() and d.is_constant():
            return RationalFunction(a * c, b, _reduced=True)
        g1 = poly_gcd(a, d)
        g2 = poly_gcd(c, b)
        if not g1.is_constant():
            a, d = a.divmod_exact(g1), d.divmod_exact(g1)
        if not g2.is_constant():
            c, b = c.divmod_exact(g2), b.divmod_exact(g2)
        return RationalFunction(*_normalize_den(a * c, b * d), _reduced=True)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RationalFunction(*_normalize_den(self.den, self.num), _reduced=True)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * (Fraction(1) / Fraction(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise ValueError("only integer powers of rational functions are supported")
        if k < 0:
            return self.inverse() ** (-k)
        return RationalFunction(self.num ** k, self.den ** k, _reduced=True)

    # -- calculus and evaluation ----------------------------------------
    def diff(self, i: int) -> "RationalFunction":
        n, d = self.num, self.den
        if d.is_constant():
            return RationalFunction(n.diff(i), d, _reduced=True)
        dd = d.diff(i)
        if dd.is_zero():
            return RationalFunction(n.diff(i), d)
        # (n' d - n d') / d^2, reduced against d only: gcd(n, d) = 1
        g = poly_gcd(d, dd)
        d1 = d.divmod_exact(g)
        num = n.diff(i) * d1 - n * dd.divmod_exact(g)
        return RationalFunction(num, d1 * d)

    def evaluate(self, point: Sequence) -> Fraction:
        dv = self.den.evaluate(point)
        if dv == 0:
            raise ZeroDivisionError("denominator vanishes at the evaluation point")
        return self.num.evaluate(point) / dv

    def compose(self, images: Sequence[Polynomial]) -> "RationalFunction":
        return RationalFunction(self.num.compose(images), self.den.compose(images))

    def extend(self, nvars: int) -> "RationalFunction":
        return RationalFunction(self.num.extend(nvars), self.den.extend(nvars), _reduced=True)

    # -- display --------------------------------------------------------
    def format(self, names: Sequence[str] | None = None) -> str:
        if self.den.is_constant() and self.den.constant_value() == 1:
            return self.num.format(names)
        num_p, den_p = self.num, self.den
        scale = 1
        for c in num_p.terms.values():
            if isinstance(c, Fraction):
                scale = scale * c.denominator // gcd(scale, c.denominator)
        if scale != 1:
            num_p, den_p = num_p.scale(scale), den_p.scale(scale)
        num = num_p.format(names)
        den = den_p.format(names)
        if len(self.num) > 1:
            num = f"({num})"
        if len(self.den) > 1 or "*" in den or "/" in den:
            den = f"({den})"
        return f"{num}/{den}"

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"RationalFunction({self.format()!r})"


def _normalize_den(num: Polynomial, den: Polynomial):
    c = den.content()
    if c == 1:
        return num, den
    inv = 1 / c
    return num.scale(inv), den.scale(inv)


def _canonical(num: Polynomial, den: Polynomial):
    if num.is_zero():
        return Polynomial.zero(num.nvars), Polynomial.one(num.nvars)
    if not den.is_constant():
        g = poly_gcd(num, den)
        if not g.is_constant():
            num = num.divmod_exact(g)
            den = den.divmod_exact(g)
    return _normalize_den(num, den)
