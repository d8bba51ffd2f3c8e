"""Chart-level tensor calculus.

Indices are 0-based throughout the API; the model-file layer translates
from 1-based user indices. Skew tensors store only the strictly increasing
index tuples, so antisymmetry holds by construction.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .expr import ChartContext, Polynomial, RationalFunction

Point = Sequence[Fraction]


def _rf_zero(chart: ChartContext) -> RationalFunction:
    return RationalFunction.zero(chart.dim)


def _as_rf(chart: ChartContext, value) -> RationalFunction:
    if isinstance(value, RationalFunction):
        if value.nvars != chart.dim:
            raise ValueError("entry lives in a ring of the wrong dimension")
        return value
    if isinstance(value, Polynomial):
        return RationalFunction.from_poly(value)
    if isinstance(value, str):
        return chart.parse(value)
    return RationalFunction.constant(chart.dim, value)


class _SkewTensor2:
    """Shared storage for skew bivectors and two-forms."""

    __slots__ = ("chart", "_entries")

    def __init__(self, chart: ChartContext, entries: Optional[Dict[Tuple[int, int], object]] = None):
        self.chart = chart
        clean = {}
        for (i, j), v in (entries or {}).items():
            if not (0 <= i < chart.dim and 0 <= j < chart.dim):
                raise IndexError(f"index ({i}, {j}) out of range for dimension {chart.dim}")
            if i == j:
                raise ValueError("diagonal entries of a skew tensor are zero by definition")
            v = _as_rf(chart, v)
            if i > j:
                i, j, v = j, i, -v
            if (i, j) in clean:
                raise ValueError(f"entry ({i}, {j}) given twice")
            if not v.is_zero():
                clean[(i, j)] = v
        self._entries = clean

    @classmethod
    def from_matrix(cls, chart: ChartContext, rows):
        n = chart.dim
        entries = {}
        for i in range(n):
            for j in range(i + 1, n):
                a, b = _as_rf(chart, rows[i][j]), _as_rf(chart, rows[j][i])
                if a + b != 0:
                    raise ValueError(f"matrix is not skew at ({i}, {j})")
                entries[(i, j)] = a
            if not _as_rf(chart, rows[i][i]).is_zero():
                raise ValueError(f"nonzero diagonal entry at {i}")
        return cls(chart, entries)

    @property
    def dim(self) -> int:
        return self.chart.dim

    def __getitem__(self, ij) -> RationalFunction:
        i, j = ij
        if i == j:
            return _rf_zero(self.chart)
        if i < j:
            return self._entries.get((i, j)) or _rf_zero(self.chart)
        v = self._entries.get((j, i))
        return -v if v is not None else _rf_zero(self.chart)

    def items(self):
        """Nonzero upper-triangular entries, sorted by index."""
        return sorted(self._entries.items())

    def is_zero(self) -> bool:
        return not self._entries

    def matrix(self) -> List[List[RationalFunction]]:
        n = self.dim
        return [[self[i, j] for j in range(n)] for i in range(n)]

    def evaluate(self, point: Point) -> List[List[Fraction]]:
        n = self.dim
        out = [[Fraction(0)] * n for _ in range(n)]
        for (i, j), v in self._entries.items():
            x = v.evaluate(point)
            out[i][j] = x
            out[j][i] = -x
        return out

    def _check(self, other):
        if type(other) is not type(self):
            return NotImplemented
        if other.chart != self.chart:
            raise ValueError("tensors live on different charts")
        return other

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        out = dict(self._entries)
        for k, v in other._entries.items():
            out[k] = out[k] + v if k in out else v
        return type(self)(self.chart, out)

    def __neg__(self):
        return type(self)(self.chart, {k: -v for k, v in self._entries.items()})

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self + (-other)

    def scale(self, c):
        c = _as_rf(self.chart, c)
        return type(self)(self.chart, {k: v * c for k, v in self._entries.items()})

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.chart == other.chart and self._entries == other._entries

    __hash__ = None

    def format_entries(self, symbol: str) -> List[str]:
        return [f"{symbol}[{i + 1}][{j + 1}] = {self.chart.format(v)}" for (i, j), v in self.items()]

    def __repr__(self):
        body = ", ".join(f"({i},{j}): {self.chart.format(v)}" for (i, j), v in self.items())
        return f"{type(self).__name__}({{{body}}})"


class SkewBivectorField(_SkewTensor2):
    """Bivector ``P^{ij}``; reading ``(j, i)`` gives ``-P^{ij}``."""


class TwoFormField(_SkewTensor2):
    """Covariant skew two-form ``(dα)_{ij}``."""


class _ComponentField:
    __slots__ = ("chart", "components")

    def __init__(self, chart: ChartContext, components: Sequence):
        if len(components) != chart.dim:
            raise ValueError(f"expected {chart.dim} components, got {len(components)}")
        self.chart = chart
        self.components: Tuple[RationalFunction, ...] = tuple(_as_rf(chart, c) for c in components)

    @classmethod
    def zero(cls, chart: ChartContext):
        return cls(chart, [_rf_zero(chart)] * chart.dim)

    def __getitem__(self, i) -> RationalFunction:
        return self.components[i]

    def __iter__(self):
        return iter(self.components)

    def __len__(self):
        return len(self.components)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __add__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return type(self)(self.chart, [a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return type(self)(self.chart, [a - b for a, b in zip(self.components, other.components)])

    def __neg__(self):
        return type(self)(self.chart, [-a for a in self.components])

    def scale(self, c):
        c = _as_rf(self.chart, c)
        return type(self)(self.chart, [a * c for a in self.components])

    def evaluate(self, point: Point) -> List[Fraction]:
        return [c.evaluate(point) for c in self.components]

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.chart == other.chart and self.components == other.components

    __hash__ = None

    def format(self) -> List[str]:
        return [self.chart.format(c) for c in self.components]

    def __repr__(self):
        return f"{type(self).__name__}({self.format()})"


class VectorField(_ComponentField):
    """Components ``v^i``."""


class OneFormField(_ComponentField):
    """Components ``α_j``."""

    def format_form(self) -> str:
        names = self.chart.coordinate_names
        parts = [f"({self.chart.format(c)})*d{names[i]}" for i, c in enumerate(self.components) if not c.is_zero()]
        return " + ".join(parts) if parts else "0"


class TrivectorField:
    """Fully antisymmetric ``T^{ijk}`` stored on ``i < j < k``."""

    __slots__ = ("chart", "_entries")

    def __init__(self, chart: ChartContext, entries: Optional[Dict[Tuple[int, int, int], RationalFunction]] = None):
        self.chart = chart
        clean = {}
        for key, v in (entries or {}).items():
            if not (key[0] < key[1] < key[2]):
                raise ValueError("trivector entries are keyed by strictly increasing indices")
            v = _as_rf(chart, v)
            if not v.is_zero():
                clean[tuple(key)] = v
        self._entries = clean

    def __getitem__(self, ijk) -> RationalFunction:
        idx = list(ijk)
        if len(set(idx)) < 3:
            return _rf_zero(self.chart)
        order = sorted(range(3), key=lambda t: idx[t])
        sign = _perm_sign(order)
        v = self._entries.get(tuple(sorted(idx)))
        if v is None:
            return _rf_zero(self.chart)
        return v if sign > 0 else -v

    def items(self):
        return sorted(self._entries.items())

    def is_zero(self) -> bool:
        return not self._entries

    def first_nonzero(self):
        items = self.items()
        return items[0] if items else None

    def __eq__(self, other):
        if not isinstance(other, TrivectorField):
            return NotImplemented
        return self.chart == other.chart and self._entries == other._entries

    __hash__ = None

    def __repr__(self):
        body = ", ".join(f"{k}: {self.chart.format(v)}" for k, v in self.items())
        return f"TrivectorField({{{body}}})"


def _perm_sign(order: Sequence[int]) -> int:
    sign = 1
    order = list(order)
    for a in range(len(order)):
        for b in range(a + 1, len(order)):
            if order[a] > order[b]:
                sign = -sign
    return sign


@dataclass(frozen=True)
class BivectorPencil:
    """The pencil ``P + λQ``."""

    P: SkewBivectorField
    Q: SkewBivectorField

    def __post_init__(self):
        if self.P.chart != self.Q.chart:
            raise ValueError("pencil members live on different charts")

    @property
    def chart(self) -> ChartContext:
        return self.P.chart

    @property
    def dim(self) -> int:
        return self.P.chart.dim

    def member(self, mu, nu) -> SkewBivectorField:
        return self.P.scale(mu) + self.Q.scale(nu)

    def evaluate(self, point: Point) -> Tuple[List[List[Fraction]], List[List[Fraction]]]:
        return self.P.evaluate(point), self.Q.evaluate(point)


# -- univariate polynomials in λ --------------------------------------------

class LamPoly:
    """Polynomial in the pencil parameter λ over an arbitrary exact ring.

    ``coeffs[k]`` is the coefficient of λ^k; trailing zeros are trimmed.
    """

    __slots__ = ("coeffs", "zero")

    def __init__(self, coeffs: Sequence, zero):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)
        self.zero = zero

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else self.zero

    def __add__(self, other: "LamPoly") -> "LamPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return LamPoly([self.coeff(k) + other.coeff(k) for k in range(n)], self.zero)

    def __sub__(self, other: "LamPoly") -> "LamPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return LamPoly([self.coeff(k) - other.coeff(k) for k in range(n)], self.zero)

    def __neg__(self):
        return LamPoly([-c for c in self.coeffs], self.zero)

    def __mul__(self, other):
        if not isinstance(other, LamPoly):
            return LamPoly([c * other for c in self.coeffs], self.zero)
        if not self.coeffs or not other.coeffs:
            return LamPoly([], self.zero)
        out = [self.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for a, x in enumerate(self.coeffs):
            if x == 0:
                continue
            for b, y in enumerate(other.coeffs):
                if y == 0:
                    continue
                out[a + b] = out[a + b] + x * y
        return LamPoly(out, self.zero)

    def __call__(self, lam):
        acc = self.zero
        for c in reversed(self.coeffs):
            acc = acc * lam + c
        return acc

    def map(self, f: Callable) -> "LamPoly":
        return LamPoly([f(c) for c in self.coeffs], f(self.zero))

    def __eq__(self, other):
        if isinstance(other, LamPoly):
            return self.coeffs == other.coeffs
        if other == 0:
            return not self.coeffs
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return f"LamPoly({list(self.coeffs)!r})"


# -- Pfaffians ----------------------------------------------------------------

def _pfaffian(entry: Callable[[int, int], object], indices: Tuple[int, ...], one, is_zero) -> object:
    memo: Dict[Tuple[int, ...], object] = {}

    def pf(idx: Tuple[int, ...]):
        if not idx:
            return one
        if idx in memo:
            return memo[idx]
        first, rest = idx[0], idx[1:]
        total = None
        for k, j in enumerate(rest):
            a = entry(first, j)
            if is_zero(a):
                continue
            sub = pf(rest[:k] + rest[k + 1:])
            if is_zero(sub):
                continue
            term = a * sub
            if k % 2:
                term = -term
            total = term if total is None else total + term
        if total is None:
            total = one - one
        memo[idx] = total
        return total

    if len(indices) % 2:
        return one - one
    return pf(tuple(indices))


def pfaffian(matrix: Sequence[Sequence]) -> object:
    """Pfaffian of an even skew matrix by expansion along the first row, memoized
    on index subsets. The Pfaffian of the empty matrix is 1."""
    n = len(matrix)
    if n == 0:
        return Fraction(1)
    sample = matrix[0][0]
    one = sample - sample + 1
    return _pfaffian(lambda i, j: matrix[i][j], tuple(range(n)), one, lambda x: x == 0)


def _pencil_entry_table(pencil: BivectorPencil, point: Optional[Point]):
    n = pencil.dim
    if point is not None:
        A, B = pencil.evaluate(point)
        zero = Fraction(0)
        one = Fraction(1)
    else:
        A, B = pencil.P.matrix(), pencil.Q.matrix()
        zero = _rf_zero(pencil.chart)
        one = RationalFunction.one(pencil.dim)
    table = {}
    for i in range(n):
        for j in range(n):
            table[(i, j)] = LamPoly([A[i][j], B[i][j]], zero)
    return table, LamPoly([one], zero), zero


def deleted_pfaffian(pencil: BivectorPencil, i: int, point: Optional[Point] = None) -> LamPoly:
    """Signed Pfaffian ``(-1)^i Pf((P + λQ) with row/column i removed)`` (0-based ``i``,
    i.e. ``(-1)^(i+1)`` for 1-based indices).

    Coefficients are rational functions, or exact rationals when ``point`` is given.
    """
    n = pencil.dim
    if n % 2 == 0:
        raise ValueError("deleted Pfaffians are defined for odd dimension")
    if not 0 <= i < n:
        raise IndexError(f"index {i} out of range")
    return deleted_pfaffians(pencil, point)[i]


def deleted_pfaffians(pencil: BivectorPencil, point: Optional[Point] = None) -> List[LamPoly]:
    n = pencil.dim
    if n % 2 == 0:
        raise ValueError("deleted Pfaffians are defined for odd dimension")
    table, one, zero = _pencil_entry_table(pencil, point)
    out = []
    for i in range(n):
        idx = tuple(k for k in range(n) if k != i)
        pf = _pfaffian(lambda a, b: table[(a, b)], idx, one, lambda x: x.is_zero())
        out.append(-pf if i % 2 else pf)
    return out


# -- volume forms -------------------------------------------------------------

@dataclass(frozen=True)
class ExplicitDensity:
    """``exp(rational_part) * prod(q_k ** c_k)``."""

    rational_part: RationalFunction
    log_terms: Tuple[Tuple[Polynomial, Fraction], ...] = ()

    def log_derivative(self, chart: ChartContext) -> OneFormField:
        comps = []
        for i in range(chart.dim):
            acc = self.rational_part.diff(i)
            for q, c in self.log_terms:
                dq = q.diff(i)
                if not dq.is_zero():
                    acc = acc + RationalFunction(dq, q) * c
            comps.append(acc)
        return OneFormField(chart, comps)

    def defined_at(self, point: Point) -> bool:
        if self.rational_part.den.evaluate(point) == 0:
            return False
        return all(q.evaluate(point) != 0 for q, _ in self.log_terms)

    def is_unit(self) -> bool:
        return self.rational_part.is_zero() and not self.log_terms

    def format(self, chart: ChartContext) -> str:
        parts = []
        if not self.rational_part.is_zero():
            parts.append(f"exp({chart.format(self.rational_part)})")
        for q, c in self.log_terms:
            base = q.format(chart.coordinate_names)
            if len(q) > 1 or "*" in base:
                base = f"({base})"
            exp = str(c) if c.denominator == 1 and c >= 0 else f"({c})"
            parts.append(f"{base}^{exp}")
        return "*".join(parts) if parts else "1"


@dataclass(frozen=True)
class VolumeForm:
    """``ω = exp(∫α) dx^1 ∧ ... ∧ dx^N`` recorded through its log-derivative ``α``."""

    chart: ChartContext
    log_derivative: OneFormField
    explicit_density: Optional[ExplicitDensity] = None

    def __post_init__(self):
        if self.explicit_density is not None:
            if self.explicit_density.log_derivative(self.chart) != self.log_derivative:
                raise ValueError("explicit density does not match the stored log-derivative")

    @classmethod
    def coordinate(cls, chart: ChartContext) -> "VolumeForm":
        return cls(chart, OneFormField.zero(chart), ExplicitDensity(_rf_zero(chart)))

    @classmethod
    def from_density(cls, chart: ChartContext, density: ExplicitDensity) -> "VolumeForm":
        return cls(chart, density.log_derivative(chart), density)


# -- operations ---------------------------------------------------------------

def divergence(P: SkewBivectorField) -> VectorField:
    """Components ``sum_j ∂_j P^{ij}``."""
    n = P.dim
    comps = [_rf_zero(P.chart) for _ in range(n)]
    for (i, j), v in P.items():
        comps[i] = comps[i] + v.diff(j)
        comps[j] = comps[j] - v.diff(i)
    return VectorField(P.chart, comps)


def apply(P: SkewBivectorField, alpha: OneFormField) -> VectorField:
    """Contraction ``(Pα)^i = sum_j P^{ij} α_j``."""
    if P.chart != alpha.chart:
        raise ValueError("tensors live on different charts")
    comps = [_rf_zero(P.chart) for _ in range(P.dim)]
    for (i, j), v in P.items():
        if not alpha[j].is_zero():
            comps[i] = comps[i] + v * alpha[j]
        if not alpha[i].is_zero():
            comps[j] = comps[j] - v * alpha[i]
    return VectorField(P.chart, comps)


def gradient(chart: ChartContext, f: RationalFunction) -> OneFormField:
    return OneFormField(chart, [f.diff(i) for i in range(chart.dim)])


def exterior_derivative(alpha: OneFormField) -> TwoFormField:
    """``(dα)_{ij} = ∂_i α_j - ∂_j α_i``."""
    n = alpha.chart.dim
    entries = {}
    for i, j in combinations(range(n), 2):
        entries[(i, j)] = alpha[j].diff(i) - alpha[i].diff(j)
    return TwoFormField(alpha.chart, entries)


class MissingDensityError(ValueError):
    pass


@dataclass(frozen=True)
class LambdaOneForm:
    """``density * sum_k λ^k coefficients[k]``.

    The density factor is that of ``volume`` (unit density when ``volume`` is
    None); the coefficient one-forms are rational.
    """

    chart: ChartContext
    coefficients: Tuple[OneFormField, ...]
    volume: Optional[VolumeForm] = None

    def __post_init__(self):
        coeffs = list(self.coefficients)
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def coefficient(self, k: int) -> OneFormField:
        if 0 <= k < len(self.coefficients):
            return self.coefficients[k]
        return OneFormField.zero(self.chart)

    def at(self, lam) -> OneFormField:
        """Rational part at a fixed value of λ."""
        acc = OneFormField.zero(self.chart)
        for c in reversed(self.coefficients):
            acc = acc.scale(lam) + c
        return acc

    def log_derivative(self) -> OneFormField:
        if self.volume is None:
            return OneFormField.zero(self.chart)
        return self.volume.log_derivative


def contract_with_volume(pencil: BivectorPencil, volume: Optional[VolumeForm] = None, *,
                         require_density: bool = True) -> LambdaOneForm:
    """``ω̂(Λ^n(P + λQ))`` as a λ-polynomial one-form.

    Component ``i`` is the density times ``deleted_pfaffian(pencil, i)``.
    ``volume=None`` selects the coordinate volume element.
    """
    chart = pencil.chart
    if volume is not None and volume.explicit_density is None and require_density:
        raise MissingDensityError("volume form has no explicit density")
    pfs = deleted_pfaffians(pencil)
    degree = max((p.degree for p in pfs), default=-1)
    coeffs = []
    for k in range(degree + 1):
        coeffs.append(OneFormField(chart, [p.coeff(k) for p in pfs]))
    return LambdaOneForm(chart, tuple(coeffs), volume)


def skew_from_constant(chart: ChartContext, matrix: Sequence[Sequence]) -> SkewBivectorField:
    return SkewBivectorField.from_matrix(chart, matrix)


def iter_triples(n: int) -> Iterable[Tuple[int, int, int]]:
    return combinations(range(n), 3)
