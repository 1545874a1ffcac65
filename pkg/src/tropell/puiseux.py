"""Exact truncated Puiseux series over the rationals.

A series is a finite sum ``sum c_i t^{q_i}`` with rational exponents and
rational coefficients, plus a precision ``N`` meaning "+ O(t^N)".  Exact
series (polynomials in rational powers of ``t``) carry precision ``inf``.
Operations that would produce infinitely many terms (inversion, square roots)
truncate at a relative precision taken from :func:`working_precision`.
"""

from __future__ import annotations

import contextvars
import math
from contextlib import contextmanager
from fractions import Fraction
from typing import Iterable, Mapping, Union

from tropell.errors import (
    DivisionByZero,
    IndeterminateValuation,
    NegativeValuation,
    NonSquareLeadingCoefficient,
)
from tropell.kernels import convolve, inverse_series

INF = math.inf

Rational = Union[int, Fraction]
Precision = Union[Fraction, float]

_precision = contextvars.ContextVar("tropell_precision", default=Fraction(24))


def working_precision() -> Fraction:
    """Relative precision used when an operation must truncate an expansion."""
    return _precision.get()


@contextmanager
def precision(n):
    """Temporarily change :func:`working_precision`."""
    n = Fraction(n)
    if n <= 0:
        raise ValueError("precision must be positive")
    token = _precision.set(n)
    try:
        yield n
    finally:
        _precision.reset(token)


def _lcm_denominators(values) -> int:
    d = 1
    for v in values:
        d = math.lcm(d, v.denominator)
    return d


def _as_precision(p) -> Precision:
    if p is None or p == INF:
        return INF
    if isinstance(p, float):
        raise TypeError("finite precision must be rational")
    return Fraction(p)


def fraction_sqrt(c: Fraction) -> Fraction:
    """Nonnegative rational square root, or raise NonSquareLeadingCoefficient."""
    c = Fraction(c)
    if c < 0:
        raise NonSquareLeadingCoefficient(f"{c} is negative")
    n, d = c.numerator, c.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn != n or rd * rd != d:
        raise NonSquareLeadingCoefficient(f"{c} is not the square of a rational")
    return Fraction(rn, rd)


class PuiseuxSeries:
    """Immutable truncated Puiseux series with rational coefficients."""

    __slots__ = ("_exps", "_coefs", "_prec", "_hash")

    def __init__(self, terms: Union[Mapping, Iterable] = (), precision=INF):
        prec = _as_precision(precision)
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict = {}
        for e, c in items:
            e = Fraction(e)
            if e >= prec:
                continue
            acc[e] = acc.get(e, 0) + Fraction(c)
        exps = sorted(e for e, c in acc.items() if c != 0)
        self._exps = tuple(exps)
        self._coefs = tuple(acc[e] for e in exps)
        self._prec = prec
        self._hash = None

    @classmethod
    def _raw(cls, exps, coefs, prec) -> PuiseuxSeries:
        # trusted: exps sorted, distinct, below prec; coefs nonzero Fractions
        s = object.__new__(cls)
        s._exps = tuple(exps)
        s._coefs = tuple(coefs)
        s._prec = prec
        s._hash = None
        return s

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> PuiseuxSeries:
        return cls._raw((), (), INF)

    @classmethod
    def one(cls) -> PuiseuxSeries:
        return cls.constant(1)

    @classmethod
    def constant(cls, c: Rational) -> PuiseuxSeries:
        return cls({0: c})

    @classmethod
    def monomial(cls, c: Rational, e: Rational) -> PuiseuxSeries:
        return cls({e: c})

    @classmethod
    def big_o(cls, n: Rational) -> PuiseuxSeries:
        """The unknown remainder ``O(t^n)``."""
        return cls._raw((), (), Fraction(n))

    @classmethod
    def coerce(cls, x) -> PuiseuxSeries:
        if isinstance(x, PuiseuxSeries):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.constant(x)
        if isinstance(x, str):
            from tropell.literals import parse_series

            return parse_series(x)
        raise TypeError(f"cannot interpret {x!r} as a Puiseux series")

    # -- accessors -----------------------------------------------------------

    @property
    def precision(self) -> Precision:
        return self._prec

    @property
    def is_exact(self) -> bool:
        return self._prec == INF

    @property
    def terms(self) -> dict:
        return dict(zip(self._exps, self._coefs))

    def items(self):
        return zip(self._exps, self._coefs)

    @property
    def ramification(self) -> int:
        return _lcm_denominators(self._exps)

    def __len__(self) -> int:
        return len(self._exps)

    def is_zero(self) -> bool:
        """True only for the exact zero series."""
        return not self._exps and self._prec == INF

    def has_terms(self) -> bool:
        return bool(self._exps)

    def coefficient(self, e: Rational) -> Fraction:
        e = Fraction(e)
        if e >= self._prec:
            raise IndeterminateValuation(f"coefficient of t^{e} is beyond O(t^{self._prec})")
        for ee, c in zip(self._exps, self._coefs):
            if ee == e:
                return c
        return Fraction(0)

    def valuation(self):
        if self._exps:
            return self._exps[0]
        if self._prec == INF:
            return INF
        raise IndeterminateValuation(f"no known terms below O(t^{self._prec})")

    def valuation_lower_bound(self):
        """Least exponent that can occur: the valuation, or the precision."""
        return self._exps[0] if self._exps else self._prec

    @property
    def leading_coefficient(self) -> Fraction:
        self.valuation()
        if not self._exps:
            raise DivisionByZero("the zero series has no leading coefficient")
        return self._coefs[0]

    def truncate(self, n) -> PuiseuxSeries:
        n = _as_precision(n)
        if n >= self._prec:
            return self
        k = 0
        while k < len(self._exps) and self._exps[k] < n:
            k += 1
        return PuiseuxSeries._raw(self._exps[:k], self._coefs[:k], n)

    def shift(self, e: Rational) -> PuiseuxSeries:
        """Multiply by ``t^e``."""
        e = Fraction(e)
        return PuiseuxSeries._raw(
            tuple(x + e for x in self._exps), self._coefs, self._prec + e
        )

    def scale(self, c: Rational) -> PuiseuxSeries:
        c = Fraction(c)
        if c == 0:
            return PuiseuxSeries.zero()
        return PuiseuxSeries._raw(self._exps, tuple(c * x for x in self._coefs), self._prec)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        try:
            other = PuiseuxSeries.coerce(other)
        except TypeError:
            return NotImplemented
        return add(self, other)

    __radd__ = __add__

    def __neg__(self) -> PuiseuxSeries:
        return PuiseuxSeries._raw(self._exps, tuple(-c for c in self._coefs), self._prec)

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            other = PuiseuxSeries.coerce(other)
        except TypeError:
            return NotImplemented
        return add(self, -other)

    def __rsub__(self, other):
        try:
            other = PuiseuxSeries.coerce(other)
        except TypeError:
            return NotImplemented
        return add(other, -self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise DivisionByZero("division by zero")
            return self.scale(1 / Fraction(other))
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return mul(self, invert(other))

    def __rtruediv__(self, other):
        try:
            other = PuiseuxSeries.coerce(other)
        except TypeError:
            return NotImplemented
        return mul(other, invert(self))

    def __pow__(self, n: int) -> PuiseuxSeries:
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return invert(self) ** (-n)
        result = PuiseuxSeries.one()
        base = self
        while n:
            if n & 1:
                result = mul(result, base)
            n >>= 1
            if n:
                base = mul(base, base)
        return result

    # -- comparison / display ----------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PuiseuxSeries.constant(other)
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return (
            self._exps == other._exps
            and self._coefs == other._coefs
            and self._prec == other._prec
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._exps, self._coefs, self._prec))
        return self._hash

    def agrees_with(self, other, upto=None) -> bool:
        """Equality of the two series on all exponents below ``upto``.

        ``upto`` defaults to the smaller of the two precisions.
        """
        other = PuiseuxSeries.coerce(other)
        if upto is None:
            upto = min(self._prec, other._prec)
        diff = (self - other).truncate(upto)
        return not diff.has_terms()

    def __str__(self):
        from tropell.literals import format_series

        return format_series(self)

    def __repr__(self):
        return f"PuiseuxSeries({str(self)!r})"


# -- module-level operations --------------------------------------------------


def valuation(s: PuiseuxSeries):
    return s.valuation()


def add(a: PuiseuxSeries, b: PuiseuxSeries) -> PuiseuxSeries:
    prec = min(a._prec, b._prec)
    acc = {}
    for e, c in zip(a._exps, a._coefs):
        if e < prec:
            acc[e] = c
    for e, c in zip(b._exps, b._coefs):
        if e < prec:
            acc[e] = acc.get(e, 0) + c
    exps = sorted(e for e, c in acc.items() if c != 0)
    return PuiseuxSeries._raw(exps, [acc[e] for e in exps], prec)


def _product_precision(a: PuiseuxSeries, b: PuiseuxSeries):
    la, lb = a.valuation_lower_bound(), b.valuation_lower_bound()
    if la == INF or lb == INF:
        return INF
    return min(la + b._prec, lb + a._prec)


def mul(a: PuiseuxSeries, b: PuiseuxSeries) -> PuiseuxSeries:
    prec = _product_precision(a, b)
    if not a._exps or not b._exps:
        return PuiseuxSeries._raw((), (), prec)
    d = math.lcm(_lcm_denominators(a._exps), _lcm_denominators(b._exps))
    if prec != INF:
        d = math.lcm(d, prec.denominator)
    da = _lcm_denominators(a._coefs)
    db = _lcm_denominators(b._coefs)
    a_exp = [int(e * d) for e in a._exps]
    b_exp = [int(e * d) for e in b._exps]
    a_num = [int(c * da) for c in a._coefs]
    b_num = [int(c * db) for c in b._coefs]
    cutoff = None if prec == INF else int(prec * d)
    raw = convolve(a_exp, a_num, b_exp, b_num, cutoff)
    denom = da * db
    exps = sorted(e for e, n in raw.items() if n != 0)
    return PuiseuxSeries._raw(
        [Fraction(e, d) for e in exps], [Fraction(raw[e], denom) for e in exps], prec
    )


def _normalized_unit(s: PuiseuxSeries):
    """Split ``s = c t^v (1 + h)``; return v, c, grid step d, sparse h, relative precision."""
    if s.is_zero():
        raise DivisionByZero("the exact zero series is not invertible")
    v = s.valuation()
    c = s._coefs[0]
    rel = s._prec - v if s._prec != INF else working_precision()
    shifted = [e - v for e in s._exps]
    d = _lcm_denominators(shifted)
    d = math.lcm(d, Fraction(rel).denominator)
    h = [(int(e * d), x / c) for e, x in zip(shifted[1:], s._coefs[1:])]
    return v, c, d, h, Fraction(rel)


def invert(s: PuiseuxSeries) -> PuiseuxSeries:
    """Multiplicative inverse, to the relative precision of ``s``."""
    if s.is_exact and len(s) == 1:
        return PuiseuxSeries._raw((-s._exps[0],), (1 / s._coefs[0],), INF)
    v, c, d, h, rel = _normalized_unit(s)
    n_max = math.ceil(rel * d)
    den = _lcm_denominators([x for _, x in h])
    W = inverse_series([k for k, _ in h], [int(x * den) for _, x in h], den, n_max)
    exps, coefs = [], []
    scale = Fraction(1) / c
    for n, num in enumerate(W):
        if num:
            exps.append(Fraction(n, d) - v)
            coefs.append(Fraction(num, den ** n) * scale)
    return PuiseuxSeries._raw(exps, coefs, rel - v)


def sqrt(s: PuiseuxSeries) -> PuiseuxSeries:
    """Square root whose leading coefficient is a positive rational."""
    if s.is_zero():
        return s
    if s.is_exact and len(s) == 1:
        return PuiseuxSeries._raw((s._exps[0] / 2,), (fraction_sqrt(s._coefs[0]),), INF)
    v, c, d, h, rel = _normalized_unit(s)
    root_c = fraction_sqrt(c)
    n_max = math.ceil(rel * d)
    dense = [Fraction(0)] * n_max
    for k, hk in h:
        if k < n_max:
            dense[k] = hk
    w = [Fraction(0)] * n_max
    if n_max:
        w[0] = Fraction(1)
    for n in range(1, n_max):
        acc = dense[n]
        for k in range(1, (n + 1) // 2):
            if w[k] and w[n - k]:
                acc -= 2 * w[k] * w[n - k]
        if n % 2 == 0 and w[n // 2]:
            acc -= w[n // 2] * w[n // 2]
        w[n] = acc / 2
    half = v / 2
    return PuiseuxSeries._raw(
        [Fraction(n, d) + half for n in range(n_max) if w[n]],
        [w[n] * root_c for n in range(n_max) if w[n]],
        rel + half,
    )


def residue(s: PuiseuxSeries) -> Fraction:
    """Image in the residue field of a series of nonnegative valuation."""
    if not s._exps:
        if s._prec > 0:
            return Fraction(0)
        raise IndeterminateValuation(f"cannot reduce O(t^{s._prec})")
    if s._exps[0] < 0:
        raise NegativeValuation(f"valuation {s._exps[0]} is negative")
    if s._prec <= 0:
        raise IndeterminateValuation("constant term lies beyond the precision")
    return s._coefs[0] if s._exps[0] == 0 else Fraction(0)


def t_power(e: Rational) -> PuiseuxSeries:
    return PuiseuxSeries.monomial(1, e)


T = t_power(1)
