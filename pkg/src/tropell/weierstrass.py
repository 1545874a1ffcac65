"""Weierstrass models over the Puiseux valuation ring.

A model is ``y^2 + a1*x*y + a3*y = x^3 + a2*x^2 + a4*x + a6``.  The residue
field is the rationals (characteristic 0), so dividing by 2 and 3 is always
allowed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from enum import Enum
from fractions import Fraction
from typing import Optional, Tuple

from tropell.errors import (
    IndeterminateValuation,
    NonIntegralInput,
    NotMinimal,
    NotOnCurve,
    SingularModel,
    ZeroScaling,
)
from tropell.literals import join_terms, parse_model
from tropell.puiseux import INF, PuiseuxSeries, residue, working_precision
from tropell.tropical import LaurentPolynomial

NAMES = ("a1", "a2", "a3", "a4", "a6")


def _s(x) -> PuiseuxSeries:
    return PuiseuxSeries.coerce(x)


def _lb(s: PuiseuxSeries):
    return s.valuation_lower_bound()


def q(x) -> str:
    """Rational (or infinite) value as a ``"p/q"`` string."""
    if x == INF:
        return "inf"
    return str(Fraction(x))


@dataclass(frozen=True)
class WeierstrassModel:
    a1: PuiseuxSeries
    a2: PuiseuxSeries
    a3: PuiseuxSeries
    a4: PuiseuxSeries
    a6: PuiseuxSeries

    def __post_init__(self):
        for name in NAMES:
            object.__setattr__(self, name, _s(getattr(self, name)))

    @classmethod
    def parse(cls, text: str) -> WeierstrassModel:
        return cls(*parse_model(text))

    @classmethod
    def short(cls, A, B) -> WeierstrassModel:
        """``y^2 = x^3 + A*x + B``."""
        return cls(0, 0, 0, A, B)

    @classmethod
    def family(cls, a, b) -> WeierstrassModel:
        """``y^2 = x^3 + a*(x - b)^2``."""
        a, b = _s(a), _s(b)
        return cls(0, a, 0, -2 * a * b, a * b * b)

    @property
    def coefficients(self) -> Tuple[PuiseuxSeries, ...]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def is_integral(self) -> bool:
        return all(c.is_zero() or _lb(c) >= 0 for c in self.coefficients)

    def require_integral(self):
        for name, c in zip(NAMES, self.coefficients):
            if c.is_zero():
                continue
            if c.has_terms() and c.valuation() < 0:
                raise NonIntegralInput(f"{name} = {c} has negative valuation")
            if not c.has_terms() and c.precision <= 0:
                raise IndeterminateValuation(f"{name} = {c} is unknown below t^0")

    def equation(self, x, y) -> PuiseuxSeries:
        """``lhs - rhs`` of the affine equation at ``(x, y)``."""
        x, y = _s(x), _s(y)
        return (y * y + self.a1 * x * y + self.a3 * y
                - (x * x * x + self.a2 * x * x + self.a4 * x + self.a6))

    def homogeneous(self, X, Y, Z) -> PuiseuxSeries:
        X, Y, Z = _s(X), _s(Y), _s(Z)
        return (Y * Y * Z + self.a1 * X * Y * Z + self.a3 * Y * Z * Z
                - (X * X * X + self.a2 * X * X * Z + self.a4 * X * Z * Z + self.a6 * Z * Z * Z))

    def laurent(self) -> LaurentPolynomial:
        """The defining polynomial ``lhs - rhs`` in variables ``x, y``."""
        terms = {(0, 2): _s(1), (3, 0): _s(-1)}
        for e, c, sign in (((1, 1), self.a1, 1), ((0, 1), self.a3, 1), ((2, 0), self.a2, -1),
                           ((1, 0), self.a4, -1), ((0, 0), self.a6, -1)):
            terms[e] = c * sign
        return LaurentPolynomial(terms, ("x", "y"))

    def residue_coefficients(self) -> Tuple[Fraction, ...]:
        return tuple(residue(c) for c in self.coefficients)

    def literal(self) -> str:
        return "[" + ",".join(str(c) for c in self.coefficients) + "]"

    def __str__(self):
        def part(c, mono):
            if c.is_zero():
                return None
            if c == 1:
                return mono or "1"
            if c == -1:
                return "-" + (mono or "1")
            text = str(c)
            if len(c) != 1 or not c.is_exact:
                text = f"({text})"
            return f"{text}*{mono}" if mono else text

        lhs = [p for p in ("y^2", part(self.a1, "x*y"), part(self.a3, "y")) if p]
        rhs = [p for p in ("x^3", part(self.a2, "x^2"), part(self.a4, "x"), part(self.a6, "")) if p]
        return f"{join_terms(lhs)} = {join_terms(rhs)}"

    def to_json(self) -> dict:
        return {name: series_json(c) for name, c in zip(NAMES, self.coefficients)}


def series_json(s: PuiseuxSeries) -> dict:
    return {
        "text": str(s),
        "terms": [[q(e), q(c)] for e, c in s.items()],
        "precision": q(s.precision),
    }


# -- invariants ---------------------------------------------------------------


@dataclass(frozen=True)
class StandardInvariants:
    b2: PuiseuxSeries
    b4: PuiseuxSeries
    b6: PuiseuxSeries
    b8: PuiseuxSeries
    c4: PuiseuxSeries
    c6: PuiseuxSeries
    discriminant: PuiseuxSeries

    @cached_property
    def j(self) -> PuiseuxSeries:
        """``c4^3 / discriminant``, to the working precision; computed on first use."""
        if self.c4.is_zero():
            return PuiseuxSeries.zero()
        return self.c4 * self.c4 * self.c4 / self.discriminant

    @property
    def v_discriminant(self):
        return self.discriminant.valuation()

    @property
    def v_j(self):
        """``3 v(c4) - v(discriminant)``; ``inf`` when ``c4 = 0``."""
        if self.c4.is_zero():
            return INF
        return 3 * self.c4.valuation() - self.discriminant.valuation()


def _b_invariants(W: WeierstrassModel):
    a1, a2, a3, a4, a6 = W.coefficients
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    return b2, b4, b6, b8


def invariants(W: WeierstrassModel) -> StandardInvariants:
    b2, b4, b6, b8 = _b_invariants(W)
    c4 = b2 * b2 - 24 * b4
    c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6
    disc = -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    if disc.is_zero():
        raise SingularModel(f"the model {W} has zero discriminant")
    defect = 4 * b8 - (b2 * b6 - b4 * b4)
    identity = c4 * c4 * c4 - c6 * c6 - 1728 * disc
    if defect.has_terms() or identity.has_terms():
        raise ArithmeticError("standard invariant identities failed")
    if not disc.has_terms():
        raise IndeterminateValuation(f"discriminant known only as {disc}")
    return StandardInvariants(b2, b4, b6, b8, c4, c6, disc)


def is_minimal(W: WeierstrassModel) -> bool:
    """``min(v(c4), v(c6)) == 0`` for an integral model."""
    W.require_integral()
    inv = invariants(W)
    vals = [c.valuation() for c in (inv.c4, inv.c6) if not c.is_zero()]
    return min(vals) == 0


# -- coordinate changes -------------------------------------------------------


@dataclass(frozen=True)
class CoordinateChange:
    """``x = u^2 x' + r``, ``y = u^3 y' + u^2 s x' + t``."""

    u: PuiseuxSeries
    r: PuiseuxSeries
    s: PuiseuxSeries
    t: PuiseuxSeries

    def __post_init__(self):
        for name in ("u", "r", "s", "t"):
            object.__setattr__(self, name, _s(getattr(self, name)))
        if self.u.is_zero():
            raise ZeroScaling("u must be nonzero")

    @classmethod
    def identity(cls) -> CoordinateChange:
        return cls(1, 0, 0, 0)

    @property
    def is_identity(self) -> bool:
        return self.u == 1 and all(c.is_zero() for c in (self.r, self.s, self.t))

    def then(self, other: CoordinateChange) -> CoordinateChange:
        """The change equal to applying ``self`` first and ``other`` to the result."""
        u, r, s, t = self.u, self.r, self.s, self.t
        u2 = u * u
        return CoordinateChange(
            u * other.u,
            r + u2 * other.r,
            s + u * other.s,
            t + u2 * u * other.t + u2 * s * other.r,
        )

    def point_to_new(self, x, y):
        """Coordinates ``(x', y')`` of the affine point ``(x, y)``."""
        x, y = _s(x), _s(y)
        u2 = self.u * self.u
        xn = (x - self.r) / u2
        yn = (y - u2 * self.s * xn - self.t) / (u2 * self.u)
        return xn, yn

    def to_json(self) -> dict:
        return {k: series_json(getattr(self, k)) for k in ("u", "r", "s", "t")}


def apply_change(W: WeierstrassModel, c: CoordinateChange) -> WeierstrassModel:
    a1, a2, a3, a4, a6 = W.coefficients
    u, r, s, t = c.u, c.r, c.s, c.t
    if c.is_identity:
        return W
    inv_u = 1 / u
    p = [PuiseuxSeries.one()]
    for _ in range(6):
        p.append(p[-1] * inv_u)
    n1 = (a1 + 2 * s) * p[1]
    n2 = (a2 - s * a1 + 3 * r - s * s) * p[2]
    n3 = (a3 + r * a1 + 2 * t) * p[3]
    n4 = (a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t) * p[4]
    n6 = (a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1) * p[6]
    out = WeierstrassModel(n1, n2, n3, n4, n6)
    u12 = PuiseuxSeries.one()
    for _ in range(12):
        u12 = u12 * u
    try:
        before, after = invariants(W).discriminant, invariants(out).discriminant
    except SingularModel:
        return out
    if (u12 * after - before).has_terms():
        raise ArithmeticError("u^12 * disc' != disc after a coordinate change")
    return out


def _valuation_or_inf(s: PuiseuxSeries):
    return INF if s.is_zero() else s.valuation()


def minimalize(W: WeierstrassModel) -> Tuple[WeierstrassModel, CoordinateChange]:
    """A minimal integral model and the change that produces it.

    Already-minimal input is returned with the identity change.  Otherwise
    the model is first put in the form ``y^2 = x^3 - c4/48 x - c6/864`` and
    then rescaled by ``u = t^m`` with ``m = min(v(c4)/4, v(c6)/6)``.
    """
    W.require_integral()
    if is_minimal(W):
        return W, CoordinateChange.identity()
    a1, a2, a3 = W.a1, W.a2, W.a3
    b2 = a1 * a1 + 4 * a2
    # complete the square, then the cube
    change = CoordinateChange(1, 0, -a1 / 2, -a3 / 2)
    change = change.then(CoordinateChange(1, -b2 / 12, 0, 0))
    short = apply_change(W, change)
    inv = invariants(short)
    m = min(_valuation_or_inf(inv.c4) / 4, _valuation_or_inf(inv.c6) / 6)
    m = Fraction(m)
    if m > 0:
        scale = CoordinateChange(PuiseuxSeries.monomial(1, m), 0, 0, 0)
        short = apply_change(short, scale)
        change = change.then(scale)
    if not (short.is_integral and is_minimal(short)):
        raise ArithmeticError("minimalization did not produce a minimal integral model")
    return short, change


# -- reduction ----------------------------------------------------------------


class Reduction(Enum):
    GOOD = "good"
    MULTIPLICATIVE = "mult"
    ADDITIVE = "add"


@dataclass(frozen=True)
class ReductionType:
    kind: Reduction
    singular_point: Optional[Tuple[Fraction, Fraction]] = None

    @property
    def is_multiplicative(self) -> bool:
        return self.kind is Reduction.MULTIPLICATIVE


def _poly_trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mod(a, b):
    a = list(a)
    while len(a) >= len(b):
        if a[-1] == 0:
            a.pop()
            continue
        f = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] -= f * c
        a.pop()
    return _poly_trim(a)


def _poly_gcd(a, b):
    a, b = _poly_trim(a), _poly_trim(b)
    while b:
        a, b = b, _poly_mod(a, b)
    return a


def singular_point(coeffs: Tuple[Fraction, ...]) -> Optional[Tuple[Fraction, Fraction]]:
    """The singular point of a Weierstrass cubic over the rationals, if any.

    Both partial derivatives vanish exactly where ``x`` is a repeated root of
    ``4x^3 + b2 x^2 + 2 b4 x + b6`` and ``2y + a1 x + a3 = 0``.
    """
    a1, a2, a3, a4, a6 = (Fraction(c) for c in coeffs)
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    g = [b6, 2 * b4, b2, Fraction(4)]
    dg = [2 * b4, 2 * b2, Fraction(12)]
    h = _poly_gcd(g, dg)
    if len(h) <= 1:
        return None
    if len(h) == 2:
        x = -h[0] / h[1]
    else:
        # (x - r)^2 or (x - r)^3 up to scaling
        x = -h[-2] / ((len(h) - 1) * h[-1])
    y = -(a1 * x + a3) / 2
    return x, y


def classify_reduction(W: WeierstrassModel) -> ReductionType:
    if not is_minimal(W):
        raise NotMinimal(f"{W} is not a minimal model")
    inv = invariants(W)
    if inv.v_discriminant == 0:
        return ReductionType(Reduction.GOOD)
    point = singular_point(W.residue_coefficients())
    if point is None:
        raise ArithmeticError("positive discriminant valuation but smooth reduction")
    if residue(inv.c4) != 0:
        return ReductionType(Reduction.MULTIPLICATIVE, point)
    return ReductionType(Reduction.ADDITIVE, point)


def reduction_consistency(W: WeierstrassModel) -> bool:
    """Good iff ``v(j) >= 0``, multiplicative iff ``v(j) < 0``, never additive."""
    kind = classify_reduction(W).kind
    vj = invariants(W).v_j
    if kind is Reduction.ADDITIVE:
        return False
    return (kind is Reduction.GOOD) == (vj >= 0) and (kind is Reduction.MULTIPLICATIVE) == (vj < 0)


# -- points -------------------------------------------------------------------


@dataclass(frozen=True)
class ProjectivePoint:
    X: PuiseuxSeries
    Y: PuiseuxSeries
    Z: PuiseuxSeries

    def __post_init__(self):
        for name in ("X", "Y", "Z"):
            object.__setattr__(self, name, _s(getattr(self, name)))
        if all(c.is_zero() for c in (self.X, self.Y, self.Z)):
            raise ValueError("[0:0:0] is not a projective point")

    @classmethod
    def affine(cls, x, y) -> ProjectivePoint:
        return cls(x, y, 1)

    @classmethod
    def identity(cls) -> ProjectivePoint:
        return cls(0, 1, 0)

    @property
    def coordinates(self):
        return (self.X, self.Y, self.Z)

    def normalized(self) -> ProjectivePoint:
        """Scaled by a power of ``t`` so the least coordinate valuation is 0."""
        m = min(c.valuation() for c in self.coordinates if not c.is_zero())
        return ProjectivePoint(*(c.shift(-m) for c in self.coordinates))

    def to_json(self) -> dict:
        return {k: series_json(c) for k, c in zip("XYZ", self.coordinates)}


def reduce_point(P: ProjectivePoint, W: WeierstrassModel, tolerance=None) -> Tuple[Fraction, Fraction, Fraction]:
    """Residues of the normalized coordinates of ``P``.

    ``P`` must satisfy the equation to ``tolerance`` (default: the working
    precision, capped by the precision the coordinates carry).
    """
    N = P.normalized()
    residual = W.homogeneous(*N.coordinates)
    limit = Fraction(tolerance) if tolerance is not None else working_precision()
    carried = min(c.precision for c in N.coordinates)
    if carried != INF:
        limit = min(limit, Fraction(carried))
    if residual.has_terms() and residual.valuation() < limit or _lb(residual) <= 0:
        raise NotOnCurve(f"equation residual {residual} is not small enough")
    return tuple(residue(c) for c in N.coordinates)


def point_class(reduced: Tuple[Fraction, Fraction, Fraction], reduction: ReductionType) -> str:
    """``identity``, ``singular`` or ``smooth`` for a reduced point."""
    X, Y, Z = reduced
    if Z == 0:
        return "identity"
    if reduction.singular_point is not None and (X / Z, Y / Z) == reduction.singular_point:
        return "singular"
    return "smooth"


# -- report -------------------------------------------------------------------


def analyze(W: WeierstrassModel) -> dict:
    """Reduction report of an integral model, computed on its minimalization."""
    W.require_integral()
    inv = invariants(W)
    minimal = is_minimal(W)
    M, change = minimalize(W)
    red = classify_reduction(M)
    m_inv = invariants(M)
    point = red.singular_point
    return {
        "minimal": minimal,
        "reduction": red.kind.value,
        "vDelta": q(m_inv.v_discriminant),
        "vj": q(m_inv.v_j),
        "singular_point": None if point is None else [q(point[0]), q(point[1])],
        "input_vDelta": q(inv.v_discriminant),
        "model": str(W),
        "minimal_model": str(M),
        "minimal_literal": M.literal(),
        "change": {k: str(getattr(change, k)) for k in ("u", "r", "s", "t")},
        "consistent": reduction_consistency(M),
    }


REPORT_SCHEMA = {
    "type": "object",
    "required": ["minimal", "reduction", "vDelta", "vj", "singular_point"],
    "properties": {
        "minimal": {"type": "boolean"},
        "reduction": {"enum": ["good", "mult", "add"]},
        "vDelta": {"type": "string", "pattern": r"^-?\d+(/\d+)?$"},
        "vj": {"type": "string", "pattern": r"^(-?\d+(/\d+)?|inf)$"},
        "singular_point": {
            "oneOf": [
                {"type": "null"},
                {"type": "array", "minItems": 2, "maxItems": 2,
                 "items": {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}},
            ]
        },
    },
}


__all__ = [
    "CoordinateChange",
    "ProjectivePoint",
    "REPORT_SCHEMA",
    "Reduction",
    "ReductionType",
    "StandardInvariants",
    "WeierstrassModel",
    "analyze",
    "apply_change",
    "classify_reduction",
    "invariants",
    "is_minimal",
    "minimalize",
    "point_class",
    "reduce_point",
    "reduction_consistency",
    "series_json",
    "singular_point",
]
