"""Tropicalizations of elliptic curves with a cycle of length ``-v(j)``.

Pipeline: minimal model, a 3-torsion point reducing to the node, a shift to
``y^2 = x^3 + a(x - b)^2``, the plane model cut out by the pair

    f = x^2 / (y - a'(x - b)),   g = x^2 / (y + a'(x - b)),   a'^2 = a,

namely ``f*g^2 + 2a'*f*g - f^2*g - 2a'*b = 0``, and its tropical curve.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

from tropell.errors import (
    DiscriminantNotZero,
    IndeterminateValuation,
    NoRationalBranch,
    NonSquareLeadingCoefficient,
    NotMultiplicative,
    PrecisionExhausted,
    StageError,
    TropellError,
)
from tropell.newton_puiseux import UnivariatePolynomial, roots
from tropell.plane_curve import (
    CURVE_SCHEMA,
    CycleReport,
    TropicalPlaneCurve,
    contains_point,
    curve_of,
    curve_to_json,
    find_cycle,
)
from tropell.puiseux import INF, PuiseuxSeries, precision, residue, sqrt
from tropell.tropical import LaurentPolynomial, TropicalPolynomial, tropicalize
from tropell.weierstrass import (
    CoordinateChange,
    ProjectivePoint,
    ReductionType,
    WeierstrassModel,
    apply_change,
    classify_reduction,
    invariants,
    minimalize,
    point_class,
    q,
    reduce_point,
    series_json,
)

_MAX_DOUBLINGS = 3


def _s(x) -> PuiseuxSeries:
    return PuiseuxSeries.coerce(x)


@dataclass(frozen=True)
class FamilyForm:
    """``y^2 = x^3 + a(x - b)^2`` with ``v(a) = 0``, ``v(b) > 0`` and ``a_sqrt^2 = a``."""

    a: PuiseuxSeries
    a_sqrt: PuiseuxSeries
    b: PuiseuxSeries
    provenance: str = "user"  # "user" or "derived"

    @classmethod
    def of(cls, a, b, provenance="user") -> FamilyForm:
        a, b = _s(a), _s(b)
        fam = cls(a, sqrt(a), b, provenance)
        fam.check()
        return fam

    def check(self):
        if self.a.valuation() != 0:
            raise ValueError(f"v(a) must be 0, got {self.a.valuation()}")
        if self.b.is_zero() or self.b.valuation() <= 0:
            raise ValueError("v(b) must be positive")
        if (self.a_sqrt * self.a_sqrt - self.a).has_terms():
            raise ArithmeticError("a_sqrt^2 != a")

    @property
    def model(self) -> WeierstrassModel:
        return WeierstrassModel.family(self.a, self.b)

    @property
    def point(self) -> ProjectivePoint:
        return ProjectivePoint.affine(0, self.a_sqrt * self.b)

    def j_valuation(self):
        """``v(j)`` from ``j = -256 a (a + 6b)^3 / (4 a b^3 + 27 b^4)``."""
        a, b = self.a, self.b
        num = -256 * a * (a + 6 * b) ** 3
        den = 4 * a * b ** 3 + 27 * b ** 4
        return num.valuation() - den.valuation()

    def to_json(self) -> dict:
        return {
            "a": series_json(self.a),
            "a_sqrt": series_json(self.a_sqrt),
            "b": series_json(self.b),
            "provenance": self.provenance,
        }


# -- torsion ------------------------------------------------------------------


def division_polynomial_3(W: WeierstrassModel) -> UnivariatePolynomial:
    """``3x^4 + b2 x^3 + 3 b4 x^2 + 3 b6 x + b8``."""
    inv = invariants(W)
    return UnivariatePolynomial.of(inv.b8, 3 * inv.b6, 3 * inv.b4, inv.b2, 3)


def _y_over(W: WeierstrassModel, x: PuiseuxSeries) -> PuiseuxSeries:
    # 2y + a1 x + a3 = sqrt(4x^3 + b2 x^2 + 2 b4 x + b6)
    half = W.a1 * x + W.a3
    disc = half * half + 4 * (x * x * x + W.a2 * x * x + W.a4 * x + W.a6)
    return (sqrt(disc) - half) / 2


def _choice_key(root: PuiseuxSeries):
    terms = tuple(root.items())
    return (root.ramification, terms)


def find_three_torsion(W: WeierstrassModel, target_precision=24) -> ProjectivePoint:
    """A rational 3-torsion point of a minimal multiplicative model reducing to the node."""
    red = classify_reduction(W)
    if not red.is_multiplicative:
        raise NotMultiplicative(f"reduction is {red.kind.value}, not multiplicative")
    node_x = red.singular_point[0]
    found = roots(division_polynomial_3(W), target_precision)
    candidates = []
    irrational = 0
    for sol in found.solutions:
        x = sol.root
        if x.valuation_lower_bound() < 0 or residue(x) != node_x:
            continue
        try:
            y = _y_over(W, x)
        except NonSquareLeadingCoefficient:
            irrational += 1
            continue
        P = ProjectivePoint.affine(x, y)
        if point_class(reduce_point(P, W), red) == "singular":
            candidates.append(P)
    if not candidates:
        pending = irrational + sum(b.degree for b in found.unresolved)
        raise NoRationalBranch(
            f"no 3-torsion point with rational Puiseux coordinates reduces to the node"
            f" ({pending} candidate branch(es) need irrational coefficients)"
        )
    return min(candidates, key=lambda P: _choice_key(P.X))


# -- family form --------------------------------------------------------------


def shift_to_family(W: WeierstrassModel, P: ProjectivePoint, target_precision=24) -> Tuple[FamilyForm, CoordinateChange]:
    """Move ``P`` to ``(0, a'b)`` and read off ``y^2 = x^3 + a(x - b)^2``.

    Returns the family and the change from ``W`` to the family model.
    """
    x0, y0 = P.X / P.Z, P.Y / P.Z
    if x0.valuation_lower_bound() < 0:
        raise ValueError("x(P) must be integral")
    change = CoordinateChange(1, x0, 0, 0)
    V = apply_change(W, change)
    if not (V.a1.is_zero() and V.a3.is_zero()):
        square = CoordinateChange(1, 0, -V.a1 / 2, -V.a3 / 2)
        change = change.then(square)
        V = apply_change(V, square)
    _, yP = change.point_to_new(x0, y0)
    A2, A4, A6 = V.a2, V.a4, V.a6
    disc = A4 * A4 - 4 * A2 * A6
    if disc.has_terms() and disc.valuation() < target_precision:
        raise DiscriminantNotZero(f"quadratic part has discriminant {disc}")
    a = A2
    b = -A4 / (2 * A2)
    if (a * b * b - A6).has_terms():
        raise DiscriminantNotZero("constant term is not a*b^2")
    a_sqrt = sqrt(a)
    target = a_sqrt * b
    if (yP - target).has_terms():
        if (yP + target).has_terms():
            raise DiscriminantNotZero(f"y(P) = {yP} is not +-a'b = {target}")
        # the other sign: y -> -y keeps the family model
        change = change.then(CoordinateChange(-1, 0, 0, 0))
    fam = FamilyForm(a, a_sqrt, b, "derived")
    fam.check()
    return fam, change


# -- embedding ----------------------------------------------------------------


def embedding_equation(fam: FamilyForm) -> LaurentPolynomial:
    """``f g^2 + 2a' f g - f^2 g - 2a' b`` in variables ``(f, g)``."""
    ap = fam.a_sqrt
    return LaurentPolynomial(
        {(1, 2): 1, (1, 1): 2 * ap, (2, 1): -1, (0, 0): -2 * ap * fam.b},
        ("f", "g"),
    )


def embedding_coordinates(fam: FamilyForm, x, y) -> Tuple[PuiseuxSeries, PuiseuxSeries]:
    """``(f, g)`` at the affine point ``(x, y)`` of the family model."""
    x, y = _s(x), _s(y)
    line = fam.a_sqrt * (x - fam.b)
    x2 = x * x
    return x2 / (y - line), x2 / (y + line)


# -- certification ------------------------------------------------------------


@dataclass
class FaithfulReport:
    model: WeierstrassModel
    minimal_model: WeierstrassModel
    change: CoordinateChange
    reduction: ReductionType
    point: ProjectivePoint
    family: FamilyForm
    equation: LaurentPolynomial
    tropical: TropicalPolynomial
    curve: TropicalPlaneCurve
    cycle: Optional[CycleReport]
    minus_v_j: Fraction
    minus_v_j_family: Fraction
    three_v_b: Fraction
    precision: Fraction
    checks: dict = field(default_factory=dict)

    @property
    def cycle_length(self):
        return None if self.cycle is None else self.cycle.total_lattice_length

    @property
    def verdict(self) -> bool:
        return self.cycle is not None and self.cycle_length == self.minus_v_j and all(self.checks.values())

    def to_json(self) -> dict:
        return {
            "model": {"text": str(self.model), "coefficients": self.model.to_json()},
            "minimal_model": {"text": str(self.minimal_model),
                              "coefficients": self.minimal_model.to_json()},
            "change": self.change.to_json(),
            "reduction": {
                "type": self.reduction.kind.value,
                "singular_point": None if self.reduction.singular_point is None
                else [q(c) for c in self.reduction.singular_point],
            },
            "torsion_point": self.point.to_json(),
            "family": self.family.to_json(),
            "embedding_equation": {
                "text": str(self.equation),
                "variables": list(self.equation.variables),
                "terms": [[list(e), series_json(c)] for e, c in self.equation.terms.items()],
            },
            "tropical_polynomial": self.tropical.to_json(),
            "curve": curve_to_json(self.curve),
            "unimodular": self.curve.subdivision.is_unimodular(),
            "cycle": None if self.cycle is None else self.cycle.to_json(),
            "cycle_length": None if self.cycle is None else q(self.cycle_length),
            "minus_v_j": q(self.minus_v_j),
            "minus_v_j_family": q(self.minus_v_j_family),
            "three_v_b": q(self.three_v_b),
            "precision": q(self.precision),
            "checks": dict(self.checks),
            "verdict": self.verdict,
        }


def _stage(name, fn, *args):
    try:
        return fn(*args)
    except StageError:
        raise
    except (TropellError, ArithmeticError, ValueError) as exc:
        raise StageError(name, exc) from exc


def _run(W: WeierstrassModel, prec: Fraction, fam_given: Optional[FamilyForm]) -> FaithfulReport:
    inv = _stage("invariants", invariants, W)
    _stage("integrality", W.require_integral)
    M, change = _stage("minimalize", minimalize, W)
    red = _stage("classify_reduction", classify_reduction, M)
    if not red.is_multiplicative:
        exc = NotMultiplicative(f"reduction is {red.kind.value}; v(j) = {q(inv.v_j)}")
        exc.reduction = red.kind.value
        raise exc
    if fam_given is None:
        P = _stage("find_three_torsion", find_three_torsion, M, prec)
        fam, shift = _stage("shift_to_family", shift_to_family, M, P, prec)
    else:
        P = fam_given.point
        fam, shift = fam_given, CoordinateChange.identity()
    F = fam.model
    eq = _stage("embedding_equation", embedding_equation, fam)
    trop = _stage("tropicalize", tropicalize, eq)
    curve = _stage("curve_of", curve_of, trop)
    cycle = _stage("find_cycle", find_cycle, curve)

    minus_v_j = -inv.v_j
    minus_v_j_family = -_stage("j_family", fam.j_valuation)
    three_v_b = 3 * fam.b.valuation()
    checks = {}
    checks["v_j_agrees"] = minus_v_j == minus_v_j_family
    checks["cycle_is_three_v_b"] = cycle is not None and cycle.total_lattice_length == three_v_b
    # j is a model invariant: compare the truncated series across changes
    j0 = inv.j
    checks["j_invariant"] = all(
        j0.agrees_with(invariants(X).j) for X in (M, F)
    )
    # (y - a'(x - b))(y + a'(x - b)) = x^3 on the family model
    certificate = not (fam.a_sqrt * fam.a_sqrt - fam.a).has_terms()
    if fam_given is None:
        shifted = apply_change(M, shift)
        certificate = certificate and all(
            not (c1 - c2).has_terms() for c1, c2 in zip(shifted.coefficients, F.coefficients)
        )
    checks["inflection_certificate"] = certificate
    reduced = reduce_point(fam.point, F)
    fam_red = classify_reduction(F)
    checks["reduces_to_node"] = point_class(reduced, fam_red) == "singular"
    return FaithfulReport(
        model=W, minimal_model=M, change=change.then(shift), reduction=red, point=P,
        family=fam, equation=eq, tropical=trop, curve=curve, cycle=cycle,
        minus_v_j=minus_v_j, minus_v_j_family=minus_v_j_family, three_v_b=three_v_b,
        precision=prec, checks=checks,
    )


def _with_retries(W, prec, fam):
    prec = Fraction(prec)
    last = None
    for _ in range(_MAX_DOUBLINGS + 1):
        try:
            with precision(prec):
                return _run(W, prec, fam)
        except StageError as exc:
            if not isinstance(exc.cause, (PrecisionExhausted, IndeterminateValuation)):
                raise
            last = exc
        except (PrecisionExhausted, IndeterminateValuation) as exc:
            last = exc
        prec *= 2
    raise last


def certify(W: WeierstrassModel, target_precision=24) -> FaithfulReport:
    """Run the full pipeline on an integral model (general mode)."""
    return _with_retries(W, target_precision, None)


def certify_family(a, b, target_precision=24) -> FaithfulReport:
    """Run the pipeline from a user-supplied family ``y^2 = x^3 + a(x - b)^2``."""
    fam = _stage("family", FamilyForm.of, a, b)
    return _with_retries(fam.model, target_precision, fam)


# -- sampling -----------------------------------------------------------------


@dataclass(frozen=True)
class SampleResult:
    f: PuiseuxSeries
    point: Optional[Tuple[Fraction, Fraction]]  # (v(f), v(g)) for a resolved branch
    on_curve: Optional[bool]  # None when unresolved


@dataclass(frozen=True)
class SamplingReport:
    num_samples: int
    samples: Tuple[SampleResult, ...]  # one entry per root found, or per unresolved sample
    checked: int
    passed: int
    unresolved: int

    @property
    def ok(self) -> bool:
        return self.passed == self.checked

    def to_json(self) -> dict:
        return {
            "samples": self.num_samples,
            "points_checked": self.checked,
            "points_on_curve": self.passed,
            "unresolved": self.unresolved,
            "ok": self.ok,
            "points": [
                None if s.point is None else [q(s.point[0]), q(s.point[1]), s.on_curve]
                for s in self.samples
            ],
        }


_DENOMINATORS = (1, 2, 3)
_COEFFICIENTS = tuple(
    Fraction(sign * n, d) for n in range(1, 6) for d in (1, 2, 3) for sign in (1, -1)
)


def sample(report: FaithfulReport, num_samples: int, rng_seed: int = 0, window=None) -> SamplingReport:
    """Solve the embedding equation at random ``f = c t^q`` and test ``(v(f), v(g))``.

    ``q`` is drawn from ``window`` (default ``[-2 v(b), 5/4 v(b)]``) with
    denominator 1, 2 or 3.  A sample whose ``g`` needs irrational
    coefficients is counted as unresolved.
    """
    rng = random.Random(rng_seed)
    vb = report.family.b.valuation()
    lo, hi = window if window is not None else (-2 * vb, Fraction(5, 4) * vb)
    lo, hi = Fraction(lo), Fraction(hi)
    eq = report.equation
    out: List[SampleResult] = []
    checked = passed = unresolved = 0
    # enough to pin v(g), which never exceeds v(b) + |v(f)|
    prec = vb + abs(lo) + abs(hi) + 2
    for _ in range(num_samples):
        d = rng.choice(_DENOMINATORS)
        qv = Fraction(rng.randint(int(lo * d), int(hi * d)), d)
        c = rng.choice(_COEFFICIENTS)
        f = PuiseuxSeries.monomial(c, qv)
        coeffs = [PuiseuxSeries.zero()] * 3
        for (ef, eg), coef in eq.terms.items():
            coeffs[eg] = coeffs[eg] + coef * f ** ef
        with precision(prec):
            sols = roots(UnivariatePolynomial(tuple(coeffs)), prec)
        if sols.unresolved or not sols.solutions:
            unresolved += 1
            out.append(SampleResult(f, None, None))
            continue
        for sol in sols.solutions:
            g = sol.root
            pt = (qv, g.valuation())
            hit = contains_point(report.curve, pt)
            checked += 1
            passed += hit
            out.append(SampleResult(f, pt, hit))
    return SamplingReport(num_samples, tuple(out), checked, passed, unresolved)


def sample_check(report: FaithfulReport, num_samples: int, rng_seed: int = 0) -> bool:
    return sample(report, num_samples, rng_seed).ok


_RATIONAL = {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}
_SERIES = {
    "type": "object",
    "required": ["text", "terms", "precision"],
    "properties": {"text": {"type": "string"}, "terms": {"type": "array"}, "precision": {"type": "string"}},
}

FAITHFUL_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["model", "minimal_model", "reduction", "torsion_point", "family", "embedding_equation",
                 "tropical_polynomial", "curve", "cycle", "cycle_length", "minus_v_j", "three_v_b",
                 "checks", "verdict"],
    # the embedded curve schema refers to these
    "definitions": CURVE_SCHEMA["definitions"],
    "properties": {
        "reduction": {
            "type": "object",
            "required": ["type", "singular_point"],
            "properties": {"type": {"enum": ["good", "mult", "add"]}},
        },
        "family": {
            "type": "object",
            "required": ["a", "a_sqrt", "b", "provenance"],
            "properties": {"a": _SERIES, "a_sqrt": _SERIES, "b": _SERIES,
                           "provenance": {"enum": ["user", "derived"]}},
        },
        "curve": {k: v for k, v in CURVE_SCHEMA.items() if k not in ("$schema", "definitions")},
        "cycle": {"oneOf": [{"type": "null"}, {"type": "object"}]},
        "cycle_length": {"oneOf": [{"type": "null"}, _RATIONAL]},
        "minus_v_j": _RATIONAL,
        "three_v_b": _RATIONAL,
        "unimodular": {"type": "boolean"},
        "checks": {"type": "object", "additionalProperties": {"type": "boolean"}},
        "verdict": {"type": "boolean"},
        "sampling": {
            "type": "object",
            "required": ["samples", "points_checked", "points_on_curve", "unresolved", "ok", "points"],
            "properties": {
                "samples": {"type": "integer", "minimum": 0},
                "ok": {"type": "boolean"},
                "points": {"type": "array", "items": {"oneOf": [
                    {"type": "null"},
                    {"type": "array", "minItems": 3, "maxItems": 3,
                     "items": [_RATIONAL, _RATIONAL, {"type": "boolean"}]},
                ]}},
            },
        },
    },
}


__all__ = [
    "FAITHFUL_SCHEMA",
    "FaithfulReport",
    "FamilyForm",
    "SamplingReport",
    "certify",
    "certify_family",
    "division_polynomial_3",
    "embedding_coordinates",
    "embedding_equation",
    "find_three_torsion",
    "sample",
    "sample_check",
    "shift_to_family",
]
