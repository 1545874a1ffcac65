"""Roots of univariate polynomials over the Puiseux field.

Roots are expanded by Newton-polygon descent.  Residue equations are solved
over the rationals only; a branch whose residue polynomial has irrational
roots is reported as unresolved instead of being dropped.  Simple branches
switch to Newton iteration once their leading term is isolated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from tropell.errors import IndeterminateValuation, PrecisionExhausted
from tropell.puiseux import INF, PuiseuxSeries, precision

_MAX_REFINEMENTS = 6


@dataclass(frozen=True)
class UnivariatePolynomial:
    coefficients: Tuple[PuiseuxSeries, ...]  # index = degree

    def __post_init__(self):
        coeffs = [PuiseuxSeries.coerce(c) for c in self.coefficients]
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        if not coeffs:
            raise ValueError("the zero polynomial has no roots to speak of")
        coeffs[-1].valuation()  # leading coefficient must be determinate
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @classmethod
    def of(cls, *coefficients) -> UnivariatePolynomial:
        return cls(tuple(coefficients))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, y) -> PuiseuxSeries:
        y = PuiseuxSeries.coerce(y)
        acc = self.coefficients[-1]
        for c in reversed(self.coefficients[:-1]):
            acc = acc * y + c
        return acc

    def derivative(self) -> UnivariatePolynomial:
        if self.degree == 0:
            return UnivariatePolynomial((PuiseuxSeries.zero(), PuiseuxSeries.zero()))
        return UnivariatePolynomial(
            tuple(c * i for i, c in enumerate(self.coefficients) if i > 0)
        )

    def scale(self, s) -> UnivariatePolynomial:
        s = PuiseuxSeries.coerce(s)
        return UnivariatePolynomial(tuple(c * s for c in self.coefficients))

    def taylor_shift(self, c) -> UnivariatePolynomial:
        """Coefficients of ``y -> self(y + c)``."""
        c = PuiseuxSeries.coerce(c)
        coeffs = list(self.coefficients)
        n = len(coeffs)
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                coeffs[j] = coeffs[j] + c * coeffs[j + 1]
        return UnivariatePolynomial(tuple(coeffs))

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coefficients):
            if c.is_zero():
                continue
            mono = "" if i == 0 else "y" if i == 1 else f"y^{i}"
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


@dataclass(frozen=True)
class RootSolution:
    root: PuiseuxSeries
    multiplicity: int
    certified_precision: object  # Fraction or inf


@dataclass(frozen=True)
class UnresolvedBranch:
    prefix: PuiseuxSeries  # the known part of the roots in this branch
    valuation: Fraction  # valuation of the next, irrational, term
    degree: int  # number of roots (with multiplicity) in the branch
    residue_polynomial: Tuple[Fraction, ...]  # factor with no rational roots


@dataclass(frozen=True)
class Roots:
    solutions: Tuple[RootSolution, ...]
    unresolved: Tuple[UnresolvedBranch, ...]

    def __iter__(self):
        return iter(self.solutions)

    def __len__(self):
        return len(self.solutions)


# -- Newton polygon -----------------------------------------------------------


def _points(p: UnivariatePolynomial, strict=True):
    pts = []
    for i, c in enumerate(p.coefficients):
        if c.is_zero():
            continue
        if c.has_terms():
            pts.append((i, c.valuation(), True))
        elif strict:
            raise IndeterminateValuation(f"coefficient of degree {i} is {c}")
        else:
            pts.append((i, c.precision, False))
    return pts


def _lower_hull(pts):
    hull = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2][:2], hull[-1][:2]
            if (y2 - y1) * (p[0] - x1) >= (p[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def newton_polygon(p: UnivariatePolynomial) -> List[Tuple[Fraction, int]]:
    """``(root valuation, number of roots)`` per hull segment, valuations increasing.

    The root valuation of a segment is minus its slope in the ``(i, v(c_i))`` plane.
    """
    pts = _points(p)
    if len(pts) < 2:
        return []
    hull = _lower_hull(pts)
    segs = []
    for (x1, y1, _), (x2, y2, _) in zip(hull, hull[1:]):
        segs.append((-Fraction(y2 - y1) / (x2 - x1), x2 - x1))
    return sorted(segs)


# -- rational roots of the residue polynomial ---------------------------------


def _divisors(n: int) -> List[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _synthetic_division(coeffs: List[Fraction], r: Fraction):
    # coeffs low-to-high; returns (quotient, remainder)
    n = len(coeffs) - 1
    q = [Fraction(0)] * n
    acc = Fraction(0)
    for i in range(n, 0, -1):
        acc = acc * r + coeffs[i]
        q[i - 1] = acc
    rem = acc * r + coeffs[0]
    return q, rem


def rational_roots(coeffs: Sequence[Fraction]) -> Tuple[List[Tuple[Fraction, int]], List[Fraction]]:
    """Nonzero rational roots with multiplicities, and the leftover cofactor.

    ``coeffs`` are low-to-high with a nonzero constant term.
    """
    poly = [Fraction(c) for c in coeffs]
    while poly and poly[-1] == 0:
        poly.pop()
    if len(poly) < 2:
        return [], poly
    scale = 1
    for c in poly:
        scale = math.lcm(scale, c.denominator)
    ints = [int(c * scale) for c in poly]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    ints = [x // g for x in ints]
    candidates = set()
    for num in _divisors(ints[0]):
        for den in _divisors(ints[-1]):
            candidates.add(Fraction(num, den))
            candidates.add(Fraction(-num, den))
    found = []
    for r in sorted(candidates):
        mult = 0
        while len(poly) > 1:
            q, rem = _synthetic_division(poly, r)
            if rem != 0:
                break
            poly = q
            mult += 1
        if mult:
            found.append((r, mult))
    return found, poly


# -- descent ------------------------------------------------------------------


class _Search:
    def __init__(self, p: UnivariatePolynomial, target: Fraction):
        self.p = p
        self.target = target
        self.solutions: List[RootSolution] = []
        self.unresolved: List[UnresolvedBranch] = []
        ram = 1
        for c in p.coefficients:
            ram = math.lcm(ram, c.ramification)
        self.max_steps = math.ceil(max(target, 1) * ram) * max(p.degree, 1) * 4 + 64
        self.steps = 0

    def tick(self):
        self.steps += 1
        if self.steps > self.max_steps:
            raise PrecisionExhausted("Newton-Puiseux descent did not terminate within its bound")

    def descend(self, q: UnivariatePolynomial, prefix: PuiseuxSeries, bound):
        self.tick()
        coeffs = list(q.coefficients)
        z = 0
        while z < len(coeffs) and coeffs[z].is_zero():
            z += 1
        if z:
            self.solutions.append(RootSolution(prefix, z, prefix.precision))
            q = UnivariatePolynomial(tuple(coeffs[z:]))
            if q.degree == 0:
                return
        pts = _points(q, strict=False)
        hull = _lower_hull(pts)
        segments = []
        for a, b in zip(hull, hull[1:]):
            mu = -Fraction(b[1] - a[1]) / (b[0] - a[0])
            if mu > bound:
                segments.append((mu, a, b))
        certified = [s for s in segments if s[0] >= self.target]
        if certified:
            mult = sum(b[0] - a[0] for _, a, b in certified)
            mu_min = min(s[0] for s in certified)
            root = prefix.truncate(mu_min)
            self.solutions.append(RootSolution(root, mult, mu_min))
        for mu, a, b in segments:
            if mu >= self.target:
                continue
            i0, i1 = a[0], b[0]
            line = a[1] + i0 * mu
            residue = []
            for i in range(i0, i1 + 1):
                c = q.coefficients[i]
                if c.is_zero():
                    residue.append(Fraction(0))
                    continue
                lb = c.valuation_lower_bound()
                if not c.has_terms() and lb + i * mu <= line:
                    raise PrecisionExhausted(
                        f"coefficient of degree {i} is known only to O(t^{lb})"
                    )
                residue.append(c.leading_coefficient if lb + i * mu == line else Fraction(0))
            # only every e-th entry can be nonzero; keep the full list, roots are in z
            found, rest = rational_roots(residue)
            found_deg = sum(m for _, m in found)
            if found_deg < i1 - i0:
                self.unresolved.append(
                    UnresolvedBranch(prefix, mu, i1 - i0 - found_deg, tuple(rest))
                )
            for r, m in found:
                term = PuiseuxSeries.monomial(r, mu)
                if m == 1:
                    self.lift_simple(q, prefix, term)
                else:
                    self.descend(q.taylor_shift(term), prefix + term, mu)

    def lift_simple(self, q: UnivariatePolynomial, prefix: PuiseuxSeries, y: PuiseuxSeries):
        """Newton iteration for a root of ``q`` whose leading term ``y`` is a simple residue root."""
        dq = q.derivative()
        goal = self.target
        while True:
            self.tick()
            value = q(y)
            slope = dq(y)
            w = slope.valuation()
            res = value.valuation_lower_bound()
            accuracy = res - w
            if value.has_terms() and min(res, accuracy) < goal:
                # accuracy goal - w is needed for the residual when w < 0
                cut = goal + max(-w, 0) + 1
                with precision(max(cut - res + w, Fraction(1))):
                    delta = value * (1 / slope)
                # keep the iterate exact so the residual stays fully known
                y = PuiseuxSeries([(e, c) for e, c in (y - delta).items() if e < cut])
                continue
            if min(res, accuracy) < goal:
                raise PrecisionExhausted(
                    f"residual known only to O(t^{res}); cannot certify precision {goal}"
                )
            root = (prefix + y).truncate(goal)
            self.solutions.append(RootSolution(root, 1, goal))
            return


def roots(p: UnivariatePolynomial, target_precision) -> Roots:
    """All rational-coefficient Puiseux roots of ``p``, certified to ``target_precision``.

    Each returned root ``r`` satisfies ``v(p(r)) >= certified_precision`` when
    substituted back (truncation included).
    """
    if p.degree < 1:
        raise ValueError("roots() needs a polynomial of degree at least 1")
    target = Fraction(target_precision)
    internal = target
    for _ in range(_MAX_REFINEMENTS):
        search = _Search(p, internal)
        search.descend(p, PuiseuxSeries.zero(), -INF)
        deficit = Fraction(0)
        solutions = []
        for sol in search.solutions:
            residual = p(sol.root).valuation_lower_bound()
            certified = min(residual, sol.certified_precision)
            if certified < target:
                deficit = max(deficit, target - certified)
            solutions.append(RootSolution(sol.root, sol.multiplicity, certified))
        if deficit == 0:
            solutions.sort(key=lambda s: _root_key(s.root))
            return Roots(tuple(solutions), tuple(search.unresolved))
        internal += deficit
    raise PrecisionExhausted(f"could not certify roots to precision {target}")


def _root_key(s: PuiseuxSeries):
    terms = tuple(s.items())
    return (max((e.denominator for e, _ in terms), default=1), terms)


__all__ = [
    "RootSolution",
    "Roots",
    "UnivariatePolynomial",
    "UnresolvedBranch",
    "newton_polygon",
    "rational_roots",
    "roots",
]
