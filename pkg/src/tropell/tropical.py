"""Min-plus tropical polynomials and tropicalization of Laurent polynomials."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Mapping, Sequence, Tuple

from tropell.errors import DegenerateInput
from tropell.literals import join_terms, parse_expression
from tropell.puiseux import INF, PuiseuxSeries

Exponent = Tuple[int, ...]


def tadd(a, b):
    """Tropical sum: the minimum; ``inf`` is the identity."""
    return a if a <= b else b


def tmul(a, b):
    """Tropical product: ordinary addition; ``inf`` absorbs."""
    if a == INF or b == INF:
        return INF
    return a + b


def _as_value(x):
    if x == INF:
        return INF
    if isinstance(x, float):
        raise TypeError("tropical coefficients must be rational or inf")
    return Fraction(x)


@dataclass(frozen=True)
class TropicalPolynomial:
    """Finite map from integer exponent vectors to rational coefficients.

    Represents ``x -> min_i (c_i + <i, x>)``.  Two term maps describing the
    same function are *not* identified.
    """

    terms: Mapping[Exponent, Fraction]

    def __post_init__(self):
        clean: Dict[Exponent, Fraction] = {}
        nvars = None
        for e, c in dict(self.terms).items():
            e = tuple(int(x) for x in e)
            if nvars is None:
                nvars = len(e)
            elif len(e) != nvars:
                raise ValueError("exponent vectors have different lengths")
            c = _as_value(c)
            if c == INF:
                continue
            clean[e] = c
        if not clean:
            raise DegenerateInput("a tropical polynomial needs at least one finite term")
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    @property
    def nvars(self) -> int:
        return len(next(iter(self.terms)))

    def __len__(self):
        return len(self.terms)

    def evaluate(self, point: Sequence) -> Fraction:
        return evaluate(self, point)

    def argmin_terms(self, point: Sequence) -> frozenset:
        return argmin_terms(self, point)

    def __mul__(self, other: TropicalPolynomial) -> TropicalPolynomial:
        """Tropical product; its terms are the Minkowski sum of supports."""
        out: Dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = tadd(out.get(e, INF), c1 + c2)
        return TropicalPolynomial(out)

    def to_json(self) -> dict:
        return {
            "nvars": self.nvars,
            "terms": [[list(e), str(c)] for e, c in self.terms.items()],
        }

    @classmethod
    def from_json(cls, data) -> TropicalPolynomial:
        if isinstance(data, str):
            data = json.loads(data)
        return cls({tuple(e): Fraction(c) for e, c in data["terms"]})

    def format(self, names=("x", "y")) -> str:
        """Render as ``min{...}`` with linear forms, e.g. ``min{2, 1 + 2x, -x}``."""
        pieces = []
        for e, c in self.terms.items():
            linear = []
            for k, name in zip(e, names):
                if k == 0:
                    continue
                coef = "" if k == 1 else "-" if k == -1 else str(k)
                linear.append(f"{coef}{name}")
            body = join_terms(linear)
            if not body:
                pieces.append(str(c))
            elif c == 0:
                pieces.append(body)
            else:
                pieces.append(join_terms([body, str(c)]))
        return "min{" + ", ".join(pieces) + "}"

    def __str__(self):
        names = ("x", "y") if self.nvars == 2 else tuple(f"x{i + 1}" for i in range(self.nvars))
        return self.format(names)


def evaluate(F: TropicalPolynomial, point: Sequence) -> Fraction:
    """``min_i c_i + <i, point>``."""
    point = [Fraction(p) for p in point]
    if len(point) != F.nvars:
        raise ValueError(f"point has {len(point)} coordinates, expected {F.nvars}")
    return min(c + sum(a * p for a, p in zip(e, point)) for e, c in F.terms.items())


def argmin_terms(F: TropicalPolynomial, point: Sequence) -> frozenset:
    """Exponents attaining the minimum at ``point``.

    ``point`` lies on the tropical hypersurface iff at least two terms attain it.
    """
    point = [Fraction(p) for p in point]
    values = {e: c + sum(a * p for a, p in zip(e, point)) for e, c in F.terms.items()}
    best = min(values.values())
    return frozenset(e for e, v in values.items() if v == best)


@dataclass(frozen=True)
class LaurentPolynomial:
    """Laurent polynomial in named variables with Puiseux-series coefficients."""

    terms: Mapping[Exponent, PuiseuxSeries]
    variables: Tuple[str, ...] = ("x", "y")

    def __post_init__(self):
        clean = {}
        for e, c in dict(self.terms).items():
            e = tuple(int(x) for x in e)
            if len(e) != len(self.variables):
                raise ValueError("exponent length does not match the variables")
            c = PuiseuxSeries.coerce(c)
            if c.is_zero():
                continue
            clean[e] = c
        object.__setattr__(self, "terms", dict(sorted(clean.items())))
        object.__setattr__(self, "variables", tuple(self.variables))

    @classmethod
    def parse(cls, text: str, variables=None) -> LaurentPolynomial:
        """Parse e.g. ``"x^2*y + x*y + x*y^2 + t^3"``.

        Without explicit ``variables`` the names found in the text are used,
        in sorted order.
        """
        poly = parse_expression(text, allowed=variables)
        if variables is None:
            names = sorted({n for mono in poly for n, _ in mono})
            variables = tuple(names)
        index = {n: i for i, n in enumerate(variables)}
        terms = {}
        for mono, coef in poly.items():
            e = [0] * len(variables)
            for name, power in mono:
                e[index[name]] = power
            terms[tuple(e)] = coef
        return cls(terms, tuple(variables))

    def evaluate(self, point: Sequence[PuiseuxSeries]) -> PuiseuxSeries:
        """Substitute series values for the variables."""
        total = PuiseuxSeries.zero()
        for e, c in self.terms.items():
            term = c
            for x, k in zip(point, e):
                term = term * (PuiseuxSeries.coerce(x) ** k)
            total = total + term
        return total

    def __str__(self):
        pieces = []
        for e, c in self.terms.items():
            mono = "*".join(
                n if k == 1 else f"{n}^{k}" for n, k in zip(self.variables, e) if k != 0
            )
            if not mono:
                pieces.append(str(c) if len(c) <= 1 else f"({c})")
                continue
            if c == 1:
                pieces.append(mono)
            elif c == -1:
                pieces.append("-" + mono)
            elif len(c) == 1 and c.is_exact:
                pieces.append(f"{c}*{mono}")
            else:
                pieces.append(f"({c})*{mono}")
        return join_terms(pieces) if pieces else "0"


def tropicalize(f: LaurentPolynomial) -> TropicalPolynomial:
    """Replace each coefficient by its valuation."""
    if not f.terms:
        raise DegenerateInput("the zero polynomial has no tropicalization")
    return TropicalPolynomial({e: c.valuation() for e, c in f.terms.items()})


__all__ = [
    "LaurentPolynomial",
    "TropicalPolynomial",
    "argmin_terms",
    "evaluate",
    "tadd",
    "tmul",
    "tropicalize",
]
