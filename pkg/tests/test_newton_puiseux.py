import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strategies import coefficients, series
from tropell.errors import IndeterminateValuation, PrecisionExhausted
from tropell.literals import parse_series
from tropell.newton_puiseux import (
    UnivariatePolynomial,
    newton_polygon,
    rational_roots,
    roots,
)
from tropell.puiseux import PuiseuxSeries

S = parse_series
P = UnivariatePolynomial.of


def brute_polygon(points):
    """Lower hull segments by brute force over all pairs."""
    segs = []
    for (i, a), (j, b) in itertools.combinations(sorted(points), 2):
        slope = Fraction(b - a, j - i)
        line = lambda k: a + slope * (k - i)  # noqa: E731
        if all(v >= line(k) for k, v in points):
            on = [k for k, v in points if v == line(k)]
            if min(on) == i and max(on) == j:
                segs.append((-slope, j - i))
    return sorted(segs)


def planted(rs, scale=1):
    """Coefficients of scale * prod (y - r)."""
    coeffs = [PuiseuxSeries.coerce(scale)]
    for r in rs:
        nxt = [PuiseuxSeries.zero()] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i + 1] = nxt[i + 1] + c
            nxt[i] = nxt[i] - c * r
        coeffs = nxt
    return UnivariatePolynomial(tuple(coeffs))


def residual_ok(p, sol):
    return p(sol.root).valuation_lower_bound() >= sol.certified_precision


# -- Newton polygon -----------------------------------------------------------


@pytest.mark.parametrize("poly, expected", [
    (P("-t", 0, 1), [(Fraction(1, 2), 2)]),
    (P("-t^3", 1), [(3, 1)]),
    (P("-1 - t", 0, 1), [(0, 2)]),
    (P("t^2", "t", 1), [(1, 2)]),
    (P("t^3", 1, 1), [(0, 1), (3, 1)]),
])
def test_newton_polygon_examples(poly, expected):
    assert newton_polygon(poly) == expected


def test_newton_polygon_needs_determinate_coefficients():
    with pytest.raises(IndeterminateValuation):
        newton_polygon(P("O(t^3)", 1, 1))


@settings(max_examples=200)
@given(st.lists(st.one_of(st.none(), series(exact=True, max_terms=2)), min_size=2, max_size=7))
def test_newton_polygon_matches_brute_force(coeffs):
    coeffs = [PuiseuxSeries.zero() if c is None else c for c in coeffs]
    coeffs[-1] = coeffs[-1] if not coeffs[-1].is_zero() else PuiseuxSeries.one()
    p = UnivariatePolynomial(tuple(coeffs))
    pts = [(i, c.valuation()) for i, c in enumerate(p.coefficients) if not c.is_zero()]
    assert newton_polygon(p) == brute_polygon(pts)
    assert sum(n for _, n in newton_polygon(p)) == max(i for i, _ in pts) - min(i for i, _ in pts)


# -- rational residue roots ---------------------------------------------------


def test_rational_roots_with_multiplicity():
    # (y - 1/2)^2 (y + 3)(y^2 + 1)
    found, rest = rational_roots(_expand([Fraction(1, 2), Fraction(1, 2), Fraction(-3)], [1, 0, 1]))
    assert sorted(found) == [(Fraction(-3), 1), (Fraction(1, 2), 2)]
    assert [Fraction(c) / rest[-1] for c in rest] == [1, 0, 1]


def _expand(rs, base):
    coeffs = [Fraction(c) for c in base]
    for r in rs:
        nxt = [Fraction(0)] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i + 1] += c
            nxt[i] -= c * r
        coeffs = nxt
    return coeffs


@settings(max_examples=200)
@given(st.lists(st.fractions(-6, 6, max_denominator=4).filter(bool), max_size=4),
       st.sampled_from([[1], [2, 0, 1], [-2, 0, 1], [1, 1, 1]]))
def test_rational_roots_recovers_planted(rs, base):
    found, rest = rational_roots(_expand(rs, base))
    expected = {}
    for r in rs:
        expected[r] = expected.get(r, 0) + 1
    assert dict(found) == expected
    assert len(rest) == len(base)


# -- roots --------------------------------------------------------------------


def test_sqrt_one_plus_t():
    sols = roots(P("-1 - t", 0, 1), 3)
    assert not sols.unresolved
    got = sorted((s.root for s in sols), key=lambda r: r.leading_coefficient)
    expected = S("1 + 1/2*t - 1/8*t^2")
    assert got[1].agrees_with(expected, upto=3)
    assert got[0].agrees_with(-expected, upto=3)
    assert all(s.multiplicity == 1 and s.certified_precision >= 3 for s in sols)


def test_division_polynomial_of_inflection_family_has_root_zero():
    psi = P(0, "12*t^2", "-12*t", 4, 3)
    sols = roots(psi, 10)
    assert any(s.root.is_zero() for s in sols)
    assert psi(PuiseuxSeries.zero()).is_zero()
    for s in sols:
        assert residual_ok(psi, s)
    assert sum(s.multiplicity for s in sols) + sum(b.degree for b in sols.unresolved) == 4


def test_linear():
    (sol,) = roots(P(-7, 1), 5)
    assert sol.root == S("7 + O(t^5)")
    assert sol.multiplicity == 1


def test_ramified_roots():
    sols = roots(P("-t", 0, 1), 4)
    assert sorted(str(s.root) for s in sols) == ["-t^(1/2) + O(t^4)", "t^(1/2) + O(t^4)"]


def test_irrational_residue_is_reported_not_dropped():
    sols = roots(P(-2, 0, 1), 4)
    assert len(sols) == 0
    (branch,) = sols.unresolved
    assert branch.degree == 2
    assert branch.valuation == 0
    # y^3 - 2y: one rational root 0, an irrational pair
    sols = roots(P(0, -2, 0, 1), 4)
    assert [s.root for s in sols] == [PuiseuxSeries.zero()]
    assert sols.unresolved[0].degree == 2


def test_irrational_branch_after_rational_prefix():
    # roots 1 +- sqrt(2) t: the prefix 1 is known, the next term is not rational
    p = P(S("1 - 2*t^2"), -2, 1)
    sols = roots(p, 4)
    assert len(sols) == 0
    (branch,) = sols.unresolved
    assert branch.prefix == S("1")
    assert branch.valuation == 1
    assert branch.degree == 2


def test_multiple_root():
    p = planted([S("1 + t"), S("1 + t"), S("t^2")])
    sols = roots(p, 6)
    mults = sorted(s.multiplicity for s in sols)
    assert sum(mults) == 3
    assert any(s.root.agrees_with(S("1 + t"), upto=3) for s in sols)
    for s in sols:
        assert residual_ok(p, s)


def test_insufficient_coefficient_precision():
    with pytest.raises(PrecisionExhausted):
        roots(P(S("-t + O(t^2)"), S("O(t)"), 1), 8)


def test_degree_zero_rejected():
    with pytest.raises(ValueError):
        roots(P(5), 3)


def test_polynomial_helpers():
    p = P(1, 2, 3)
    assert p.degree == 2
    assert p(S("t")) == S("1 + 2*t + 3*t^2")
    assert p.derivative().coefficients == (S("2"), S("6"))
    shifted = p.taylor_shift(1)
    assert shifted(S("t")) == p(S("1 + t"))


# -- properties ---------------------------------------------------------------

planted_roots = st.lists(
    st.builds(
        lambda c, e, tail: PuiseuxSeries({e: c, **{e + k + 1: v for k, v in tail}}),
        coefficients,
        st.sampled_from([Fraction(0), Fraction(1), Fraction(1, 2), Fraction(2), Fraction(-1), Fraction(3, 2)]),
        st.lists(st.tuples(st.integers(0, 2), coefficients), max_size=2),
    ),
    min_size=1,
    max_size=3,
)


@settings(max_examples=200)
@given(planted_roots, st.sampled_from([1, -2, Fraction(1, 3)]), st.sampled_from([4, 6]))
def test_planted_roots_are_found_and_certified(rs, scale, target):
    p = planted(rs, scale)
    sols = roots(p, target)
    for s in sols:
        assert residual_ok(p, s)
        assert s.certified_precision >= target
    total = sum(s.multiplicity for s in sols) + sum(b.degree for b in sols.unresolved)
    assert total == p.degree
    assert not sols.unresolved
    for r in rs:
        # each planted root is matched by a returned root agreeing to its own accuracy
        assert any(s.root.agrees_with(r, upto=min(r.valuation() + 1, s.root.precision)) for s in sols)


@settings(max_examples=200)
@given(st.lists(series(exact=True, max_terms=2, lo=0, hi=4), min_size=2, max_size=4))
def test_random_polynomials_certify_or_report(coeffs):
    p = UnivariatePolynomial(tuple(coeffs))
    if p.degree < 1:
        return
    sols = roots(p, 3)
    for s in sols:
        assert residual_ok(p, s)
    total = sum(s.multiplicity for s in sols) + sum(b.degree for b in sols.unresolved)
    assert total == p.degree


@settings(max_examples=200)
@given(planted_roots, series(exact=True, max_terms=3))
def test_scalar_invariance(rs, scalar):
    p = planted(rs)
    a = roots(p, 4)
    b = roots(p.scale(scalar), 4)
    assert len(a.unresolved) == len(b.unresolved)
    key = lambda s: (s.multiplicity, str(s.root.truncate(4)))  # noqa: E731
    assert sorted(map(key, a)) == sorted(map(key, b))
