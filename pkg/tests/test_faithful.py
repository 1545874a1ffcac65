from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropell.errors import (
    DiscriminantNotZero,
    NoRationalBranch,
    NotMultiplicative,
    StageError,
)
from tropell.faithful import (
    FamilyForm,
    certify,
    certify_family,
    division_polynomial_3,
    embedding_coordinates,
    embedding_equation,
    find_three_torsion,
    sample,
    shift_to_family,
)
from tropell.literals import parse_series
from tropell.newton_puiseux import UnivariatePolynomial, roots
from tropell.plane_curve import contains_point
from tropell.puiseux import PuiseuxSeries, sqrt
from tropell.tropical import tropicalize
from tropell.weierstrass import (
    CoordinateChange,
    ProjectivePoint,
    WeierstrassModel,
    apply_change,
    invariants,
    reduce_point,
)

S = parse_series
W = WeierstrassModel.parse


def on_curve(model, P):
    return not model.homogeneous(*P.coordinates).has_terms()


def triple_point_certificate(fam):
    """(y - a'(x - b))(y + a'(x - b)) - x^3 vanishes identically on the family model."""
    # as polynomials in x: y^2 - a'^2 (x - b)^2 = x^3 + a (x - b)^2 - a'^2 (x - b)^2
    return not (fam.a_sqrt * fam.a_sqrt - fam.a).has_terms()


# -- family form --------------------------------------------------------------


def test_family_form_validation():
    fam = FamilyForm.of(S("4"), S("t^3"))
    assert fam.a_sqrt == S("2")
    assert fam.point == ProjectivePoint.affine(0, S("2*t^3"))
    with pytest.raises(ValueError):
        FamilyForm.of(S("t"), S("t"))
    with pytest.raises(ValueError):
        FamilyForm.of(S("1"), S("1 + t"))


def test_family_quadratic_part_is_a_square():
    for a, b in [("1", "t"), ("4", "t^3"), ("9/4 + t", "-t^(1/2)")]:
        M = WeierstrassModel.family(S(a), S(b))
        assert M.a4 * M.a4 - 4 * M.a2 * M.a6 == PuiseuxSeries.zero()


@pytest.mark.parametrize("k", [1, 2, 3])
def test_family_j_valuation(k):
    fam = FamilyForm.of(S("1"), S(f"t^{k}"))
    assert fam.j_valuation() == -3 * k
    assert invariants(fam.model).v_j == -3 * k


# -- torsion ------------------------------------------------------------------


@pytest.mark.parametrize("literal, expected", [
    ("[0,1,0,-2*t,t^2]", ("0", "t")),
    ("[0,1,0,-2*t^2,t^4]", ("0", "t^2")),
    ("[0,4,0,-8*t^3,4*t^6]", ("0", "2*t^3")),
])
def test_three_torsion_examples(literal, expected):
    model = W(literal)
    P = find_three_torsion(model)
    assert (P.X, P.Y, P.Z) == (S(expected[0]), S(expected[1]), S("1"))
    assert division_polynomial_3(model)(P.X).is_zero()
    assert on_curve(model, P)
    assert reduce_point(P, model) == (0, 0, 1)


def test_division_polynomial_coefficients():
    psi = division_polynomial_3(W("[0,1,0,-2*t,t^2]"))
    assert psi.coefficients == (S("0"), S("12*t^2"), S("-12*t"), S("4"), S("3"))


def test_three_torsion_requires_multiplicative_reduction():
    with pytest.raises(NotMultiplicative):
        find_three_torsion(W("[0,0,0,1,1]"))


def test_three_torsion_needs_rational_branch():
    # y^2 = x^3 - 3x + 2 + t has its node at x = 1 but the torsion abscissae are irrational
    with pytest.raises(NoRationalBranch):
        find_three_torsion(W("[0,0,0,-3,2+t]"))


def test_three_torsion_in_moved_coordinates():
    fam_model = W("[0,1,0,-2*t,t^2]")
    change = CoordinateChange(1, "-1 + t", 2, "t^2")
    moved = apply_change(fam_model, change)
    P = find_three_torsion(moved)
    assert on_curve(moved, P)
    fam, back = shift_to_family(moved, P)
    assert fam.b.agrees_with(S("t"), upto=20) and fam.a.agrees_with(S("1"), upto=20)
    image = apply_change(moved, back)
    assert all(x.agrees_with(y, upto=20) for x, y in zip(image.coefficients, fam.model.coefficients))


# -- shift --------------------------------------------------------------------


def test_shift_examples():
    fam, change = shift_to_family(W("[0,1,0,-2*t,t^2]"), ProjectivePoint.affine(0, "t"))
    assert (fam.a, fam.a_sqrt, fam.b) == (S("1"), S("1"), S("t"))
    assert change.is_identity
    fam, _ = shift_to_family(W("[0,4,0,-8*t^3,4*t^6]"), ProjectivePoint.affine(0, "2*t^3"))
    assert (fam.a, fam.a_sqrt, fam.b) == (S("4"), S("2"), S("t^3"))


def test_shift_moves_x_to_zero():
    fam_model = W("[0,1,0,-2*t,t^2]")
    moved = apply_change(fam_model, CoordinateChange(1, "-2", 0, 0))  # x' = x + 2
    fam, change = shift_to_family(moved, ProjectivePoint.affine(2, "t"))
    assert change.r == S("2")
    assert fam.b == S("t")


def test_shift_picks_the_sign():
    fam, change = shift_to_family(W("[0,1,0,-2*t,t^2]"), ProjectivePoint.affine(0, "-t"))
    assert change.u == S("-1")
    assert fam.b == S("t")


def test_shift_rejects_points_that_are_not_inflections():
    model = W("[0,1,0,-2*t,t^2]")
    P = ProjectivePoint.affine(3, sqrt(-model.equation(S("3"), PuiseuxSeries.zero())))
    with pytest.raises(DiscriminantNotZero):
        shift_to_family(model, P)


# -- embedding ----------------------------------------------------------------


def test_embedding_equation_terms():
    eq = embedding_equation(FamilyForm.of(S("1"), S("t^2")))
    assert eq.variables == ("f", "g")
    assert eq.terms == {(0, 0): S("-2*t^2"), (1, 1): S("2"), (1, 2): S("1"), (2, 1): S("-1")}
    assert tropicalize(eq).terms == {(0, 0): 2, (1, 1): 0, (1, 2): 0, (2, 1): 0}
    eq = embedding_equation(FamilyForm.of(S("4"), S("t^3")))
    assert eq.terms[(1, 1)] == S("4")
    assert eq.terms[(0, 0)] == S("-4*t^3")
    assert tropicalize(eq).terms[(0, 0)] == 3


@pytest.mark.parametrize("a, b, x", [("1", "t", "3 + t"), ("4", "t^3", "-3 + t^2"), ("1", "t^2", "t^(1/2)")])
def test_embedding_equation_vanishes_on_curve_points(a, b, x):
    fam = FamilyForm.of(S(a), S(b))
    x = S(x)
    y = sqrt(-fam.model.equation(x, PuiseuxSeries.zero()))
    assert not fam.model.equation(x, y).has_terms()
    f, g = embedding_coordinates(fam, x, y)
    value = embedding_equation(fam).evaluate([f, g])
    assert not value.has_terms()
    # the sign-swapped variant does not vanish
    other = f * f * g + 2 * fam.a_sqrt * f * g - f * g * g - 2 * fam.a_sqrt * fam.b
    assert other.has_terms()


# -- certify ------------------------------------------------------------------


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_certify_general_mode(k):
    report = certify(WeierstrassModel.family(S("1"), S(f"t^{k}")))
    assert report.verdict
    assert report.cycle_length == 3 * k == report.minus_v_j == report.three_v_b
    assert all(report.checks.values())
    assert report.curve.subdivision.is_unimodular()


def test_certify_general_model():
    model = W("[0,1,0,-2*t,t^2]")
    report = certify(model)
    assert report.verdict and report.cycle_length == 3
    assert report.to_json()["verdict"] is True


def test_certify_moved_model():
    moved = apply_change(W("[0,1,0,-2*t^2,t^4]"), CoordinateChange(1, "1 - t", "1", "2*t"))
    report = certify(moved)
    assert report.verdict
    assert report.cycle_length == 6


def test_certify_non_minimal_input():
    # scale the family model by u = 1/t: not minimal, same j
    big = apply_change(W("[0,1,0,-2*t,t^2]"), CoordinateChange("t^-1", 0, 0, 0))
    assert not big.a4.valuation() < 0
    report = certify(big)
    assert report.verdict and report.cycle_length == 3


def test_certify_family_mode():
    report = certify_family(S("4"), S("t^3"))
    assert report.verdict
    assert report.cycle_length == 9
    assert report.family.provenance == "user"


def test_certify_good_reduction():
    with pytest.raises(NotMultiplicative) as info:
        certify(W("[0,0,0,1,1]"))
    assert info.value.reduction == "good"


def test_stage_labels():
    with pytest.raises(StageError) as info:
        certify(W("[0,0,0,-3,2+t]"))
    assert info.value.stage == "find_three_torsion"
    assert isinstance(info.value.cause, NoRationalBranch)
    with pytest.raises(StageError) as info:
        certify_family(S("t"), S("t"))
    assert info.value.stage == "family"


# -- sampling -----------------------------------------------------------------


def test_sample_at_f_equals_t_is_irrational():
    report = certify_family(S("1"), S("t"))
    eq = report.equation
    # t g^2 + (2t - t^2) g - 2t = 0, residue g^2 + 2g - 2 with roots -1 +- sqrt(3)
    coeffs = [PuiseuxSeries.zero()] * 3
    for (ef, eg), c in eq.terms.items():
        coeffs[eg] = coeffs[eg] + c * S("t") ** ef
    sols = roots(UnivariatePolynomial(tuple(coeffs)), 6)
    assert len(sols) == 0
    (branch,) = sols.unresolved
    assert branch.valuation == 0 and branch.degree == 2
    assert contains_point(report.curve, (1, 0))


def test_sample_far_out_lands_on_a_ray():
    report = certify_family(S("1"), S("t"))
    res = sample(report, 6, rng_seed=3, window=(20, 20))
    for s in res.samples:
        if s.point is not None:
            assert s.on_curve
            assert any(contains_point(report.curve, s.point) for _ in [0])


def test_zero_samples_are_vacuous():
    report = certify_family(S("1"), S("t"))
    res = sample(report, 0)
    assert res.ok and res.checked == 0 and res.to_json()["samples"] == 0


def test_sampling_is_seeded():
    report = certify_family(S("1"), S("t^2"))
    assert sample(report, 10, 5).to_json() == sample(report, 10, 5).to_json()


@settings(max_examples=30)
@given(st.integers(1, 4), st.integers(0, 10_000))
def test_sampled_points_lie_on_the_curve(k, seed):
    report = certify_family(S("1"), S(f"t^{k}"))
    res = sample(report, 8, seed)
    assert res.ok
    for s in res.samples:
        if s.point is not None:
            assert contains_point(report.curve, s.point)


@settings(max_examples=50)
@given(st.sampled_from(["1", "4", "1/4", "9", "1 + t", "4 - t^2"]),
       st.integers(1, 6), st.sampled_from([1, 2, 3]), st.sampled_from(["1", "-3", "1/2"]))
def test_end_to_end_identity(a, n, d, c):
    b = PuiseuxSeries.monomial(Fraction(c), Fraction(n, d))
    report = certify_family(S(a), b)
    vb = Fraction(n, d)
    assert report.cycle_length == 3 * vb == report.minus_v_j == report.three_v_b
    assert report.verdict
    assert triple_point_certificate(report.family)
