"""Exact tropical geometry of elliptic curves over Puiseux series."""

from tropell.kernels import BACKEND
from tropell.puiseux import INF, T, PuiseuxSeries, invert, precision, residue, sqrt, valuation
from tropell.tropical import LaurentPolynomial, TropicalPolynomial, tropicalize
from tropell.plane_curve import contains_point, curve_of, dual_subdivision, find_cycle
from tropell.newton_puiseux import UnivariatePolynomial, newton_polygon, roots
from tropell.weierstrass import (
    CoordinateChange,
    ProjectivePoint,
    WeierstrassModel,
    apply_change,
    classify_reduction,
    invariants,
    is_minimal,
    minimalize,
    reduce_point,
)
from tropell.faithful import FamilyForm, certify, certify_family, sample, sample_check

__version__ = "0.1.0"
