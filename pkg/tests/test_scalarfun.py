"""Function catalog, reflection/conjugate transforms, and the mean-inequality
and operator-monotonicity checks.

The independent oracle for every conjugate value is scipy's bounded Brent
minimizer; the package's own golden-section path never feeds the expected
values here.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import optimize

from tracelab import scalarfun
from tracelab.scalarfun import (GRID, ScalarFunction, breve, check,
                                check_func_eq1, legendre_numeric,
                                loewner_monotonicity_oracle, parse_tag, tilde)


def conjugate_oracle(fn, t):
    """inf_x (t x - fn(x)) by scipy bounded minimization in log space."""
    res = optimize.minimize_scalar(
        lambda u: t * math.exp(u) - fn(math.exp(u)),
        bounds=(math.log(1e-8), math.log(1e8)), method="bounded",
        options={"xatol": 1e-12})
    return res.fun


CATALOG = [
    ScalarFunction.log(),
    ScalarFunction.power(0.25),
    ScalarFunction.power(0.5),
    ScalarFunction.power(1),
    ScalarFunction.power(2),
    ScalarFunction.negpower(0.25),
    ScalarFunction.negpower(0.5),
    ScalarFunction.negpower(1),
    ScalarFunction.invpower(0.5),
    ScalarFunction.invpower(1),
    ScalarFunction.affine(0.5, 2.0),
    ScalarFunction.loewner(0.5, 0.0, [(1.0, 0.5)]),
    ScalarFunction.loewner(-0.5, 0.0, [(1.0, 0.5)]).negate(),
]


class TestEval:
    def test_log_at_one(self):
        assert ScalarFunction.log()(1.0) == 0.0

    def test_negpower_half_at_four(self):
        assert ScalarFunction.negpower(0.5)(4.0) == -0.5

    def test_loewner_single_atom(self):
        assert ScalarFunction.loewner(0, 0, [(1.0, 1.0)])(1.0) == 0.0

    def test_loewner_is_x_over_x_plus_one(self):
        fn = ScalarFunction.loewner(0.5, 0.0, [(1.0, 0.5)])
        for x in (0.1, 1.0, 3.0, 42.0):
            assert abs(fn(x) - x / (x + 1.0)) < 1e-14

    def test_negated_loewner_is_inv_shift(self):
        fn = ScalarFunction.loewner(-0.5, 0.0, [(1.0, 0.5)]).negate()
        for x in (0.1, 1.0, 3.0, 42.0):
            assert abs(fn(x) - 1.0 / (x + 1.0)) < 1e-14

    def test_domain_error(self):
        with pytest.raises(ValueError):
            ScalarFunction.log()(-1.0)

    def test_invalid_parameters(self):
        with pytest.raises(ValueError):
            ScalarFunction.power(-1)
        with pytest.raises(ValueError):
            ScalarFunction.affine(0.0, -1.0)
        with pytest.raises(ValueError):
            ScalarFunction.loewner(0, 0, [(1.0, -2.0)])


class TestTilde:
    def test_log_fixed_point(self):
        assert abs(tilde(ScalarFunction.log())(math.e) - 1.0) < 1e-15

    def test_power_swaps_with_negpower(self):
        assert tilde(ScalarFunction.power(2)) == ScalarFunction.negpower(2)
        assert tilde(ScalarFunction.negpower(0.3)) == ScalarFunction.power(0.3)

    @pytest.mark.parametrize("fn", CATALOG, ids=lambda f: f.label)
    def test_involution_on_grid(self, fn):
        twice = tilde(tilde(fn))
        np.testing.assert_allclose(twice.eval_array(GRID), fn.eval_array(GRID),
                                   rtol=1e-12, atol=1e-12)

    def test_pointwise_definition(self):
        for fn in CATALOG:
            for x in (0.3, 1.0, 7.0):
                assert abs(tilde(fn)(x) - (-fn(1.0 / x))) < 1e-12

    def test_loewner_goes_numeric(self):
        assert tilde(ScalarFunction.loewner(0.5, 0.0, [(1.0, 0.5)])).kind == "numeric"


class TestLegendreNumeric:
    def test_log_at_one(self):
        res = legendre_numeric(ScalarFunction.log(), 1.0)
        assert abs(res.value - 1.0) < 1e-10
        assert not res.boundary

    def test_power_half_closed_form(self):
        # conjugate of sqrt(x) is -1/(4t)
        for t in GRID:
            res = legendre_numeric(ScalarFunction.power(0.5), float(t))
            assert abs(res.value - (-1.0 / (4.0 * t))) < 1e-10 * (1 + 1 / (4 * t))

    def test_identity_function_boundary_flag(self):
        res = legendre_numeric(ScalarFunction.affine(0.0, 1.0), 0.5)
        assert res.boundary
        assert res.value < -1e6  # unbounded below, truncated at the domain edge

    def test_rejects_convex_member(self):
        with pytest.raises(ValueError):
            legendre_numeric(ScalarFunction.power(2), 1.0)

    @pytest.mark.parametrize("fn", [ScalarFunction.log(), ScalarFunction.power(0.5),
                                    ScalarFunction.negpower(0.5),
                                    ScalarFunction.loewner(0.5, 0.0, [(1.0, 0.5)])],
                             ids=lambda f: f.label)
    def test_against_scipy_oracle(self, fn):
        for t in (0.1, 0.7, 1.0, 3.3, 10.0):
            ours = legendre_numeric(fn, t).value
            ref = conjugate_oracle(fn, t)
            assert abs(ours - ref) <= 1e-8 * (1 + abs(ref))


# closed forms computed independently from the published displays
def paper_check(fn, t):
    if fn.kind == "log":
        return 1.0 + math.log(t)
    if fn.kind == "power":
        r = fn.r
        return r ** (r / (1 - r)) * (r - 1) * t ** (r / (r - 1))
    if fn.kind == "negpower":
        r = fn.r
        return r ** (1 / (r + 1)) * (1 + 1 / r) * t ** (r / (r + 1))
    raise AssertionError


def paper_breve(fn, t):
    if fn.kind == "log":
        return 1.0 + math.log(t)
    if fn.kind == "power":
        r = fn.r
        return r ** (1 / (r + 1)) * (1 + 1 / r) * t ** (r / (r + 1))
    if fn.kind == "negpower":
        r = fn.r
        return r ** (r / (1 - r)) * (r - 1) * t ** (r / (r - 1))
    raise AssertionError


CHECK_MEMBERS = [ScalarFunction.log(), ScalarFunction.power(0.25), ScalarFunction.power(0.5),
                 ScalarFunction.negpower(0.25), ScalarFunction.negpower(0.5)]
BREVE_MEMBERS = [ScalarFunction.log(), ScalarFunction.power(0.25), ScalarFunction.power(0.5),
                 ScalarFunction.power(1), ScalarFunction.power(2),
                 ScalarFunction.negpower(0.25), ScalarFunction.negpower(0.5)]


class TestConjugateClosedForms:
    def test_breve_log_at_one(self):
        assert abs(breve(ScalarFunction.log())(1.0) - 1.0) < 1e-14

    def test_breve_power_one_at_four(self):
        assert abs(breve(ScalarFunction.power(1))(4.0) - 4.0) < 1e-12

    @pytest.mark.parametrize("fn", CHECK_MEMBERS, ids=lambda f: f.label)
    def test_check_matches_published_display(self, fn):
        tf = check(fn)
        assert tf.closed_form is not None
        for t in GRID:
            want = paper_check(fn, float(t))
            assert abs(tf(float(t)) - want) <= 1e-12 * (1 + abs(want))

    @pytest.mark.parametrize("fn", BREVE_MEMBERS, ids=lambda f: f.label)
    def test_breve_matches_published_display(self, fn):
        tf = breve(fn)
        assert tf.closed_form is not None
        for t in GRID:
            want = paper_breve(fn, float(t))
            assert abs(tf(float(t)) - want) <= 1e-12 * (1 + abs(want))

    @pytest.mark.parametrize("fn", BREVE_MEMBERS, ids=lambda f: f.label)
    def test_breve_closed_vs_numeric_on_grid(self, fn):
        tf = breve(fn)
        for t in GRID:
            closed = tf.closed_form(float(t))
            numeric = tf.numeric(float(t))
            assert abs(closed - numeric) <= 1e-8 * (1 + abs(closed))

    def test_breve_requires_vanishing_product(self):
        with pytest.raises(ValueError):
            breve(ScalarFunction.negpower(1.5))  # x*h(x) -> -inf at 0

    def test_conjugate_is_concave_nondecreasing_on_grid(self):
        for fn in CHECK_MEMBERS:
            vals = np.array([legendre_numeric(fn, float(t)).value for t in GRID])
            assert np.all(np.diff(vals) >= -1e-10)
            mids = np.array([legendre_numeric(fn, float((GRID[i] + GRID[i + 2]) / 2)).value
                             for i in range(len(GRID) - 2)])
            assert np.all(mids - (vals[:-2] + vals[2:]) / 2 >= -1e-9)


class TestMeanInequalityChain:
    def test_log_passes(self):
        assert check_func_eq1(ScalarFunction.log(), 2000, 0).passed

    def test_square_fails_midpoint_inequality(self):
        rep = check_func_eq1(ScalarFunction.power(2), 2000, 0)
        assert not rep.passed
        # explicit witness x=1, y=3: h(2)=4 < (h(1)+h(3))/2 = 5
        h = ScalarFunction.power(2)
        assert h(2.0) - (h(1.0) + h(3.0)) / 2 == -1.0

    def test_loewner_atom_passes(self):
        assert check_func_eq1(ScalarFunction.loewner(0, 0, [(1.0, 1.0)]), 2000, 0).passed

    @pytest.mark.parametrize("r", [0.25, 0.5])
    def test_breve_of_negpower_in_range_passes(self, r):
        hb = breve(ScalarFunction.negpower(r)).as_scalar_function()
        assert check_func_eq1(hb, 2000, 1).passed

    @pytest.mark.parametrize("r", [0.6, 0.75])
    def test_breve_of_negpower_out_of_range_fails(self, r):
        hb = breve(ScalarFunction.negpower(r)).as_scalar_function()
        assert not check_func_eq1(hb, 2000, 1).passed

    def test_breve_of_negpower_one_undefined(self):
        # at r = 1 the vanishing-product hypothesis itself fails
        with pytest.raises(ValueError):
            breve(ScalarFunction.negpower(1.0))


class TestLoewnerOracle:
    def test_log_is_operator_monotone(self):
        assert loewner_monotonicity_oracle(ScalarFunction.log(), [0.5, 1, 2, 4])

    def test_square_is_not(self):
        assert not loewner_monotonicity_oracle(ScalarFunction.power(2), [0.5, 1, 2])

    def test_identity_function(self):
        assert loewner_monotonicity_oracle(ScalarFunction.affine(0, 1), [0.3, 1.7, 9.1])

    def test_rejects_coincident_points(self):
        with pytest.raises(ValueError):
            loewner_monotonicity_oracle(ScalarFunction.log(), [1.0, 1.0, 2.0])

    def test_rejects_too_many_points(self):
        with pytest.raises(ValueError):
            loewner_monotonicity_oracle(ScalarFunction.log(), list(range(1, 14)))

    def test_operator_monotone_implies_eq1(self):
        # certified on 3 independent point sets -> the inequality chain holds
        point_sets = ([0.5, 1, 2, 4], [0.1, 0.9, 3, 7.5, 20], [0.02, 0.2, 1.3, 11, 80])
        members = [ScalarFunction.log(), ScalarFunction.power(0.5),
                   ScalarFunction.negpower(1), ScalarFunction.loewner(0.5, 0, [(1, 0.5)]),
                   ScalarFunction.loewner(1.0, 0.2, [(2.0, 1.0), (0.5, 0.3)])]
        for fn in members:
            assert all(loewner_monotonicity_oracle(fn, p) for p in point_sets)
            assert check_func_eq1(fn, 2000, 3).passed


class TestTags:
    @pytest.mark.parametrize("tag", ["log", "power:0.5", "negpower:0.25", "invpower:1",
                                     "affine:0,1", "loewner:0.5,0,[(1,0.5)]",
                                     "neg:loewner:-0.5,0,[(1,0.5)]", "neg:log"])
    def test_round_trip_through_label(self, tag):
        fn = parse_tag(tag)
        assert parse_tag(fn.label) == fn

    def test_invpower_distinct_from_negpower(self):
        assert parse_tag("invpower:1")(2.0) == 0.5
        assert parse_tag("negpower:1")(2.0) == -0.5

    @pytest.mark.parametrize("bad", ["power:-1", "zeta", "loewner:1", "affine:1",
                                     "power:", "neg:"])
    def test_rejects_bad_tags(self, bad):
        with pytest.raises(ValueError):
            parse_tag(bad)


class TestClassification:
    def test_decreasing_catalog(self):
        assert ScalarFunction.invpower(1).positive_operator_monotone_decreasing
        assert ScalarFunction.invpower(0.5).positive_operator_monotone_decreasing
        assert not ScalarFunction.invpower(2).positive_operator_monotone_decreasing
        inv_shift = parse_tag("neg:loewner:-0.5,0,[(1,0.5)]")
        assert inv_shift.positive_operator_monotone_decreasing

    def test_positive_monotone_catalog(self):
        assert ScalarFunction.power(0.5).positive_operator_monotone
        assert not ScalarFunction.power(2).positive_operator_monotone
        assert parse_tag("loewner:0.5,0,[(1,0.5)]").positive_operator_monotone

    def test_limits(self):
        assert ScalarFunction.log().prop("ratio_zero")
        assert ScalarFunction.power(1).prop("ratio_zero") is False
        assert ScalarFunction.negpower(0.5).prop("prod_zero")
        assert ScalarFunction.negpower(1).prop("prod_zero") is False


@settings(max_examples=40, deadline=None)
@given(r=st.floats(0.05, 1.0))
def test_power_in_monotone_range_passes_oracle(r):
    assert loewner_monotonicity_oracle(ScalarFunction.power(r), [0.5, 1.0, 2.0, 4.0],
                                       tol=1e-8)


@settings(max_examples=40, deadline=None)
@given(r=st.floats(0.05, 3.0), x=st.floats(0.01, 100.0))
def test_tilde_involution_pointwise(r, x):
    fn = ScalarFunction.negpower(r)
    assert abs(tilde(tilde(fn))(x) - fn(x)) <= 1e-12 * (1 + abs(fn(x)))
