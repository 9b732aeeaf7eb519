"""Tests for the polylogarithm and hypergeometric series."""

import math

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from schmidtbec.core.errors import DomainError
from schmidtbec.physics.special import (
    hypergeometric_pFq,
    hypergeometric_terms,
    pochhammer,
    polylog,
    polylog_terms,
)


class TestPolylog:

    def test_dilog_quarter(self):
        result = polylog(2, 0.25)
        assert result.value == pytest.approx(0.2676526390827326, rel=1e-13)
        assert result.truncation_bound < 1e-13
        assert result.terms_used > 10

    def test_order_one_is_log(self):
        assert polylog(1, 0.5).value == pytest.approx(math.log(2.0), rel=1e-13)

    def test_negative_argument(self):
        assert polylog(2, -0.5).value == pytest.approx(float(mpmath.polylog(2, -0.5)), rel=1e-13)

    def test_zero_argument(self):
        result = polylog(3, 0.0)
        assert result.value == 0.0
        assert result.terms_used == 0

    @pytest.mark.parametrize("z", [1.0, -1.0, 1.5])
    def test_outside_unit_disc(self, z):
        with pytest.raises(DomainError):
            polylog(2, z)

    def test_order_below_one(self):
        with pytest.raises(DomainError):
            polylog(0.5, 0.2)

    @settings(max_examples=50, deadline=None)
    @given(s=st.integers(1, 5), z=st.floats(-0.9, 0.9))
    def test_matches_mpmath(self, s, z):
        expected = float(mpmath.polylog(s, z))
        assert polylog(s, z).value == pytest.approx(expected, rel=1e-11, abs=1e-300)

    def test_float_conversion(self):
        assert float(polylog(2, 0.25)) == polylog(2, 0.25).value


class TestPochhammer:

    @pytest.mark.parametrize("alpha, n, expected", [
        (1.0, 0, 1.0),
        (1.0, 5, 120.0),
        (0.5, 3, 0.5 * 1.5 * 2.5),
        (-2.0, 3, 0.0),
    ])
    def test_values(self, alpha, n, expected):
        assert pochhammer(alpha, n) == pytest.approx(expected)


class TestHypergeometric:

    def test_schmidt_4f3_value(self):
        value = hypergeometric_pFq([1, 1, 1, 1.5], [2, 2, 2], 0.25).value
        expected = float(mpmath.hyper([1, 1, 1, 1.5], [2, 2, 2], 0.25))
        assert value == pytest.approx(expected, rel=1e-13)

    def test_exponential(self):
        assert hypergeometric_pFq([], [], 1.3).value == pytest.approx(math.exp(1.3), rel=1e-13)

    def test_binomial(self):
        assert hypergeometric_pFq([2.5], [], 0.3).value == pytest.approx(0.7 ** -2.5, rel=1e-13)

    def test_gauss_log(self):
        z = 0.6
        expected = -math.log(1 - z) / z
        assert hypergeometric_pFq([1, 1], [2], z).value == pytest.approx(expected, rel=1e-12)

    def test_terminating_series(self):
        # 2F1(-2, b; c; z) is a quadratic polynomial
        result = hypergeometric_pFq([-2, 3], [4], 2.0)
        expected = 1 + (-2 * 3 / 4) * 2.0 + (-2 * -1 * 3 * 4) / (4 * 5 * 2) * 4.0
        assert result.value == pytest.approx(expected)
        assert result.truncation_bound == 0.0

    def test_nonpositive_integer_lower_parameter(self):
        with pytest.raises(DomainError):
            hypergeometric_pFq([1], [-2], 0.1)

    def test_outside_radius_of_convergence(self):
        with pytest.raises(DomainError):
            hypergeometric_pFq([1, 1], [2], 1.0)

    def test_divergent_shape_rejected(self):
        with pytest.raises(DomainError):
            hypergeometric_pFq([1, 1, 1], [2], 0.1)

    @settings(max_examples=40, deadline=None)
    @given(a=st.floats(0.1, 3.0), b=st.floats(0.1, 3.0), c=st.floats(0.5, 4.0),
           z=st.floats(-0.8, 0.8))
    def test_2f1_matches_mpmath(self, a, b, c, z):
        expected = float(mpmath.hyp2f1(a, b, c, z))
        assert hypergeometric_pFq([a, b], [c], z).value == pytest.approx(expected, rel=1e-10)


class TestSummationOrder:
    """Summing the same terms forward and backward agrees to rounding."""

    def test_polylog_terms(self):
        terms = polylog_terms(2, 0.25, 40)
        forward = math.fsum(terms)
        assert abs(sum(terms) - sum(terms[::-1])) <= 1e-15 * forward
        assert forward == pytest.approx(polylog(2, 0.25).value, rel=1e-14)

    def test_hypergeometric_terms(self):
        terms = hypergeometric_terms([1, 1, 1, 1.5], [2, 2, 2], 0.25, 40)
        assert terms[0] == 1.0
        assert abs(sum(terms) - sum(terms[::-1])) <= 1e-15 * math.fsum(terms)

    def test_terms_reject_bad_domain(self):
        with pytest.raises(DomainError):
            polylog_terms(2, 1.0, 5)
