"""Tests for polyhomogeneous symbols, ellipticity and symbol derivatives."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from polydecay.errors import PreconditionError
from polydecay.symbols import (
    HomogeneousTerm,
    PolyhomogeneousSymbol,
    SymbolDerivativeSpec,
    benjamin_ono_symbol,
    check_ellipticity,
    derived_term,
    hilbert_symbol,
    lemma31_ratio_bound,
    merge_terms,
    polynomial_term,
    power_term,
    singularity_index,
    symbol_from_coefficients,
)

orders = st.floats(min_value=0.1, max_value=3.0)
coefficients = st.floats(min_value=-3.0, max_value=3.0).filter(lambda c: abs(c) > 1e-3)


class TestEvaluation:
    def test_examples(self, bo_symbol, cubic_symbol, fractional_symbol):
        assert bo_symbol(0.0) == 1
        assert cubic_symbol(2.0) == pytest.approx(13)
        assert fractional_symbol(-4.0) == pytest.approx(9)

    def test_sign_dependent_profile(self):
        term = HomogeneousTerm(1.0, 2.0, 5.0)
        np.testing.assert_allclose(term.evaluate(np.array([-2.0, 3.0])), [10.0, 6.0])

    def test_origin_values(self):
        assert power_term(1.0)(0.0) == 0
        assert hilbert_symbol()(0.0) == 0

    def test_two_dimensional_radial(self):
        p = symbol_from_coefficients([1, 1], dimension=2)
        assert p((3.0, 4.0)) == pytest.approx(6.0)
        with pytest.raises(PreconditionError):
            HomogeneousTerm(1.0, 1.0, 2.0, dimension=2)

    def test_two_dimensional_arrays_are_radii(self):
        term = power_term(2.0, dimension=2)
        np.testing.assert_allclose(term.evaluate(np.array([1.0, 2.0])), [1.0, 4.0])
        np.testing.assert_allclose(term.evaluate(np.array([[3.0, 4.0]])), [[9.0, 16.0]])
        assert term((3.0, 4.0)) == pytest.approx(25.0)

    @given(st.lists(st.floats(min_value=0.0, max_value=1e3), min_size=1, max_size=4))
    def test_two_dimensional_output_matches_input_shape(self, radii):
        p = symbol_from_coefficients([1, 1], dimension=2)
        values = np.asarray(p.evaluate(np.array(radii)))
        assert values.shape == (len(radii),)
        np.testing.assert_allclose(values, 1.0 + np.array(radii), rtol=1e-14)

    @given(orders, coefficients, coefficients, st.floats(min_value=0.01, max_value=50), st.sampled_from([2.0, 10.0, 100.0]))
    def test_homogeneity(self, order, c_plus, c_minus, xi, lam):
        term = HomogeneousTerm(order, c_plus, c_minus)
        for sign in (1.0, -1.0):
            scaled = term(lam * sign * xi)
            assert scaled == pytest.approx(lam**order * term(sign * xi), rel=1e-12)

    def test_orders_must_increase(self):
        with pytest.raises(PreconditionError):
            PolyhomogeneousSymbol(1.0, (power_term(2.0), power_term(1.0)))
        with pytest.raises(PreconditionError):
            PolyhomogeneousSymbol(1.0, (power_term(1.0), power_term(1.0)))

    def test_product(self, bo_symbol):
        square = bo_symbol * bo_symbol
        assert square.p0 == 1
        assert [t.order for t in square.terms] == [1.0, 2.0]
        assert square.terms[0].c_plus == 2
        assert square.terms[1].c_plus == 1
        assert square(3.0) == pytest.approx(16.0)

    def test_merge_drops_cancelled_terms(self):
        merged = merge_terms([power_term(1.0), power_term(1.0, -1.0), power_term(2.0)])
        assert [t.order for t in merged] == [2.0]


class TestSingularityIndex:
    @pytest.mark.parametrize(
        ("symbol", "expected"),
        [
            (benjamin_ono_symbol(), 1.0),
            (symbol_from_coefficients([3, 3, 1]), 1.0),
            (PolyhomogeneousSymbol(1.0, (power_term(1.5),)), 1.5),
            (PolyhomogeneousSymbol(1.0, (polynomial_term(2), power_term(3.0))), 3.0),
            (PolyhomogeneousSymbol(1.0, (polynomial_term(2),)), None),
        ],
    )
    def test_examples(self, symbol, expected):
        assert singularity_index(symbol) == expected

    def test_polynomial_terms(self):
        assert polynomial_term(1).is_polynomial
        assert polynomial_term(2).is_polynomial
        assert power_term(2.0).is_polynomial
        assert not power_term(1.0).is_polynomial
        assert not power_term(3.0).is_polynomial
        assert power_term(2.0, dimension=2).is_polynomial
        assert not power_term(1.0, dimension=2).is_polynomial


class TestEllipticity:
    def test_benjamin_ono(self, bo_symbol):
        report = check_ellipticity(bo_symbol)
        assert report.elliptic
        assert report.infimum == pytest.approx(1.0, abs=1e-6)
        assert report.witness is None

    def test_cubic(self, cubic_symbol):
        assert check_ellipticity(cubic_symbol).elliptic

    def test_zero_with_witness(self):
        report = check_ellipticity(symbol_from_coefficients([-1, 0, 1]))
        assert not report.elliptic
        assert abs(abs(report.witness) - 1.0) < 1e-9

    def test_interior_zero(self):
        p = PolyhomogeneousSymbol(0.1, (power_term(1.0, -1.0), power_term(1.5)))
        report = check_ellipticity(p)
        assert report.verdict == "not_elliptic"
        assert abs(p(report.witness)) < 1e-8

    def test_vanishing_top_coefficient(self):
        p = PolyhomogeneousSymbol(1.0, (HomogeneousTerm(1.0, 1.0, 0.0),))
        report = check_ellipticity(p)
        assert not report.elliptic
        assert report.witness == -math.inf

    def test_complex_symbol(self):
        p = PolyhomogeneousSymbol(1.0, (HomogeneousTerm(1.0, 1j, -1j),))
        assert check_ellipticity(p).elliptic

    @given(st.floats(min_value=0.1, max_value=5), orders)
    def test_elliptic_implies_nonzero_constant(self, p0, order):
        report = check_ellipticity(PolyhomogeneousSymbol(p0, (power_term(order),)))
        assert report.elliptic
        assert report.infimum <= p0 + 1e-12


class TestDerivedTerm:
    def test_xi_d_abs(self):
        out = derived_term(power_term(1.0), SymbolDerivativeSpec(gamma=1, gamma_tilde=1))
        assert out.order == 1.0
        assert out.c_plus == pytest.approx(-1j)
        assert out.c_minus == pytest.approx(-1j)

    def test_second_derivative_of_three_halves(self):
        out = derived_term(power_term(1.5), SymbolDerivativeSpec(sigma=2))
        assert out.order == pytest.approx(-0.5)
        assert out.c_plus == pytest.approx(-0.75)
        assert out.c_minus == pytest.approx(-0.75)

    def test_polynomial_stays_polynomial(self):
        out = derived_term(polynomial_term(2), SymbolDerivativeSpec(gamma=2, gamma_tilde=2))
        assert out.order == 2.0
        assert out.c_plus == pytest.approx(-2)
        assert out.c_minus == pytest.approx(-2)

    def test_abs_second_derivative_vanishes(self):
        out = derived_term(power_term(1.0), SymbolDerivativeSpec(gamma=2, gamma_tilde=2))
        assert out.is_zero

    @pytest.mark.parametrize("xi", [-4.0, -1.0, -0.5, 0.5, 1.0, 4.0])
    @pytest.mark.parametrize("term", [power_term(1.5), HomogeneousTerm(2.5, 1.0, -2.0), power_term(1.0, 3.0)])
    def test_matches_finite_difference(self, term, xi):
        step = 1e-5
        numeric = -1j * (term(xi + step) - term(xi - step)) / (2 * step)
        exact = derived_term(term, SymbolDerivativeSpec(sigma=1))(xi)
        assert exact == pytest.approx(numeric, rel=1e-6)

    def test_non_integrable_result_rejected(self):
        with pytest.raises(PreconditionError):
            derived_term(power_term(0.5), SymbolDerivativeSpec(sigma=2))

    def test_negative_index_rejected(self):
        with pytest.raises(PreconditionError):
            SymbolDerivativeSpec(gamma=-1)


class TestRatioBound:
    def test_identity_ratio(self, bo_symbol):
        assert lemma31_ratio_bound(bo_symbol, SymbolDerivativeSpec()) == pytest.approx(1.0)

    def test_benjamin_ono_first_order(self, bo_symbol):
        bound = lemma31_ratio_bound(bo_symbol, SymbolDerivativeSpec(gamma=1, gamma_tilde=1, sigma=1))
        assert 0 < bound <= 1.0 + 1e-12

    def test_cubic_bounded(self, cubic_symbol):
        bound = lemma31_ratio_bound(cubic_symbol, SymbolDerivativeSpec(gamma=1, gamma_tilde=1, sigma=1))
        assert math.isfinite(bound)

    def test_unequal_gamma_rejected(self, bo_symbol):
        with pytest.raises(PreconditionError):
            lemma31_ratio_bound(bo_symbol, SymbolDerivativeSpec(gamma=1, gamma_tilde=0))

    def test_sigma_above_floor_rejected(self, bo_symbol):
        with pytest.raises(PreconditionError):
            lemma31_ratio_bound(bo_symbol, SymbolDerivativeSpec(sigma=2))
