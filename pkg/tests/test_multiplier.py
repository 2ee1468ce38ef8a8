"""Tests for multipliers on grids, weighted norms and cutoffs."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from pydantic import ValidationError

from polydecay.errors import NotEllipticError, PreconditionError, RegimeError
from polydecay.grid import GridSpec, coordinates, l1_norm, l2_norm, sample, shift
from polydecay.multiplier import (
    CutoffSpec,
    SobolevIndex,
    apply,
    apply_bracket,
    bracket_symbol,
    cutoff_multiplier,
    inverse_apply,
    l1_sobolev_norm,
    partial_derivative,
    smoothing_operator,
    term_on_lattice,
    weighted_sobolev_norm,
)
from polydecay.symbols import (
    HomogeneousTerm,
    PolyhomogeneousSymbol,
    hilbert_symbol,
    power_term,
    symbol_from_coefficients,
)


class TestApply:
    def test_hilbert_of_cosine(self, periodic_grid):
        u = sample(np.cos, periodic_grid)
        out = apply(hilbert_symbol(), u)
        np.testing.assert_allclose(out.values, np.sin(coordinates(periodic_grid)), atol=1e-12)

    def test_abs_derivative_of_cosine(self, periodic_grid):
        u = sample(lambda x: np.cos(2 * x), periodic_grid)
        out = apply(power_term(1.0), u)
        np.testing.assert_allclose(out.values, 2 * u.values, atol=1e-12)

    def test_callable_multiplier(self, gaussian):
        doubled = apply(lambda grid: np.full(grid.shape, 2.0), gaussian)
        np.testing.assert_allclose(doubled.values, 2 * gaussian.values, atol=1e-14)

    @given(
        st.floats(min_value=0.1, max_value=2.0),
        st.floats(min_value=0.5, max_value=2.5),
        st.floats(min_value=0.5, max_value=3.0),
    )
    def test_composition_is_product(self, p0, order, coeff):
        grid = GridSpec(half_length=20.0, points=256)
        u = sample(lambda x: np.exp(-0.5 * x**2), grid)
        p = PolyhomogeneousSymbol(p0, (power_term(order, coeff),))
        q = PolyhomogeneousSymbol(1.0, (power_term(1.0),))
        lhs = apply(p, apply(q, u))
        rhs = apply(p * q, u)
        assert l2_norm(lhs - rhs) <= 1e-10 * l2_norm(rhs)

    def test_inverse_undoes_apply(self, gaussian, cubic_symbol):
        back = inverse_apply(cubic_symbol, apply(cubic_symbol, gaussian))
        assert l2_norm(back - gaussian) <= 1e-12 * l2_norm(gaussian)

    @given(st.integers(min_value=-100, max_value=100), st.floats(min_value=0.5, max_value=2.5))
    def test_commutes_with_translation(self, nodes, order):
        grid = GridSpec(half_length=20.0, points=256)
        u = sample(lambda x: np.exp(-0.5 * (x - 1.0) ** 2) * (1 + 0.3 * x), grid)
        p = PolyhomogeneousSymbol(1.0, (power_term(order), HomogeneousTerm(order + 0.5, 1.0, -0.5 + 2j)))
        lhs = apply(p, shift(u, nodes))
        rhs = shift(apply(p, u), nodes)
        assert l2_norm(lhs - rhs) <= 1e-12 * l2_norm(rhs)

    def test_inverse_needs_ellipticity(self, gaussian):
        with pytest.raises(NotEllipticError) as info:
            inverse_apply(symbol_from_coefficients([-1, 0, 1]), gaussian)
        assert abs(abs(info.value.witness) - 1.0) < 1e-9

    def test_dimension_mismatch(self, gaussian):
        with pytest.raises(PreconditionError):
            apply(symbol_from_coefficients([1, 1], dimension=2), gaussian)

    def test_derivative_of_gaussian(self, small_grid, gaussian):
        x = coordinates(small_grid)
        out = partial_derivative(gaussian, 1)
        np.testing.assert_allclose(out.values, -x * np.exp(-0.5 * x**2), atol=1e-12)

    def test_mixed_derivative_two_dimensions(self):
        grid = GridSpec(dimension=2, half_length=12.0, points=64)
        u = sample(lambda x1, x2: np.exp(-0.5 * (x1**2 + x2**2)), grid)
        x1, x2 = coordinates(grid)
        out = partial_derivative(u, (1, 1))
        np.testing.assert_allclose(out.values, x1 * x2 * u.values, atol=1e-10)


class TestLattice:
    def test_negative_order_zero_bin_is_finite(self, small_grid):
        values = term_on_lattice(power_term(-0.25), small_grid)
        assert np.all(np.isfinite(values))
        origin = small_grid.points // 2
        h = small_grid.frequency_spacing
        assert values[origin] == pytest.approx((h / 2) ** -0.25 / 0.75)

    def test_order_minus_n_rejected(self, small_grid):
        with pytest.raises(PreconditionError):
            term_on_lattice(power_term(-1.0), small_grid)

    def test_two_dimensional_zero_bin(self):
        grid = GridSpec(dimension=2, half_length=10.0, points=32)
        values = term_on_lattice(power_term(-0.5, dimension=2), grid)
        assert np.all(np.isfinite(values))

    def test_bracket_symbol_positive(self, small_grid):
        assert np.all(bracket_symbol(small_grid, -3.0) > 0)
        assert bracket_symbol(small_grid, 2.0)[small_grid.points // 2] == 1.0


class TestNorms:
    def test_plain_norm(self, gaussian):
        assert weighted_sobolev_norm(gaussian, SobolevIndex()) == pytest.approx(l2_norm(gaussian))

    def test_weights_increase_norm(self, gaussian):
        plain = weighted_sobolev_norm(gaussian, SobolevIndex())
        assert weighted_sobolev_norm(gaussian, SobolevIndex(t=1.0)) > plain
        assert weighted_sobolev_norm(gaussian, SobolevIndex(s=1.0)) > plain

    def test_gaussian_h1_norm(self, gaussian):
        # ‖⟨D⟩u‖² = ‖u‖² + ‖u'‖² = √π + √π/2
        expected = np.sqrt(1.5 * np.sqrt(np.pi))
        assert weighted_sobolev_norm(gaussian, SobolevIndex(s=1.0)) == pytest.approx(expected, rel=1e-10)

    def test_bracket_zero_is_identity(self, gaussian):
        assert apply_bracket(gaussian, 0.0) is gaussian

    def test_l1_norm_of_gaussian(self, gaussian):
        assert l1_sobolev_norm(gaussian, 0.0) == pytest.approx(np.sqrt(2 * np.pi), rel=1e-12)

    @given(st.floats(min_value=0.25, max_value=3.0))
    def test_l1_norm_grows_with_smoothness(self, s):
        # ∫⟨D⟩^s u = û(0) = ‖u‖_{L¹} for u >= 0
        grid = GridSpec(half_length=20.0, points=256)
        u = sample(lambda x: np.exp(-0.5 * x**2), grid)
        assert l1_sobolev_norm(u, s) >= l1_sobolev_norm(u, 0.0) * (1 - 1e-12)

    def test_order_zero_is_plain_l1_norm(self, gaussian):
        assert l1_sobolev_norm(gaussian, 0.0) == l1_norm(gaussian)

    def test_index_is_strict(self):
        with pytest.raises(ValidationError):
            SobolevIndex(s=0.0, r=1.0)


class TestCutoff:
    def test_profile_shape(self):
        cutoff = CutoffSpec()
        r = np.linspace(0.0, 3.0, 301)
        phi = cutoff.profile(r)
        assert np.all(phi[r <= 1.0] == 1.0)
        assert np.all(phi[r >= 2.0] == 0.0)
        assert np.all(np.diff(phi) <= 0)

    def test_radii_ordered(self):
        with pytest.raises(ValidationError):
            CutoffSpec(inner_radius=2.0, outer_radius=1.0)

    def test_high_frequencies_removed(self, periodic_grid):
        u = sample(lambda x: np.cos(5 * x), periodic_grid)
        out = cutoff_multiplier(power_term(1.0), CutoffSpec(), u)
        assert l2_norm(out) < 1e-12

    def test_smoothing_regime(self, gaussian):
        with pytest.raises(RegimeError) as info:
            smoothing_operator(power_term(0.0), CutoffSpec(), gaussian)
        assert info.value.inequality == "-n/2 < mu < 0"
        with pytest.raises(RegimeError):
            smoothing_operator(power_term(-0.6), CutoffSpec(), gaussian)
        assert np.all(np.isfinite(smoothing_operator(power_term(-0.25), CutoffSpec(), gaussian).values))
