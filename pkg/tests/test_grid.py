"""Tests for grids, transforms and norms."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from pydantic import ValidationError

from polydecay.errors import GridError, PreconditionError
from polydecay.grid import (
    GridField,
    GridSpec,
    bracket_weight,
    coordinates,
    forward_transform,
    frequencies,
    frequency_l2_norm,
    inverse_transform,
    l1_norm,
    l2_norm,
    monomial_weight,
    sample,
    shift,
    trusted_mask,
)

finite = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False)


class TestGridSpec:
    def test_spacings(self):
        grid = GridSpec(half_length=10.0, points=64)
        assert grid.spacing == pytest.approx(20.0 / 64)
        assert grid.frequency_spacing == pytest.approx(np.pi / 10.0)
        assert grid.nyquist == pytest.approx(np.pi * 64 / 20.0)
        assert grid.shape == (64,)

    def test_points_must_be_power_of_two(self):
        with pytest.raises(ValidationError):
            GridSpec(half_length=10.0, points=100)

    def test_half_length_must_be_positive(self):
        with pytest.raises(ValidationError):
            GridSpec(half_length=0.0, points=64)

    def test_unknown_keys_rejected(self):
        with pytest.raises(ValidationError):
            GridSpec(half_length=1.0, points=8, spacing=0.1)

    def test_with_length_keeps_spacing(self):
        grid = GridSpec(half_length=10.0, points=64)
        wider = grid.with_length(40.0)
        assert wider.points == 256
        assert wider.spacing == pytest.approx(grid.spacing)

    def test_two_dimensional_shape(self):
        grid = GridSpec(dimension=2, half_length=5.0, points=32)
        x1, x2 = coordinates(grid)
        assert x1.shape == x2.shape == (32, 32)
        assert grid.size == 1024


class TestNodes:
    def test_nodes_start_at_minus_L(self):
        grid = GridSpec(half_length=4.0, points=8)
        x = coordinates(grid)
        assert x[0] == -4.0
        assert x[grid.points // 2] == 0.0

    def test_frequencies_centered(self):
        grid = GridSpec(half_length=np.pi, points=8)
        assert list(frequencies(grid)) == [-4, -3, -2, -1, 0, 1, 2, 3]

    def test_sample_names_bad_node(self):
        grid = GridSpec(half_length=4.0, points=8)
        with pytest.raises(GridError) as info:
            with np.errstate(divide="ignore"):
                sample(lambda x: 1.0 / x, grid)
        assert info.value.node == (4,)
        assert info.value.coordinates == (0.0,)

    def test_trusted_mask_is_half_box(self):
        grid = GridSpec(half_length=8.0, points=64)
        mask = trusted_mask(grid)
        assert np.all(np.abs(coordinates(grid)[mask]) <= 4.0)
        assert mask.sum() == 33


class TestTransforms:
    def test_gaussian_transform(self, small_grid, gaussian):
        xi = frequencies(small_grid)
        expected = np.sqrt(2 * np.pi) * np.exp(-0.5 * xi**2)
        np.testing.assert_allclose(forward_transform(gaussian).values, expected, atol=1e-12)

    def test_two_dimensional_gaussian(self):
        grid = GridSpec(dimension=2, half_length=12.0, points=64)
        u = sample(lambda x1, x2: np.exp(-0.5 * (x1**2 + x2**2)), grid)
        xi1, xi2 = frequencies(grid)
        expected = 2 * np.pi * np.exp(-0.5 * (xi1**2 + xi2**2))
        np.testing.assert_allclose(forward_transform(u).values, expected, atol=1e-11)

    @given(arrays(np.float64, 32, elements=finite), arrays(np.float64, 32, elements=finite))
    def test_round_trip(self, re, im):
        grid = GridSpec(half_length=3.0, points=32)
        u = GridField(grid, re + 1j * im)
        back = inverse_transform(forward_transform(u))
        np.testing.assert_allclose(back.values, u.values, atol=1e-12)

    @given(arrays(np.float64, 32, elements=finite), st.floats(min_value=-3, max_value=3))
    def test_linearity(self, values, a):
        grid = GridSpec(half_length=3.0, points=32)
        u = GridField(grid, values)
        v = GridField(grid, np.roll(values, 5))
        lhs = forward_transform(u * a + v).values
        rhs = forward_transform(u).values * a + forward_transform(v).values
        np.testing.assert_allclose(lhs, rhs, atol=1e-11)

    def test_parseval(self, gaussian):
        assert frequency_l2_norm(forward_transform(gaussian)) == pytest.approx(l2_norm(gaussian), rel=1e-12)

    def test_domain_is_checked(self, gaussian):
        with pytest.raises(PreconditionError):
            inverse_transform(gaussian)
        with pytest.raises(PreconditionError):
            forward_transform(forward_transform(gaussian))


class TestNorms:
    def test_gaussian_norms(self, gaussian):
        assert l2_norm(gaussian) == pytest.approx(np.pi**0.25, rel=1e-12)
        assert l1_norm(gaussian) == pytest.approx(np.sqrt(2 * np.pi), rel=1e-12)

    def test_masked_norm_is_smaller(self, gaussian):
        mask = trusted_mask(gaussian.grid, 1.0)
        assert l2_norm(gaussian, mask) < l2_norm(gaussian)

    def test_weights(self, small_grid):
        x = coordinates(small_grid)
        np.testing.assert_allclose(monomial_weight(small_grid, 2), x**2)
        np.testing.assert_allclose(bracket_weight(small_grid, 2.0), 1 + x**2)


class TestFieldArithmetic:
    def test_mismatched_grids(self, gaussian):
        other = sample(lambda x: x, GridSpec(half_length=20.0, points=128))
        with pytest.raises(PreconditionError):
            gaussian + other

    def test_shape_checked(self, small_grid):
        with pytest.raises(PreconditionError):
            GridField(small_grid, np.zeros(10))

    def test_shift_moves_peak(self, gaussian):
        moved = shift(gaussian, 10)
        assert int(np.argmax(moved.values.real)) == gaussian.grid.points // 2 + 10
