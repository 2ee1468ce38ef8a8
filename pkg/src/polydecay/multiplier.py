"""Fourier multipliers p(D) on grid fields, weighted Sobolev norms and the low-frequency cutoff."""

from __future__ import annotations

import logging
from typing import Annotated, Callable, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from polydecay.errors import NotEllipticError, PreconditionError, RegimeError
from polydecay.grid import (
    GridField,
    GridSpec,
    bracket_weight,
    forward_transform,
    frequencies,
    frequency_radius,
    inverse_transform,
    l1_norm,
    l2_norm,
)
from polydecay.symbols import HomogeneousTerm, PolyhomogeneousSymbol, check_ellipticity

logger = logging.getLogger(__name__)

Multiplier = Union[PolyhomogeneousSymbol, HomogeneousTerm, Callable[[GridSpec], np.ndarray]]


class SobolevIndex(BaseModel):
    """(s, t) of the weighted space H^{s,t}."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    s: Annotated[float, Field(description="Derivative weight s")] = 0.0
    t: Annotated[float, Field(description="Spatial weight t")] = 0.0


class CutoffSpec(BaseModel):
    """Smooth radial bump: 1 on |ξ| <= inner_radius, 0 on |ξ| >= outer_radius."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    inner_radius: Annotated[float, Field(description="Radius where the cutoff starts to fall", gt=0)] = 1.0
    outer_radius: Annotated[float, Field(description="Radius beyond which the cutoff vanishes", gt=0)] = 2.0

    @model_validator(mode="after")
    def _ordered(self) -> CutoffSpec:
        if self.outer_radius <= self.inner_radius:
            raise ValueError("outer_radius must exceed inner_radius")
        return self

    def profile(self, r: np.ndarray) -> np.ndarray:
        """exp(-1/t)-based smooth transition rescaled to [inner_radius, outer_radius]."""
        r = np.asarray(r, dtype=float)
        t = np.clip((self.outer_radius - r) / (self.outer_radius - self.inner_radius), 0.0, 1.0)

        def bump(z: np.ndarray) -> np.ndarray:
            with np.errstate(divide="ignore"):
                return np.where(z > 0, np.exp(-1.0 / np.where(z > 0, z, 1.0)), 0.0)

        rising, falling = bump(t), bump(1.0 - t)
        return rising / (rising + falling)


# =============================================================================
# Lattice symbols
# =============================================================================


def _singular_cell_average(term: HomogeneousTerm, grid: GridSpec) -> complex:
    """Mean of a homogeneous term of order μ in (-n, 0] over the lattice cell at ξ = 0."""
    mu, h = term.order, grid.frequency_spacing
    if grid.dimension == 1:
        return (term.c_plus + term.c_minus) / 2 * (h / 2) ** mu / (mu + 1)
    # disc with the area of the h x h cell
    rho = h / np.sqrt(np.pi)
    return term.c_plus * 2 * rho**mu / (mu + 2)


def term_on_lattice(term: HomogeneousTerm, grid: GridSpec) -> np.ndarray:
    """Sample a homogeneous term on the frequency lattice, zero bin handled for order <= 0."""
    if term.dimension != grid.dimension:
        raise PreconditionError("symbol and grid dimensions differ")
    values = np.asarray(term.evaluate(frequencies(grid)), dtype=complex)
    if term.order <= 0 and not term.is_zero:
        if term.order <= -grid.dimension:
            raise PreconditionError(
                f"order {term.order:g} <= -n: the symbol is not locally integrable"
            )
        origin = (grid.points // 2,) * grid.dimension
        values[origin] = _singular_cell_average(term, grid)
    return values


def symbol_on_lattice(p: Multiplier, grid: GridSpec) -> np.ndarray:
    """p(ξ_k) on the centered lattice."""
    if isinstance(p, HomogeneousTerm):
        return term_on_lattice(p, grid)
    if isinstance(p, PolyhomogeneousSymbol):
        if p.dimension != grid.dimension:
            raise PreconditionError("symbol and grid dimensions differ")
        total = np.full(grid.shape, p.p0, dtype=complex)
        for term in p.terms:
            total += term_on_lattice(term, grid)
        return total
    return np.asarray(p(grid), dtype=complex)


def bracket_symbol(grid: GridSpec, s: float) -> np.ndarray:
    """⟨ξ⟩^s on the lattice; the Nyquist bin uses the plain lattice value."""
    return (1.0 + frequency_radius(grid) ** 2) ** (s / 2.0)


def apply_lattice(values: np.ndarray, u: GridField) -> GridField:
    """Multiply the spectrum of u by precomputed lattice values."""
    spectrum = forward_transform(u)
    return inverse_transform(spectrum.replace(spectrum.values * values))


# =============================================================================
# Operators
# =============================================================================


def apply(p: Multiplier, u: GridField) -> GridField:
    """p(D)u = F^{-1}(p(ξ_k)·û)."""
    return apply_lattice(symbol_on_lattice(p, u.grid), u)


def inverse_symbol_on_lattice(p: PolyhomogeneousSymbol, grid: GridSpec) -> np.ndarray:
    """1/p(ξ_k) after certifying global ellipticity.

    Raises:
        NotEllipticError: the classifier found (near-)zeros of p, witness attached
    """
    report = check_ellipticity(p)
    if not report.elliptic:
        raise NotEllipticError(
            f"symbol is not globally elliptic: inf <xi>^-M |p| ~ {report.infimum:.3g} at xi = {report.witness}",
            report.witness,
        )
    return 1.0 / symbol_on_lattice(p, grid)


def inverse_apply(p: PolyhomogeneousSymbol, u: GridField) -> GridField:
    """p(D)^{-1}u for a globally elliptic symbol."""
    return apply_lattice(inverse_symbol_on_lattice(p, u.grid), u)


def apply_bracket(u: GridField, s: float) -> GridField:
    """⟨D⟩^s u."""
    if s == 0:
        return u
    return apply_lattice(bracket_symbol(u.grid, s), u)


def partial_derivative(u: GridField, alpha: int | tuple[int, ...]) -> GridField:
    """∂^α u through the multiplier (iξ)^α."""
    if isinstance(alpha, int):
        alpha = (alpha,) + (0,) * (u.grid.dimension - 1)
    if not any(alpha):
        return u
    xi = frequencies(u.grid)
    axes = (xi,) if u.grid.dimension == 1 else xi
    values = np.ones(u.grid.shape, dtype=complex)
    for axis, power in zip(axes, alpha):
        values = values * (1j * axis) ** power
    return apply_lattice(values, u)


def weighted_sobolev_norm(u: GridField, idx: SobolevIndex, mask: np.ndarray | None = None) -> float:
    """‖⟨x⟩^t ⟨D⟩^s u‖_{L²}, optionally over the nodes selected by mask."""
    v = apply_bracket(u, idx.s)
    if idx.t != 0:
        v = v * bracket_weight(u.grid, idx.t)
    return l2_norm(v, mask)


def l1_sobolev_norm(u: GridField, s: float) -> float:
    """‖⟨D⟩^s u‖_{L¹}."""
    return l1_norm(apply_bracket(u, s))


def cutoff_multiplier(q: HomogeneousTerm, cutoff: CutoffSpec, v: GridField) -> GridField:
    """H_{φ,q}v = (φq)(D)v for any order."""
    if cutoff.inner_radius < v.grid.frequency_spacing:
        logger.warning("cutoff inner radius is below the lattice spacing; zero bin is not inside the plateau")
    values = cutoff.profile(frequency_radius(v.grid)) * term_on_lattice(q, v.grid)
    return apply_lattice(values, v)


def smoothing_operator(q: HomogeneousTerm, cutoff: CutoffSpec, v: GridField) -> GridField:
    """H_{φ,q}v for a homogeneous q of order μ in (-n/2, 0).

    Raises:
        RegimeError: μ outside (-n/2, 0)
    """
    half = v.grid.dimension / 2.0
    if not -half < q.order < 0:
        raise RegimeError(
            f"order {q.order:g} outside (-n/2, 0) = ({-half:g}, 0)", "-n/2 < mu < 0"
        )
    return cutoff_multiplier(q, cutoff, v)
