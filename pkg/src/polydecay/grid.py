"""Uniform periodic grids, centered Fourier transforms and rectangle-rule quadrature.

Transform convention: û(ξ) = ∫ e^{-ixξ} u(x) dx and u(x) = ∫ e^{ixξ} û(ξ) d̄ξ with
d̄ξ = (2π)^{-n} dξ. Nodes are x_j = -L + j·h and frequencies ξ_k = πk/L for
k in [-N/2, N/2), both stored in centered order along every axis.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Annotated, Callable, Literal

import numpy as np
import scipy.fft
from pydantic import BaseModel, ConfigDict, Field, field_validator

from polydecay.errors import GridError, PreconditionError
from polydecay.runtime import thread_count

logger = logging.getLogger(__name__)

Domain = Literal["space", "frequency"]


class GridSpec(BaseModel):
    """Tensor-product periodic grid on [-L, L)^n with N nodes per axis."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    dimension: Annotated[Literal[1, 2], Field(description="Spatial dimension n (1 or 2)")] = 1
    half_length: Annotated[float, Field(description="Half side length L of the box [-L, L)^n", gt=0)]
    points: Annotated[int, Field(description="Nodes per axis N (power of two)", ge=2)]

    @field_validator("points")
    @classmethod
    def _power_of_two(cls, value: int) -> int:
        if value & (value - 1):
            raise ValueError(f"points must be a power of two, got {value}")
        return value

    @property
    def spacing(self) -> float:
        """Node spacing h = 2L/N."""
        return 2.0 * self.half_length / self.points

    @property
    def frequency_spacing(self) -> float:
        """Lattice spacing π/L in frequency."""
        return np.pi / self.half_length

    @property
    def nyquist(self) -> float:
        return np.pi * self.points / (2.0 * self.half_length)

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.points,) * self.dimension

    @property
    def size(self) -> int:
        return self.points**self.dimension

    def with_length(self, half_length: float) -> GridSpec:
        """Same spacing, different box: N scales with L."""
        points = int(round(self.points * half_length / self.half_length))
        return GridSpec(dimension=self.dimension, half_length=half_length, points=points)


@dataclass(frozen=True, eq=False)
class GridField:
    """Complex samples of a function on a grid, in space or frequency layout."""

    grid: GridSpec
    values: np.ndarray
    domain: Domain = "space"

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=complex)
        if values.shape != self.grid.shape:
            raise PreconditionError(
                f"field has shape {values.shape}, grid expects {self.grid.shape}"
            )
        object.__setattr__(self, "values", values)

    def replace(self, values: np.ndarray, domain: Domain | None = None) -> GridField:
        return GridField(self.grid, values, self.domain if domain is None else domain)

    def _other_values(self, other: GridField | np.ndarray | complex) -> np.ndarray | complex:
        if isinstance(other, GridField):
            if other.grid != self.grid or other.domain != self.domain:
                raise PreconditionError("fields live on different grids or domains")
            return other.values
        return other

    def __add__(self, other):
        return self.replace(self.values + self._other_values(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self.replace(self.values - self._other_values(other))

    def __rsub__(self, other):
        return self.replace(self._other_values(other) - self.values)

    def __mul__(self, other):
        return self.replace(self.values * self._other_values(other))

    __rmul__ = __mul__

    def __neg__(self):
        return self.replace(-self.values)


def _axis(grid: GridSpec) -> np.ndarray:
    return -grid.half_length + grid.spacing * np.arange(grid.points)


def _frequency_axis(grid: GridSpec) -> np.ndarray:
    return grid.frequency_spacing * np.arange(-grid.points // 2, grid.points // 2)


def coordinates(grid: GridSpec) -> np.ndarray | tuple[np.ndarray, np.ndarray]:
    """Node coordinates: x for n=1, the (x1, x2) meshgrid for n=2."""
    axis = _axis(grid)
    if grid.dimension == 1:
        return axis
    return tuple(np.meshgrid(axis, axis, indexing="ij"))


def frequencies(grid: GridSpec) -> np.ndarray | tuple[np.ndarray, np.ndarray]:
    """Frequency lattice ξ_k in centered order, same layout as coordinates()."""
    axis = _frequency_axis(grid)
    if grid.dimension == 1:
        return axis
    return tuple(np.meshgrid(axis, axis, indexing="ij"))


def radius(grid: GridSpec) -> np.ndarray:
    """|x| at every node."""
    x = coordinates(grid)
    if grid.dimension == 1:
        return np.abs(x)
    return np.hypot(*x)


def frequency_radius(grid: GridSpec) -> np.ndarray:
    """|ξ| at every lattice point."""
    xi = frequencies(grid)
    if grid.dimension == 1:
        return np.abs(xi)
    return np.hypot(*xi)


def sample(generator: Callable[..., np.ndarray | complex], grid: GridSpec) -> GridField:
    """Sample a pointwise function at the grid nodes.

    The generator is called once, vectorized: generator(x) for n=1 and
    generator(x1, x2) for n=2.

    Raises:
        GridError: a sample is NaN or infinite; the offending node is named
    """
    x = coordinates(grid)
    raw = generator(x) if grid.dimension == 1 else generator(*x)
    values = np.broadcast_to(np.asarray(raw, dtype=complex), grid.shape).copy()
    bad = ~np.isfinite(values)
    if bad.any():
        node = tuple(int(i) for i in np.argwhere(bad)[0])
        axis = _axis(grid)
        point = tuple(float(axis[i]) for i in node)
        raise GridError(f"non-finite sample {values[node]} at node {node}, x = {point}", node, point)
    return GridField(grid, values, "space")


def _axes(grid: GridSpec) -> tuple[int, ...]:
    return tuple(range(grid.dimension))


def forward_transform(u: GridField) -> GridField:
    """Rectangle-rule approximation of û(ξ_k) on the centered lattice."""
    if u.domain != "space":
        raise PreconditionError("forward_transform expects a space-domain field")
    axes = _axes(u.grid)
    spectrum = scipy.fft.fftshift(
        scipy.fft.fftn(scipy.fft.ifftshift(u.values, axes=axes), axes=axes, workers=thread_count()),
        axes=axes,
    )
    return GridField(u.grid, spectrum * u.grid.spacing**u.grid.dimension, "frequency")


def inverse_transform(v: GridField) -> GridField:
    """Discrete ∫ e^{ixξ}(·) d̄ξ; exact inverse of forward_transform."""
    if v.domain != "frequency":
        raise PreconditionError("inverse_transform expects a frequency-domain field")
    axes = _axes(v.grid)
    values = scipy.fft.fftshift(
        scipy.fft.ifftn(scipy.fft.ifftshift(v.values, axes=axes), axes=axes, workers=thread_count()),
        axes=axes,
    )
    return GridField(v.grid, values / v.grid.spacing**v.grid.dimension, "space")


def _require_space(u: GridField, operation: str) -> None:
    if u.domain != "space":
        raise PreconditionError(f"{operation} expects a space-domain field")


def l2_norm(u: GridField, mask: np.ndarray | None = None) -> float:
    """(h^n Σ|u|²)^{1/2}, optionally restricted to the nodes selected by mask."""
    _require_space(u, "l2_norm")
    values = u.values if mask is None else u.values[mask]
    return float(np.sqrt(u.grid.spacing**u.grid.dimension * np.sum(np.abs(values) ** 2)))


def l1_norm(u: GridField, mask: np.ndarray | None = None) -> float:
    """h^n Σ|u|, optionally restricted to the nodes selected by mask."""
    _require_space(u, "l1_norm")
    values = u.values if mask is None else u.values[mask]
    return float(u.grid.spacing**u.grid.dimension * np.sum(np.abs(values)))


def frequency_l2_norm(v: GridField) -> float:
    """((2π)^{-n} h_ξ^n Σ|v|²)^{1/2}; equals l2_norm of the inverse by Parseval."""
    if v.domain != "frequency":
        raise PreconditionError("frequency_l2_norm expects a frequency-domain field")
    n = v.grid.dimension
    weight = (v.grid.frequency_spacing / (2.0 * np.pi)) ** n
    return float(np.sqrt(weight * np.sum(np.abs(v.values) ** 2)))


def shift(u: GridField, nodes: int | tuple[int, ...]) -> GridField:
    """Periodic translation by an integer number of nodes per axis."""
    if isinstance(nodes, int):
        nodes = (nodes,) * u.grid.dimension
    return u.replace(np.roll(u.values, nodes, axis=_axes(u.grid)))


def trusted_mask(grid: GridSpec, trusted_radius: float | None = None) -> np.ndarray:
    """Nodes with |x| <= trusted_radius (default L/2), where periodization is negligible."""
    limit = grid.half_length / 2.0 if trusted_radius is None else trusted_radius
    return radius(grid) <= limit + 1e-12 * grid.half_length


def monomial_weight(grid: GridSpec, beta: int | tuple[int, ...]) -> np.ndarray:
    """x^β at every node."""
    x = coordinates(grid)
    if grid.dimension == 1:
        power = beta if isinstance(beta, int) else beta[0]
        return x**power
    b1, b2 = (beta, 0) if isinstance(beta, int) else beta
    return x[0] ** b1 * x[1] ** b2


def bracket_weight(grid: GridSpec, t: float) -> np.ndarray:
    """⟨x⟩^t = (1+|x|²)^{t/2} at every node."""
    return (1.0 + radius(grid) ** 2) ** (t / 2.0)
