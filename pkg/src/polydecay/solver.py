"""Solitary-wave profiles of p(D)u = f + F(u) by spectral iteration.

Two schemes are available: damped fixed-point iteration u <- P^{-1}(f + F(u)), and
Petviashvili iteration for monomial nonlinearities F(u) = F_k u^k, whose
stabilizing factor removes the growing mode that makes plain fixed-point
iteration collapse to zero or blow up.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Annotated, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from polydecay.errors import ConvergenceError, PreconditionError, SolverDivergedError
from polydecay.grid import GridField, GridSpec, forward_transform, inverse_transform, l2_norm
from polydecay.multiplier import apply_lattice, inverse_symbol_on_lattice, symbol_on_lattice
from polydecay.symbols import PolyhomogeneousSymbol

logger = logging.getLogger(__name__)

DIVERGENCE_FACTOR = 10.0
_EPS = float(np.finfo(float).eps)


class Nonlinearity(BaseModel):
    """F(u) = Σ_j F_j u^j with j >= 2."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    coeffs: Annotated[dict[int, complex], Field(description="Map from power j >= 2 to F_j")] = {}

    @field_validator("coeffs")
    @classmethod
    def _vanishes_to_second_order(cls, value: dict[int, complex]) -> dict[int, complex]:
        low = [j for j in value if j < 2]
        if low:
            raise ValueError(f"F must vanish to order >= 2 at u = 0; got powers {sorted(low)}")
        return dict(sorted(value.items()))

    @classmethod
    def monomial_of(cls, k: int, coefficient: complex = 1.0) -> Nonlinearity:
        return cls(coeffs={k: coefficient})

    @property
    def degree(self) -> int:
        return max(self.coeffs, default=0)

    def monomial(self) -> tuple[int, complex]:
        """(k, F_k) of a single-term nonlinearity."""
        active = {j: c for j, c in self.coeffs.items() if c != 0}
        if len(active) != 1:
            raise PreconditionError(f"expected a monomial nonlinearity, got powers {sorted(active)}")
        return next(iter(active.items()))

    def evaluate(self, u: GridField) -> GridField:
        if u.domain != "space":
            raise PreconditionError("evaluate_nonlinearity expects a space-domain field")
        total = np.zeros(u.grid.shape, dtype=complex)
        for j, coefficient in self.coeffs.items():
            total += coefficient * u.values**j
        return u.replace(total)

    __call__ = evaluate


def evaluate_nonlinearity(F: Nonlinearity, u: GridField) -> GridField:
    """Pointwise Σ F_j u(x)^j."""
    return F.evaluate(u)


class SolveConfig(BaseModel):
    """Iteration settings shared by both schemes."""

    model_config = ConfigDict(frozen=True, extra="forbid", arbitrary_types_allowed=True)

    grid: GridSpec
    initial_guess: GridField
    max_iterations: Annotated[int, Field(description="Iteration cap", gt=0)] = 200
    residual_tolerance: Annotated[float, Field(description="Stop when the relative residual drops below this", gt=0)] = 1e-10
    method: Annotated[Literal["fixed_point", "petviashvili"], Field(description="Iteration scheme")] = "petviashvili"
    petviashvili_exponent: Annotated[
        float | None, Field(description="Stabilizing exponent; default k/(k-1) for F = F_k u^k")
    ] = None
    damping: Annotated[float, Field(description="Relaxation weight d in (0, 1]", gt=0, le=1)] = 1.0

    @field_validator("petviashvili_exponent")
    @classmethod
    def _finite(cls, value: float | None) -> float | None:
        if value is not None and not np.isfinite(value):
            raise ValueError("petviashvili_exponent must be finite")
        return value


@dataclass
class SolveResult:
    profile: GridField
    residual_history: list[float] = field(default_factory=list)
    converged: bool = False
    iterations_used: int = 0
    stabilizing_factors: list[complex] = field(default_factory=list)

    @property
    def final_residual(self) -> float:
        return self.residual_history[-1] if self.residual_history else float("nan")


def _relative_residual(
    p_lattice: np.ndarray, F: Nonlinearity, f: GridField | None, u: GridField
) -> float:
    defect = apply_lattice(p_lattice, u) - F(u)
    if f is not None:
        defect = defect - f
    return l2_norm(defect) / max(l2_norm(u), _EPS)


def residual(p: PolyhomogeneousSymbol, F: Nonlinearity, u: GridField, f: GridField | None = None) -> float:
    """‖p(D)u - f - F(u)‖ / max(‖u‖, machine epsilon)."""
    return _relative_residual(symbol_on_lattice(p, u.grid), F, f, u)


def _track(result: SolveResult, value: float, iteration: int) -> None:
    """Record a residual; raise once it is non-finite or 10x above the running minimum."""
    result.residual_history.append(value)
    result.iterations_used = iteration
    floor = min(result.residual_history)
    if not np.isfinite(value) or value > DIVERGENCE_FACTOR * floor:
        raise SolverDivergedError(
            f"residual {value:.3e} at iteration {iteration} exceeds {DIVERGENCE_FACTOR:g}x its minimum {floor:.3e}",
            result,
        )


def _check_grid(cfg: SolveConfig) -> None:
    if cfg.initial_guess.grid != cfg.grid:
        raise PreconditionError("initial guess does not live on the configured grid")


def fixed_point_solve(
    p: PolyhomogeneousSymbol, F: Nonlinearity, f: GridField | None, cfg: SolveConfig
) -> SolveResult:
    """Damped iteration u_{n+1} = (1-d)u_n + d·P^{-1}(f + F(u_n)).

    Raises:
        NotEllipticError: p is not globally elliptic
        SolverDivergedError: the residual grows 10x above its running minimum
    """
    _check_grid(cfg)
    inverse = inverse_symbol_on_lattice(p, cfg.grid)
    p_lattice = symbol_on_lattice(p, cfg.grid)
    u = cfg.initial_guess
    d = cfg.damping
    result = SolveResult(profile=u)

    for iteration in range(1, cfg.max_iterations + 1):
        source = F(u) if f is None else f + F(u)
        u = u * (1 - d) + apply_lattice(inverse, source) * d
        result.profile = u
        value = _relative_residual(p_lattice, F, f, u)
        _track(result, value, iteration)
        logger.debug("fixed point iteration %d: residual %.3e", iteration, value)
        if value <= cfg.residual_tolerance:
            result.converged = True
            break

    logger.info(
        "fixed point %s after %d iterations (residual %.3e)",
        "converged" if result.converged else "stopped",
        result.iterations_used,
        result.final_residual,
    )
    return result


def petviashvili_solve(p: PolyhomogeneousSymbol, F: Nonlinearity, cfg: SolveConfig) -> SolveResult:
    """Petviashvili iteration û_{n+1} = M_n^γ·F_k(u_n^k)^ / p(ξ).

    M_n = ⟨p·û_n, û_n⟩ / ⟨(F_k u_n^k)^, û_n⟩ tends to 1 at a fixed point.

    Raises:
        PreconditionError: non-monomial F or zero initial guess
        NotEllipticError: p is not globally elliptic
        ConvergenceError: M_n is undefined (vanishing denominator)
        SolverDivergedError: the residual grows 10x above its running minimum
    """
    _check_grid(cfg)
    k, coefficient = F.monomial()
    if not np.any(cfg.initial_guess.values):
        raise PreconditionError("Petviashvili iteration needs a nonzero initial guess")
    gamma = cfg.petviashvili_exponent if cfg.petviashvili_exponent is not None else k / (k - 1)
    inverse = inverse_symbol_on_lattice(p, cfg.grid)
    p_lattice = symbol_on_lattice(p, cfg.grid)
    d = cfg.damping
    u = cfg.initial_guess
    result = SolveResult(profile=u)

    for iteration in range(1, cfg.max_iterations + 1):
        spectrum = forward_transform(u).values
        nonlinear = forward_transform(F(u)).values
        numerator = np.vdot(spectrum, p_lattice * spectrum)
        denominator = np.vdot(spectrum, nonlinear)
        if denominator == 0 or not np.isfinite(denominator):
            raise ConvergenceError(
                f"stabilizing factor undefined at iteration {iteration} (denominator {denominator})", result
            )
        factor = complex(numerator / denominator)
        result.stabilizing_factors.append(factor)
        update = factor**gamma * nonlinear * inverse
        new = inverse_transform(GridField(cfg.grid, update, "frequency"))
        u = u * (1 - d) + new * d
        result.profile = u
        value = _relative_residual(p_lattice, F, None, u)
        _track(result, value, iteration)
        logger.debug("petviashvili iteration %d: residual %.3e, M = %.12g", iteration, value, factor.real)
        if value <= cfg.residual_tolerance:
            result.converged = True
            break

    logger.info(
        "petviashvili %s after %d iterations (residual %.3e, k = %d, gamma = %.4g)",
        "converged" if result.converged else "stopped",
        result.iterations_used,
        result.final_residual,
        k,
        gamma,
    )
    return result


def solve(
    p: PolyhomogeneousSymbol, F: Nonlinearity, cfg: SolveConfig, f: GridField | None = None
) -> SolveResult:
    """Dispatch on cfg.method."""
    if cfg.method == "petviashvili":
        if f is not None:
            raise PreconditionError("Petviashvili iteration solves the unforced equation only")
        return petviashvili_solve(p, F, cfg)
    return fixed_point_solve(p, F, f, cfg)


def center_profile(u: GridField) -> GridField:
    """Translate on the grid so that max |u| sits at x = 0."""
    peak = np.unravel_index(int(np.argmax(np.abs(u.values))), u.grid.shape)
    origin = u.grid.points // 2
    offsets = tuple(origin - int(i) for i in peak)
    return u.replace(np.roll(u.values, offsets, axis=tuple(range(u.grid.dimension))))
