"""solve: solitary-wave profile of p(D)u = F(u) with the tail exponent of the result."""

from __future__ import annotations

import logging
from pathlib import Path

import numpy as np

from polydecay.config import SolveRunConfig
from polydecay.decayometer import fit_tail_exponent
from polydecay.errors import ConvergenceError, PreconditionError
from polydecay.grid import coordinates, sample
from polydecay.reports import write_columns, write_json
from polydecay.solver import SolveConfig, SolveResult, center_profile, solve

logger = logging.getLogger(__name__)


def _initial_guess(config: SolveRunConfig):
    amplitude, width = config.initial_guess.amplitude, config.initial_guess.width
    if config.grid.dimension == 1:
        return sample(lambda x: amplitude * np.exp(-((x / width) ** 2)), config.grid)
    return sample(lambda x1, x2: amplitude * np.exp(-(x1**2 + x2**2) / width**2), config.grid)


def _tail_exponent(result: SolveResult, config: SolveRunConfig) -> float | None:
    try:
        return fit_tail_exponent(result.profile, config.tail_window).exponent
    except PreconditionError as exc:
        logger.warning("tail fit skipped: %s", exc)
        return None


def _write(result: SolveResult, config: SolveRunConfig, out: Path, tail: float | None) -> None:
    x = coordinates(config.grid)
    values = result.profile.values
    axes = {"x": x} if config.grid.dimension == 1 else {"x1": x[0], "x2": x[1]}
    write_columns(out / "profile.csv", {**axes, "re_u": values.real, "im_u": values.imag})
    history = np.asarray(result.residual_history, dtype=float)
    write_columns(out / "residuals.csv", {"iteration": np.arange(1, history.size + 1), "residual": history})
    summary = {
        "converged": result.converged,
        "iterations": result.iterations_used,
        "final_residual": result.final_residual,
        "tail_exponent": tail,
        "stabilizing_factor": result.stabilizing_factors[-1] if result.stabilizing_factors else None,
    }
    write_json(out / "summary.json", summary, config)


def cmd_solve(config: SolveRunConfig, out: Path) -> int:
    """Iterate from a Gaussian guess; the centered profile is written even on failure.

    Raises:
        NotEllipticError: the symbol is not globally elliptic (witness in the message)
        ConvergenceError: no convergence within max_iterations, or divergence
    """
    symbol = config.symbol.to_symbol()
    settings = SolveConfig(
        grid=config.grid,
        initial_guess=_initial_guess(config),
        max_iterations=config.max_iterations,
        residual_tolerance=config.residual_tolerance,
        method=config.method,
        petviashvili_exponent=config.petviashvili_exponent,
        damping=config.damping,
    )
    try:
        result = solve(symbol, config.nonlinearity.to_nonlinearity(), settings)
    except ConvergenceError as exc:
        if exc.result is not None:
            _write(exc.result, config, out, None)
        raise

    result.profile = center_profile(result.profile)
    tail = _tail_exponent(result, config)
    _write(result, config, out, tail)
    print(
        f"converged={result.converged} iterations={result.iterations_used} "
        f"residual={result.final_residual:.3e} tail_exponent={tail if tail is None else f'{tail:.3f}'}"
    )
    if not result.converged:
        raise ConvergenceError(
            f"no convergence in {config.max_iterations} iterations (residual {result.final_residual:.3e})", result
        )
    return 0


def register_solve_commands(subparsers, parents):
    """Register the solve subcommand."""
    parser = subparsers.add_parser("solve", parents=parents, help="Solitary-wave profile by spectral iteration")
    parser.set_defaults(config_model=SolveRunConfig, handler=cmd_solve)
