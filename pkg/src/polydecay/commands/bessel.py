"""bessel-check: recurrence, closed forms, quadrature oracle and the power-law transform."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numpy.polynomial import polynomial

from polydecay.besselwave import bessel_k_half, bessel_k_quadrature, bessel_polynomial, ft_power_law
from polydecay.config import BesselCheckConfig
from polydecay.errors import ConfigError, ToleranceError
from polydecay.grid import forward_transform, frequencies, sample
from polydecay.reports import write_columns, write_json

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Check:
    name: str
    error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.error <= self.tolerance


def _relative(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b) / np.abs(b)))


def bessel_checks(config: BesselCheckConfig) -> tuple[list[Check], np.ndarray, dict[str, np.ndarray]]:
    x = np.linspace(config.x_min, config.x_max, config.samples)
    values = {f"K_{k - 0.5:g}": bessel_k_half(k - 0.5, x) for k in range(0, config.max_k + 2)}
    checks = []
    for k in range(1, config.max_k + 1):
        nu = k - 0.5
        lhs = bessel_k_half(nu + 1, x)
        rhs = (2 * nu / x) * bessel_k_half(nu, x) + bessel_k_half(nu - 1, x)
        checks.append(Check(f"recurrence nu={nu:g}", _relative(rhs, lhs), config.tolerance))
        closed = polynomial.polyval(1.0 / x, bessel_polynomial(k)) * bessel_k_half(0.5, x)
        checks.append(Check(f"closed form k={k}", _relative(closed, bessel_k_half(nu, x)), config.tolerance))
    checks.append(
        Check("K_1/2 vs quadrature", _relative(bessel_k_half(0.5, x), bessel_k_quadrature(0.5, x)), config.quadrature_tolerance)
    )

    grid = config.grid
    xi = frequencies(grid)
    band = (np.abs(xi) <= config.transform_band) & (xi != 0)
    discrete = forward_transform(sample(lambda s: 1.0 / (1.0 + s**2), grid)).values[band].real
    exact = ft_power_law(1, xi[band])
    checks.append(
        Check(
            "transform of 1/(1+x^2)",
            float(np.max(np.abs(discrete - exact))),
            config.transform_tolerance,
        )
    )
    return checks, x, values


def cmd_bessel_check(config: BesselCheckConfig, out: Path) -> int:
    """Run the Bessel suite; values of K_{k-1/2} are written as plot data.

    Raises:
        ConfigError: a two-dimensional grid was configured
        ToleranceError: some check exceeds its tolerance
    """
    if config.grid.dimension != 1:
        raise ConfigError("the transform check runs on a one-dimensional grid")
    checks, x, values = bessel_checks(config)
    write_columns(out / "bessel_values.csv", {"x": x, **values})
    write_json(
        out / "bessel_check.json",
        {"checks": [{"name": c.name, "error": c.error, "tolerance": c.tolerance, "passed": c.passed} for c in checks]},
        config,
    )
    for c in checks:
        print(f"{c.name:<28} {c.error:.3e} (tol {c.tolerance:g}) {'pass' if c.passed else 'FAIL'}")
    failed = [c.name for c in checks if not c.passed]
    if failed:
        raise ToleranceError("out of tolerance: " + ", ".join(failed))
    return 0


def register_bessel_commands(subparsers, parents):
    """Register the bessel-check subcommand."""
    parser = subparsers.add_parser("bessel-check", parents=parents, help="Half-integer Bessel identities")
    parser.set_defaults(config_model=BesselCheckConfig, handler=cmd_bessel_check)
