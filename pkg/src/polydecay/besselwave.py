"""Half-integer modified Bessel functions and the exact solitary waves built from them.

The transform pair F((1+x²)^{-λ})(ξ) = (2√π/Γ(λ))·(|ξ|/2)^{λ-1/2}·K_{λ-1/2}(|ξ|)
together with K_{k-1/2}(x) = Q_{k-1}(1/x)·K_{1/2}(x) shows that
u(x) = 1/(1+x²) solves p_k(D)u = A_k u^k for an explicit polyhomogeneous p_k
whose coefficients are those of Q_{k-1}.
"""

from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import quad

from polydecay.errors import ConfigError, DegenerateError, NotEllipticError, PreconditionError
from polydecay.grid import GridField, GridSpec, l2_norm, sample, trusted_mask
from polydecay.multiplier import apply
from polydecay.solver import Nonlinearity
from polydecay.symbols import (
    PolyhomogeneousSymbol,
    benjamin_ono_symbol,
    check_ellipticity,
    symbol_from_coefficients,
)

logger = logging.getLogger(__name__)

# e^{-745} is the smallest positive double
_UNDERFLOW_EXPONENT = 745.0


@dataclass(frozen=True)
class HalfIntegerOrder:
    """ν = numerator/2 with an odd numerator."""

    numerator: int

    def __post_init__(self) -> None:
        if self.numerator % 2 == 0:
            raise PreconditionError(f"half-integer order needs an odd numerator, got {self.numerator}")

    @classmethod
    def of(cls, nu: float | HalfIntegerOrder) -> HalfIntegerOrder:
        if isinstance(nu, HalfIntegerOrder):
            return nu
        doubled = 2 * nu
        if abs(doubled - round(doubled)) > 1e-12:
            raise PreconditionError(f"order {nu} is not a half integer")
        return cls(int(round(doubled)))

    @property
    def nu(self) -> float:
        return self.numerator / 2


def _positive(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise PreconditionError("modified Bessel functions K_nu are evaluated at x > 0 only")
    return x


def _as_output(values: np.ndarray):
    return float(values) if np.ndim(values) == 0 else values


def bessel_k_half(nu: float | HalfIntegerOrder, x):
    """K_ν(x) for half-integer ν by upward recurrence from K_{±1/2}.

    K_{1/2}(x) = √(π/(2x))·e^{-x}, K_ν = K_{-ν} and
    K_{ν+1}(x) = (2ν/x)K_ν(x) + K_{ν-1}(x).
    """
    order = HalfIntegerOrder.of(nu)
    x = _positive(x)
    base = np.sqrt(np.pi / (2.0 * x)) * np.exp(-x)
    target = abs(order.numerator)
    previous, current = base, base  # K_{-1/2}, K_{1/2}
    doubled = 1
    while doubled < target:
        previous, current = current, (doubled / x) * current + previous
        doubled += 2
    return _as_output(current)


def bessel_k_quadrature(nu: float, x):
    """K_ν(x) = ∫_0^∞ e^{-x cosh t} cosh(νt) dt by adaptive quadrature (oracle).

    The integrand is taken in log space and the range is cut where
    x(cosh t - 1) reaches 745, beyond which it underflows relative to e^{-x}.
    """
    x = _positive(x)

    def single(point: float) -> float:
        def integrand(t: float) -> float:
            exponent = -point * math.cosh(t)
            return 0.5 * (math.exp(nu * t + exponent) + math.exp(exponent - nu * t))

        upper = math.acosh(1.0 + _UNDERFLOW_EXPONENT / point)
        value, _ = quad(integrand, 0.0, upper, epsabs=0.0, epsrel=1e-13, limit=400)
        return value

    return _as_output(np.vectorize(single, otypes=[float])(x))


def bessel_polynomial(k: int) -> list[int]:
    """Integer coefficients (ascending in y) of Q_{k-1} with K_{k-1/2}(x) = Q_{k-1}(1/x)·K_{1/2}(x)."""
    if k < 1:
        raise PreconditionError(f"k must be >= 1, got {k}")
    previous, current = [1], [1]  # Q for K_{-1/2}, K_{1/2}
    doubled = 1
    for _ in range(k - 1):
        shifted = [0] + [doubled * c for c in current]
        padded = previous + [0] * (len(shifted) - len(previous))
        previous, current = current, [a + b for a, b in zip(shifted, padded)]
        doubled += 2
    return current


def ft_power_law(lam: int, xi):
    """F((1+x²)^{-λ})(ξ) for integer λ >= 1 and ξ != 0, via the half-integer Bessel closed form."""
    if isinstance(lam, bool) or int(lam) != lam or lam < 1:
        raise PreconditionError(f"only integer lambda >= 1 is supported, got {lam}")
    lam = int(lam)
    xi = np.asarray(xi, dtype=float)
    if np.any(xi == 0):
        raise PreconditionError("ft_power_law is evaluated at xi != 0")
    r = np.abs(xi)
    gamma = math.factorial(lam - 1)
    values = (2.0 * math.sqrt(math.pi) / gamma) * (r / 2.0) ** (lam - 0.5) * bessel_k_half(lam - 0.5, r)
    return _as_output(np.asarray(values))


# =============================================================================
# Exact solutions
# =============================================================================


@dataclass(frozen=True)
class ExactSolutionCase:
    label: str
    symbol: PolyhomogeneousSymbol
    nonlinearity: Nonlinearity
    solution: Callable[[np.ndarray], np.ndarray]
    predicted_pointwise_decay: float
    forcing: Callable[[np.ndarray], np.ndarray] | None = None
    description: str = ""


def _lorentzian(x: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + x**2)


def benjamin_ono_case(c: float = 1.0) -> ExactSolutionCase:
    """(|D| + c)u = u² solved by u = 2c/(1+c²x²)."""
    if c <= 0:
        raise PreconditionError(f"wave speed must be positive, got {c}")
    label = "benjamin-ono" if c == 1.0 else f"benjamin-ono:c={c:g}"
    return ExactSolutionCase(
        label=label,
        symbol=benjamin_ono_symbol(c),
        nonlinearity=Nonlinearity.monomial_of(2),
        solution=lambda x: 2.0 * c / (1.0 + (c * x) ** 2),
        predicted_pointwise_decay=2.0,
        description=f"Benjamin-Ono solitary wave, c = {c:g}",
    )


def generate_example(k: int) -> ExactSolutionCase:
    """Case p_k(D)u = A_k u^k with u = 1/(1+x²).

    p_k(ξ) = Σ_j q_j |ξ|^{k-1-j} where Q_{k-1}(y) = Σ_j q_j y^j, and
    A_k = 2^{k-1}(k-1)!, from matching the transform of u^k against that of u.
    """
    if k < 2:
        raise PreconditionError(f"generated examples need k >= 2, got {k}")
    q = bessel_polynomial(k)
    symbol = symbol_from_coefficients(list(reversed(q)))
    amplitude = 2 ** (k - 1) * math.factorial(k - 1)
    return ExactSolutionCase(
        label=f"generated-{k}",
        symbol=symbol,
        nonlinearity=Nonlinearity.monomial_of(k, amplitude),
        solution=_lorentzian,
        predicted_pointwise_decay=2.0,
        description=f"order-{k - 1} symbol with nonlinearity {amplitude}u^{k}",
    )


def cubic_case() -> ExactSolutionCase:
    """(D² + 3|D| + 3)u = 8u³ solved by u = 1/(1+x²)."""
    case = generate_example(3)
    return ExactSolutionCase(
        label="cubic",
        symbol=case.symbol,
        nonlinearity=case.nonlinearity,
        solution=case.solution,
        predicted_pointwise_decay=2.0,
        description="D²u + 3|D|u + 3u = 8u³",
    )


def catalog(wave_speed: float = 1.0) -> list[ExactSolutionCase]:
    """The two closed-form cases: Benjamin-Ono and the cubic equation."""
    return [benjamin_ono_case(wave_speed), cubic_case()]


_BO_SPEED = re.compile(r"^benjamin-ono:c=(?P<c>[0-9.eE+-]+)$")
_GENERATED = re.compile(r"^generated-(?P<k>\d+)$")


def lookup(label: str) -> ExactSolutionCase:
    """Resolve 'benjamin-ono', 'benjamin-ono:c=<c>', 'cubic' or 'generated-<k>'.

    Raises:
        ConfigError: unknown label
    """
    if label == "benjamin-ono":
        return benjamin_ono_case()
    if label == "cubic":
        return cubic_case()
    if match := _BO_SPEED.match(label):
        try:
            return benjamin_ono_case(float(match["c"]))
        except ValueError as exc:
            raise ConfigError(f"bad wave speed in label {label!r}") from exc
    if match := _GENERATED.match(label):
        k = int(match["k"])
        if k >= 2:
            return generate_example(k)
    raise ConfigError(f"unknown case label {label!r}")


def verify_exact(case: ExactSolutionCase, grid: GridSpec, trusted_radius: float | None = None) -> float:
    """Relative L² residual of p(D)u - f - F(u) on the trusted region |x| <= L/2.

    The periodic images of the |x|^{-2} tail leave an almost constant defect of
    size O(L^-2); pass a fixed trusted_radius to compare boxes on the same window.

    Raises:
        NotEllipticError: the case symbol is not globally elliptic
        DegenerateError: the solution vanishes on the trusted region
    """
    report = check_ellipticity(case.symbol)
    if not report.elliptic:
        raise NotEllipticError(f"case {case.label!r} has a non-elliptic symbol", report.witness)
    u = sample(case.solution, grid)
    defect: GridField = apply(case.symbol, u) - case.nonlinearity(u)
    if case.forcing is not None:
        defect = defect - sample(case.forcing, grid)
    mask = trusted_mask(grid, trusted_radius)
    scale = l2_norm(u, mask)
    if scale == 0:
        raise DegenerateError(f"case {case.label!r}: solution has zero norm on the trusted region")
    value = l2_norm(defect, mask) / scale
    logger.info("%s on L=%g, N=%d: relative residual %.3e", case.label, grid.half_length, grid.points, value)
    return value
