"""Exception hierarchy for polydecay.

Every error carries the CLI exit code it maps to, so the command layer can turn
any library failure into the documented exit-code contract without a lookup table.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Any

if TYPE_CHECKING:
    from polydecay.solver import SolveResult


class PolydecayError(Exception):
    """Base class for all polydecay errors."""

    exit_code = 1


class ConfigError(PolydecayError, ValueError):
    """Invalid configuration, unknown label or schema violation."""

    exit_code = 2


class PreconditionError(PolydecayError, ValueError):
    """An operation was called outside its documented domain."""

    exit_code = 3


class GridError(PreconditionError):
    """A sampled generator produced a non-finite value."""

    def __init__(self, message: str, node: tuple[int, ...], coordinates: tuple[float, ...]):
        super().__init__(message)
        self.node = node
        self.coordinates = coordinates


class NotEllipticError(PreconditionError):
    """The symbol fails the global ellipticity condition."""

    def __init__(self, message: str, witness: Any):
        super().__init__(message)
        self.witness = witness


class RegimeError(PreconditionError):
    """A parameter regime inequality is violated; the message names it."""

    def __init__(self, message: str, inequality: str):
        super().__init__(message)
        self.inequality = inequality


class DegenerateError(PreconditionError):
    """A normalizing quantity vanished (zero field, zero norm)."""


class ConvergenceError(PolydecayError, RuntimeError):
    """An iteration failed to converge; the partial result is attached."""

    exit_code = 4

    def __init__(self, message: str, result: SolveResult | None = None):
        super().__init__(message)
        self.result = result


class SolverDivergedError(ConvergenceError):
    """The residual grew an order of magnitude above its running minimum."""


class ToleranceError(PolydecayError):
    """A verification suite finished but some check is out of tolerance."""

    exit_code = 5
