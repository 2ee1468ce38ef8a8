"""Commutators of Fourier multipliers with weights, checked numerically.

Two families of checks live here:

- identity checks, which compare both sides of an exact commutator expansion
  and report the relative residual;
- boundedness probes, which evaluate a ratio of norms across a family of dilated
  Gaussians and call the family bounded when it neither spreads by more than a
  factor 10 nor grows monotonically.

All checks are one-dimensional: symbol derivatives come from derived_term.
The expansion constants used by prop32_check_1d are derived in
docs/COMMUTATOR_EXPANSIONS.md.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np
from numpy.polynomial import hermite_e

from polydecay.errors import DegenerateError, PreconditionError, RegimeError
from polydecay.grid import (
    GridField,
    GridSpec,
    bracket_weight,
    l2_norm,
    monomial_weight,
    sample,
    trusted_mask,
)
from polydecay.multiplier import (
    CutoffSpec,
    SobolevIndex,
    apply,
    cutoff_multiplier,
    l1_sobolev_norm,
    partial_derivative,
    smoothing_operator,
    weighted_sobolev_norm,
)
from polydecay.runtime import get_executor
from polydecay.symbols import HomogeneousTerm, SymbolDerivativeSpec, derived_term

logger = logging.getLogger(__name__)

DEFAULT_WIDTHS = (1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0)
SPREAD_LIMIT = 10.0
_FLOOR = float(np.finfo(float).tiny)


@dataclass(frozen=True)
class MultiIndex:
    """Nonnegative integer multi-index; |·| is the entry sum."""

    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(int(e) for e in self.entries))
        if any(e < 0 for e in self.entries):
            raise PreconditionError(f"multi-index entries must be nonnegative, got {self.entries}")

    @classmethod
    def of(cls, value: int | Sequence[int] | MultiIndex) -> MultiIndex:
        if isinstance(value, MultiIndex):
            return value
        if isinstance(value, int):
            return cls((value,))
        return cls(tuple(value))

    @property
    def order(self) -> int:
        return sum(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class IdentityReport:
    label: str
    lhs_norm: float
    rhs_norm: float
    residual_norm: float

    @property
    def relative_residual(self) -> float:
        return self.residual_norm / max(self.lhs_norm, _FLOOR)

    def passes(self, tolerance: float) -> bool:
        return self.relative_residual <= tolerance


def _report(label: str, lhs: GridField, rhs: GridField) -> IdentityReport:
    mask = trusted_mask(lhs.grid)
    report = IdentityReport(label, l2_norm(lhs, mask), l2_norm(rhs, mask), l2_norm(lhs - rhs, mask))
    logger.debug("%s: relative residual %.3e", label, report.relative_residual)
    return report


def _require_line(*objects: HomogeneousTerm | GridField) -> None:
    for obj in objects:
        dim = obj.dimension if isinstance(obj, HomogeneousTerm) else obj.grid.dimension
        if dim != 1:
            raise PreconditionError("commutator identities are implemented for n = 1 only")


# =============================================================================
# Test functions
# =============================================================================


def moment_free_gaussian(
    grid: GridSpec, width: float = 1.0, center: float = 0.0, order: int = 3
) -> GridField:
    """(-1)^j He_{2j}(y) e^{-y²/2} with y = (x - center)/width.

    Its transform is a multiple of ξ^{2j} e^{-(width·ξ)²/2}, so every symbol that is
    singular at ξ = 0 still maps it to a rapidly decaying function. order = 0 is the
    plain Gaussian.
    """
    if order < 0:
        raise PreconditionError(f"order must be nonnegative, got {order}")
    coefficients = np.zeros(2 * order + 1)
    coefficients[-1] = (-1) ** order

    def generator(x: np.ndarray) -> np.ndarray:
        y = (x - center) / width
        return hermite_e.hermeval(y, coefficients) * np.exp(-0.5 * y**2)

    return sample(generator, grid)


def dilated_gaussians(grid: GridSpec, widths: Sequence[float] = DEFAULT_WIDTHS) -> list[GridField]:
    """v_a(x) = e^{-(x/a)²/2} for every width a."""
    return [sample(lambda x, a=a: np.exp(-0.5 * (x / a) ** 2), grid) for a in widths]


# =============================================================================
# Identity checks
# =============================================================================


def prop33_check(q: HomogeneousTerm, rho: int | MultiIndex, v: GridField) -> IdentityReport:
    """x^ρ q(D)v against q(D)(x^ρ v) + Σ_{1<=σ<=ρ} C(ρ,σ)(-1)^σ (D^σ_ξ q)(D)(x^{ρ-σ}v).

    Raises:
        PreconditionError: q has order <= 0 or is not one-dimensional
        RegimeError: ρ >= m + n, where D^σ q stops being locally integrable
    """
    _require_line(q, v)
    rho = MultiIndex.of(rho).order
    m = q.order
    if m <= 0:
        raise PreconditionError(f"q must have positive order, got {m:g}")
    if rho >= m + 1:
        raise RegimeError(f"rho = {rho} violates |rho| < m + n = {m + 1:g}", "|rho| < m + n")

    lhs = apply(q, v) * monomial_weight(v.grid, rho)
    rhs = apply(q, v * monomial_weight(v.grid, rho))
    for sigma in range(1, rho + 1):
        term = derived_term(q, SymbolDerivativeSpec(sigma=sigma))
        weight = math.comb(rho, sigma) * (-1) ** sigma
        rhs = rhs + apply(term, v * monomial_weight(v.grid, rho - sigma)) * weight
    return _report(f"x^{rho} q(D) v, order {m:g}", lhs, rhs)


# (coefficient, gamma, gamma_tilde, beta_tilde, alpha_tilde) for each (alpha, beta)
_PROP32_EXPANSIONS: dict[tuple[int, int], tuple[tuple[complex, int, int, int, int], ...]] = {
    (0, 0): (),
    (1, 0): (),
    (2, 0): (),
    (1, 1): ((-1, 1, 1, 0, 0),),
    (2, 1): ((-1, 1, 1, 0, 1),),
    (2, 2): ((-2, 1, 1, 1, 1), (-2j, 1, 1, 0, 0), (1, 2, 2, 0, 0)),
}


def supported_prop32_indices() -> list[tuple[int, int]]:
    return sorted(_PROP32_EXPANSIONS)


def _x_beta_D_alpha(v: GridField, beta: int, alpha: int) -> GridField:
    # D = -i∂
    derived = partial_derivative(v, alpha) * (-1j) ** alpha
    return derived * monomial_weight(v.grid, beta) if beta else derived


def prop32_check_1d(p_term: HomogeneousTerm, alpha: int, beta: int, v: GridField) -> IdentityReport:
    """x^β p(D) D^α v against p(D)(x^β D^α v) plus the correction terms.

    Each correction is C·(ξ^γ̃ D^γ_ξ p)(D)(x^β̃ D^α̃ v) with γ̃ = γ and β̃ <= α̃ < α.

    Raises:
        PreconditionError: p has order < 1, or (alpha, beta) is not tabulated
    """
    _require_line(p_term, v)
    if p_term.order < 1:
        raise PreconditionError(f"p must have order >= 1, got {p_term.order:g}")
    key = (int(alpha), int(beta))
    if key not in _PROP32_EXPANSIONS:
        raise PreconditionError(
            f"(alpha, beta) = {key} unsupported; tabulated cases are {supported_prop32_indices()}"
        )

    lhs = apply(p_term, _x_beta_D_alpha(v, 0, alpha)) * monomial_weight(v.grid, beta)
    rhs = apply(p_term, _x_beta_D_alpha(v, beta, alpha))
    for coefficient, gamma, gamma_tilde, beta_t, alpha_t in _PROP32_EXPANSIONS[key]:
        symbol = derived_term(p_term, SymbolDerivativeSpec(gamma=gamma, gamma_tilde=gamma_tilde))
        rhs = rhs + apply(symbol, _x_beta_D_alpha(v, beta_t, alpha_t)) * coefficient
    return _report(f"x^{beta} p(D) D^{alpha} v, order {p_term.order:g}", lhs, rhs)


# =============================================================================
# Boundedness probes
# =============================================================================


@dataclass
class ProbeReport:
    """Ratio family across dilations; None marks a degenerate (zero) input."""

    label: str
    ratios: list[float | None]
    spread_limit: float = SPREAD_LIMIT
    notes: list[str] = field(default_factory=list)

    @property
    def valid(self) -> list[float]:
        return [r for r in self.ratios if r is not None]

    @property
    def spread(self) -> float:
        values = self.valid
        if not values or max(values) == 0:
            return 1.0
        low = min(values)
        return math.inf if low == 0 else max(values) / low

    @property
    def monotone_growth(self) -> bool:
        values = self.valid
        return len(values) > 1 and all(b > a for a, b in zip(values, values[1:]))

    @property
    def bounded(self) -> bool:
        return self.spread <= self.spread_limit and not self.monotone_growth


def _ratio_family(label: str, family: Sequence[GridField], ratio) -> ProbeReport:
    def safe(v: GridField) -> float | None:
        try:
            return ratio(v)
        except DegenerateError:
            return None

    ratios = list(get_executor().map(safe, family))
    report = ProbeReport(label, ratios)
    degenerate = [i for i, r in enumerate(ratios) if r is None]
    if degenerate:
        report.notes.append(f"degenerate inputs excluded: {degenerate}")
    logger.info("%s: spread %.3g, bounded=%s", label, report.spread, report.bounded)
    return report


def _nonzero(value: float, what: str) -> float:
    if value == 0:
        raise DegenerateError(f"{what} vanishes")
    return value


def lemma34_probe(
    q: HomogeneousTerm,
    s: float,
    grid: GridSpec | None = None,
    cutoff: CutoffSpec | None = None,
    family: Sequence[GridField] | None = None,
) -> ProbeReport:
    """‖H_{φ,q}v_a‖_{H^s} / ‖v_a‖_{H^s_1} across the dilated Gaussian family.

    Raises:
        RegimeError: order of q outside (-n/2, 0)
    """
    cutoff = cutoff or CutoffSpec()
    half = q.dimension / 2
    if not -half < q.order < 0:
        raise RegimeError(f"order {q.order:g} outside (-n/2, 0)", "-n/2 < mu < 0")
    if family is None:
        family = dilated_gaussians(grid or default_probe_grid())
    index = SobolevIndex(s=s)

    def ratio(v: GridField) -> float:
        denominator = _nonzero(l1_sobolev_norm(v, s), "||v||_{H^s_1}")
        return weighted_sobolev_norm(smoothing_operator(q, cutoff, v), index) / denominator

    return _ratio_family(f"smoothing operator, order {q.order:g}, s = {s:g}", family, ratio)


def lemma35_probe(
    q: HomogeneousTerm,
    r: float,
    s: float,
    mode: Literal["l1", "l2"] = "l2",
    grid: GridSpec | None = None,
    cutoff: CutoffSpec | None = None,
    family: Sequence[GridField] | None = None,
) -> ProbeReport:
    """‖[⟨x⟩^r, H_{φ,q}]v_a‖_{H^s} against ‖v_a‖_{H^s_1} (mode 'l1') or ‖v_a‖_{H^s} (mode 'l2').

    Raises:
        RegimeError: 'l1' needs μ - r > -n/2, 'l2' needs μ - r > 0, and 0 <= r < 1
    """
    cutoff = cutoff or CutoffSpec()
    if not 0 <= r < 1:
        raise RegimeError(f"r = {r:g} outside [0, 1)", "0 <= r < 1")
    gap = q.order - r
    half = q.dimension / 2
    if mode == "l1" and not gap > -half:
        raise RegimeError(f"mu - r = {gap:g} must exceed -n/2 = {-half:g}", "mu - r > -n/2")
    if mode == "l2" and not gap > 0:
        raise RegimeError(f"mu - r = {gap:g} must be positive", "mu - r > 0")
    if family is None:
        family = dilated_gaussians(grid or default_probe_grid())
    index = SobolevIndex(s=s)

    def ratio(v: GridField) -> float:
        if mode == "l1":
            denominator = _nonzero(l1_sobolev_norm(v, s), "||v||_{H^s_1}")
        else:
            denominator = _nonzero(weighted_sobolev_norm(v, index), "||v||_{H^s}")
        weight = bracket_weight(v.grid, r)
        commutator = cutoff_multiplier(q, cutoff, v) * weight - cutoff_multiplier(q, cutoff, v * weight)
        return weighted_sobolev_norm(commutator, index) / denominator

    return _ratio_family(f"commutator with <x>^{r:g}, order {q.order:g}, {mode}", family, ratio)


def default_probe_grid() -> GridSpec:
    """Box wide enough that the widest Gaussian and the low-frequency cutoff are resolved."""
    return GridSpec(half_length=2048.0, points=2**16)


def identity_grid() -> GridSpec:
    """Resolved grid for the moment-free family at unit width."""
    return GridSpec(half_length=32.0, points=512)