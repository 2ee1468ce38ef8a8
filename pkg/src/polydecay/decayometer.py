"""Algebraic decay of solitary waves: tail fits, weighted-norm scans and the decay-law report.

Pointwise and weighted-L² checks are kept apart. The pointwise tail is expected to
behave like |x|^{-(m+n)}; the weighted norm ‖⟨x⟩^t u‖ is finite for t < m + n/2.
Both are probed on the trusted region |x| <= L/2 of a periodic grid, where
periodization of the algebraic tail is negligible.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Literal, Sequence

import numpy as np
from pydantic import ValidationError
from scipy.stats import linregress

from polydecay.errors import PreconditionError
from polydecay.grid import (
    GridField,
    GridSpec,
    bracket_weight,
    l2_norm,
    monomial_weight,
    radius,
    sample,
    trusted_mask,
)
from polydecay.multiplier import apply_bracket, partial_derivative
from polydecay.runtime import get_executor
from polydecay.symbols import PolyhomogeneousSymbol, singularity_index

logger = logging.getLogger(__name__)

Source = Callable[..., np.ndarray] | GridField
Verdict = Literal["bounded", "unbounded", "undetermined"]

DEFAULT_EPSILON = 0.25
BOUNDED_SLOPE = 0.1
NOT_ALGEBRAIC_SPREAD = 0.25


@dataclass(frozen=True)
class DecayFit:
    exponent: float
    log_amplitude: float
    r_squared: float
    window: tuple[float, float]
    radii: np.ndarray = field(repr=False, default_factory=lambda: np.empty(0))
    amplitudes: np.ndarray = field(repr=False, default_factory=lambda: np.empty(0))


def _radial_profile_callable(u: Callable, window: tuple[float, float], dimension: int, samples: int):
    r = np.geomspace(window[0], window[1], samples)
    if dimension == 1:
        a = 0.5 * (np.abs(u(r)) + np.abs(u(-r)))
        return r, a
    angles = np.linspace(0.0, 2.0 * np.pi, 64, endpoint=False)
    rr, aa = np.meshgrid(r, angles, indexing="ij")
    a = np.mean(np.abs(u(rr * np.cos(aa), rr * np.sin(aa))), axis=1)
    return r, a


def _radial_profile_field(u: GridField, window: tuple[float, float]):
    grid = u.grid
    if window[1] > grid.half_length / 2 + 1e-12:
        raise PreconditionError(
            f"window upper end {window[1]:g} exceeds the trusted region L/2 = {grid.half_length / 2:g}"
        )
    if grid.dimension == 1:
        x = radius(grid)
        origin = grid.points // 2
        right = np.arange(origin, grid.points)
        r = x[right]
        left = 2 * origin - right
        a = 0.5 * (np.abs(u.values[right]) + np.abs(u.values[left]))
        keep = (r >= window[0]) & (r <= window[1])
        return r[keep], a[keep]
    # circle averages over thin annuli, one lattice spacing wide
    rad = radius(grid).ravel()
    mag = np.abs(u.values).ravel()
    edges = np.arange(window[0], window[1] + grid.spacing, grid.spacing)
    index = np.digitize(rad, edges)
    r, a = [], []
    for i in range(1, len(edges)):
        shell = index == i
        if shell.any():
            r.append(rad[shell].mean())
            a.append(mag[shell].mean())
    return np.asarray(r), np.asarray(a)


def fit_tail_exponent(
    u: Source,
    window: tuple[float, float],
    dimension: int = 1,
    samples: int = 128,
) -> DecayFit:
    """Least-squares slope of log a(r) against log r over the window.

    a(r) is the mean of |u| over the sphere of radius r. For grid fields the window
    must lie inside the trusted region.

    Raises:
        PreconditionError: a sampled tail value is not positive
    """
    lo, hi = window
    if not 1 <= lo < hi:
        raise PreconditionError(f"window must satisfy 1 <= x_min < x_max, got {window}")
    if isinstance(u, GridField):
        r, a = _radial_profile_field(u, window)
    else:
        r, a = _radial_profile_callable(u, window, dimension, samples)
    if r.size < 2:
        raise PreconditionError(f"window {window} holds fewer than two samples")
    if np.any(~(a > 0)):
        raise PreconditionError("nonpositive tail samples: the algebraic decay model does not apply")
    fit = linregress(np.log(r), np.log(a))
    return DecayFit(
        exponent=-float(fit.slope),
        log_amplitude=float(fit.intercept),
        r_squared=float(fit.rvalue**2),
        window=(float(lo), float(hi)),
        radii=r,
        amplitudes=a,
    )


@dataclass(frozen=True)
class DecayClassification:
    fits: list[DecayFit]
    algebraic: bool

    @property
    def label(self) -> str:
        return "algebraic" if self.algebraic else "not algebraic"


def classify_decay(
    u: Source, windows: Sequence[tuple[float, float]], dimension: int = 1
) -> DecayClassification:
    """Fit several windows; flag 'not algebraic' when the exponents spread by more than 25 %."""
    fits = [fit_tail_exponent(u, w, dimension) for w in windows]
    exponents = np.array([f.exponent for f in fits])
    spread = (exponents.max() - exponents.min()) / max(abs(exponents).min(), 1e-12)
    return DecayClassification(fits, bool(spread <= NOT_ALGEBRAIC_SPREAD))


# =============================================================================
# Predictions
# =============================================================================


@dataclass(frozen=True)
class DecayPrediction:
    singularity_index: float
    dimension: int
    pointwise_exponent: float
    weight_threshold: float
    critical_integer: int
    hypothesis_holds: bool


def critical_integer(threshold: float) -> int:
    """max{j ∈ ℕ : j < threshold}."""
    nearest = round(threshold)
    if abs(threshold - nearest) < 1e-12:
        return int(nearest) - 1
    return math.floor(threshold)


def predicted_rates(p: PolyhomogeneousSymbol, n: int | None = None) -> DecayPrediction | None:
    """Pointwise rate m+n, weight threshold m+n/2 and k_cr; None for polynomial symbols."""
    n = p.dimension if n is None else n
    m = singularity_index(p)
    if m is None:
        logger.info("polynomial symbol: exponential-decay regime, no algebraic prediction")
        return None
    holds = math.floor(m) > n / 2
    if not holds:
        logger.warning(
            "[m] = %d <= n/2 = %g: hypothesis of the decay law fails, rates are indicative only",
            math.floor(m),
            n / 2,
        )
    threshold = m + n / 2
    return DecayPrediction(m, n, m + n, threshold, critical_integer(threshold), holds)


# =============================================================================
# Weighted-norm scans
# =============================================================================


@dataclass
class NormScan:
    weights: list[float]
    lengths: list[float]
    table: dict[tuple[float, float], float]
    growth_slopes: dict[float, float | None]
    notes: list[str] = field(default_factory=list)


def _apply_chain(u: GridField, transform: Callable[[GridField], GridField] | None, s: float) -> GridField:
    v = transform(u) if transform is not None else u
    return apply_bracket(v, s)


def _norms_for_field(v: GridField, weights: Sequence[float], radius_limit: float) -> list[float]:
    mask = trusted_mask(v.grid, radius_limit)
    return [l2_norm(v * bracket_weight(v.grid, t), mask) for t in weights]


def _slope(lengths: Sequence[float], norms: Sequence[float]) -> float | None:
    values = np.asarray(norms)
    if np.any(values <= 0) or len(values) < 2:
        return None
    return float(linregress(np.log(lengths), np.log(values)).slope)


def _doubled_box(base_grid: GridSpec, L: float) -> GridSpec:
    try:
        grid = base_grid.with_length(2 * L)
    except ValidationError as exc:
        raise PreconditionError(f"length {L:g} needs a non-power-of-two grid at the base spacing") from exc
    if abs(grid.spacing - base_grid.spacing) > 1e-9 * base_grid.spacing:
        raise PreconditionError(f"length {L:g} does not keep the base spacing {base_grid.spacing:g}")
    return grid


def weighted_norm_scan(
    u: Source,
    weights: Sequence[float],
    lengths: Sequence[float],
    s: float = 0.0,
    base_grid: GridSpec | None = None,
    transform: Callable[[GridField], GridField] | None = None,
) -> NormScan:
    """Truncated norms ‖⟨x⟩^t ⟨D⟩^s T(u)‖ over |x| <= L for every (t, L) pair.

    A pointwise source is sampled on the doubled box [-2L, 2L) with the spacing of
    base_grid, so the lengths must differ by powers of two; the norm is taken over
    |x| <= L. A grid field is transformed once and truncated at each L <= L_grid/2.
    Pairs run on the shared worker pool and are assembled in input order.
    """
    lengths = [float(L) for L in lengths]
    weights = [float(t) for t in weights]
    if any(b <= a for a, b in zip(lengths, lengths[1:])):
        raise PreconditionError("lengths must be strictly increasing")

    if isinstance(u, GridField):
        if lengths[-1] > u.grid.half_length / 2 + 1e-12:
            raise PreconditionError("truncation radii must stay within half the field's box")
        v = _apply_chain(u, transform, s)
        rows = [_norms_for_field(v, weights, L) for L in lengths]
    else:
        if base_grid is None:
            raise PreconditionError("a pointwise source needs base_grid to fix the spacing")

        grids = [_doubled_box(base_grid, L) for L in lengths]

        def job(pair: tuple[float, GridSpec]) -> list[float]:
            L, grid = pair
            return _norms_for_field(_apply_chain(sample(u, grid), transform, s), weights, L)

        rows = list(get_executor().map(job, zip(lengths, grids)))

    table = {(t, L): row[i] for L, row in zip(lengths, rows) for i, t in enumerate(weights)}
    slopes: dict[float, float | None] = {}
    notes: list[str] = []
    for i, t in enumerate(weights):
        slope = _slope(lengths, [row[i] for row in rows])
        slopes[t] = slope
        if slope is None:
            notes.append(f"t = {t:g}: norms vanish, growth slope undefined")
    return NormScan(weights, lengths, table, slopes, notes)


# =============================================================================
# Decay-law report
# =============================================================================


@dataclass(frozen=True)
class EstimateEntry:
    alpha: int
    beta: int
    weight: float
    slope: float | None
    verdict: Verdict


@dataclass
class TheoremReport:
    prediction: DecayPrediction
    epsilon: float
    s: float
    lengths: list[float]
    entries: list[EstimateEntry]
    tail_fit: DecayFit
    tail_tolerance: float
    borderline_slope: float | None = None

    @property
    def tail_consistent(self) -> bool:
        return abs(self.tail_fit.exponent - self.prediction.pointwise_exponent) <= self.tail_tolerance

    @property
    def all_bounded(self) -> bool:
        return all(e.verdict == "bounded" for e in self.entries)


def _verdict(slope: float | None, bounded_slope: float) -> Verdict:
    if slope is None:
        return "undetermined"
    return "bounded" if slope <= bounded_slope else "unbounded"


def theorem_report(
    p: PolyhomogeneousSymbol,
    u: Source,
    max_order: int = 2,
    epsilon: float = DEFAULT_EPSILON,
    s: float = 0.0,
    lengths: Sequence[float] = (50.0, 100.0, 200.0, 400.0),
    base_grid: GridSpec | None = None,
    window: tuple[float, float] = (10.0, 40.0),
    tail_tolerance: float = 0.05,
    bounded_slope: float = BOUNDED_SLOPE,
) -> TheoremReport:
    """Check ‖⟨x⟩^{m+n/2-ε} x^β ∂^α u‖_s for |β| <= |α| <= max_order and the pointwise tail.

    Each (α, β) pair is scanned across lengths; a growth slope at most bounded_slope
    gives the verdict 'bounded'. The borderline weight t = m + n/2 is scanned too and
    its slope reported without a verdict.
    """
    if not 0 < epsilon < 1:
        raise PreconditionError(f"epsilon must lie in (0, 1), got {epsilon}")
    if max_order > 2 or max_order < 0:
        raise PreconditionError("max_order must be 0, 1 or 2")
    prediction = predicted_rates(p)
    if prediction is None:
        raise PreconditionError("polynomial symbol: no algebraic decay law to check")
    weight = prediction.weight_threshold - epsilon
    if base_grid is None and not isinstance(u, GridField):
        base_grid = GridSpec(dimension=p.dimension, half_length=2 * lengths[0], points=2**13)

    entries = []
    for alpha in range(max_order + 1):
        for beta in range(alpha + 1):

            def transform(f: GridField, alpha=alpha, beta=beta) -> GridField:
                derived = partial_derivative(f, alpha)
                return derived * monomial_weight(f.grid, beta) if beta else derived

            scan = weighted_norm_scan(u, [weight], lengths, s, base_grid, transform)
            slope = scan.growth_slopes[weight]
            entries.append(EstimateEntry(alpha, beta, weight, slope, _verdict(slope, bounded_slope)))
            logger.debug("alpha=%d beta=%d slope=%s", alpha, beta, slope)

    borderline = weighted_norm_scan(u, [prediction.weight_threshold], lengths, s, base_grid)
    tail = fit_tail_exponent(u, window, p.dimension)
    report = TheoremReport(
        prediction=prediction,
        epsilon=epsilon,
        s=s,
        lengths=list(lengths),
        entries=entries,
        tail_fit=tail,
        tail_tolerance=tail_tolerance,
        borderline_slope=borderline.growth_slopes[prediction.weight_threshold],
    )
    logger.info(
        "decay report: %d/%d bounded, tail exponent %.3f (predicted %.3f)",
        sum(e.verdict == "bounded" for e in entries),
        len(entries),
        tail.exponent,
        prediction.pointwise_exponent,
    )
    return report
