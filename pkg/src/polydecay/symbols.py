"""Polyhomogeneous symbols p(ξ) = p0 + Σ p_{m_j}(ξ) and their closed-form calculus.

In one dimension a positively homogeneous function of order m is fixed by its two
values on the unit sphere {-1, +1}: q(ξ) = c_plus·ξ^m for ξ > 0 and
c_minus·(-ξ)^m for ξ < 0. In two dimensions only radial profiles a·|ξ|^m are
represented, stored with c_plus == c_minus == a.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from scipy.optimize import brentq

from polydecay.errors import PreconditionError

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-9
SHELL_EXPONENTS = (-20, 20)

_ORDER_DIGITS = 12


def _split(xi, dimension: int) -> tuple[np.ndarray, np.ndarray]:
    """Return (|ξ|, direction) where direction is +1/-1 in 1-D and +1 in 2-D.

    In 2-D points are passed as a tuple (xi1, xi2); any array is read as radii.
    """
    if dimension == 1:
        xi = np.asarray(xi, dtype=float)
        return np.abs(xi), np.where(xi < 0, -1.0, 1.0)
    if isinstance(xi, tuple):
        r = np.hypot(np.asarray(xi[0], dtype=float), np.asarray(xi[1], dtype=float))
    else:
        r = np.abs(np.asarray(xi, dtype=float))
    return r, np.ones_like(r)


def _scalar_or_array(values: np.ndarray):
    return complex(values) if np.ndim(values) == 0 else values


def _is_integer(value: float) -> bool:
    return abs(value - round(value)) < 1e-12


@dataclass(frozen=True)
class HomogeneousTerm:
    """Positively homogeneous symbol of a given order."""

    order: float
    c_plus: complex
    c_minus: complex
    dimension: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "order", float(self.order))
        object.__setattr__(self, "c_plus", complex(self.c_plus))
        object.__setattr__(self, "c_minus", complex(self.c_minus))
        if self.dimension not in (1, 2):
            raise PreconditionError(f"dimension must be 1 or 2, got {self.dimension}")
        if self.dimension == 2 and self.c_plus != self.c_minus:
            raise PreconditionError("2-D terms are radial: c_plus must equal c_minus")

    @classmethod
    def radial(cls, order: float, coeff: complex, dimension: int = 2) -> HomogeneousTerm:
        """a·|ξ|^m."""
        return cls(order, coeff, coeff, dimension)

    @property
    def is_zero(self) -> bool:
        return self.c_plus == 0 and self.c_minus == 0

    @property
    def is_polynomial(self) -> bool:
        if self.dimension == 2:
            return self.is_zero or (
                self.order >= 0 and _is_integer(self.order) and round(self.order) % 2 == 0
            )
        if self.is_zero:
            return True
        if self.order < 0 or not _is_integer(self.order):
            return False
        parity = (-1) ** int(round(self.order))
        return bool(np.isclose(self.c_minus, parity * self.c_plus, rtol=1e-12, atol=0.0))

    def origin_value(self) -> complex:
        """Value assigned at ξ = 0: 0 for positive order, the sphere mean at order 0."""
        if self.order > 0:
            return 0j
        if self.order == 0:
            return (self.c_plus + self.c_minus) / 2
        return complex(np.inf) if not self.is_zero else 0j

    def evaluate(self, xi):
        r, direction = _split(xi, self.dimension)
        coeff = np.where(direction > 0, self.c_plus, self.c_minus)
        with np.errstate(divide="ignore", invalid="ignore"):
            power = np.exp(self.order * np.log(np.where(r > 0, r, 1.0)))
        values = np.where(r > 0, coeff * power, self.origin_value())
        return _scalar_or_array(values)

    __call__ = evaluate

    def scaled(self, factor: complex) -> HomogeneousTerm:
        return HomogeneousTerm(self.order, factor * self.c_plus, factor * self.c_minus, self.dimension)

    def __mul__(self, other: HomogeneousTerm) -> HomogeneousTerm:
        if not isinstance(other, HomogeneousTerm):
            return self.scaled(other)
        if other.dimension != self.dimension:
            raise PreconditionError("cannot multiply terms of different dimension")
        return HomogeneousTerm(
            self.order + other.order,
            self.c_plus * other.c_plus,
            self.c_minus * other.c_minus,
            self.dimension,
        )

    __rmul__ = scaled


@dataclass(frozen=True)
class PolyhomogeneousSymbol:
    """p(ξ) = p0 + Σ_j p_{m_j}(ξ) with 0 < m_1 < ... < m_h."""

    p0: complex
    terms: tuple[HomogeneousTerm, ...] = ()
    dimension: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "p0", complex(self.p0))
        object.__setattr__(self, "terms", tuple(self.terms))
        previous = 0.0
        for term in self.terms:
            if term.dimension != self.dimension:
                raise PreconditionError("term dimension does not match the symbol")
            if term.order <= previous:
                raise PreconditionError(
                    f"term orders must be positive and strictly increasing, got {term.order} after {previous}"
                )
            previous = term.order

    @property
    def order(self) -> float:
        """Top order M (0 for a constant symbol)."""
        return self.terms[-1].order if self.terms else 0.0

    def evaluate(self, xi):
        r, _ = _split(xi, self.dimension)
        total = np.full(np.shape(r), self.p0, dtype=complex)
        for term in self.terms:
            total = total + np.asarray(term.evaluate(xi))
        return _scalar_or_array(total)

    __call__ = evaluate

    def __mul__(self, other: PolyhomogeneousSymbol) -> PolyhomogeneousSymbol:
        if not isinstance(other, PolyhomogeneousSymbol):
            return PolyhomogeneousSymbol(
                other * self.p0, tuple(t.scaled(other) for t in self.terms), self.dimension
            )
        if other.dimension != self.dimension:
            raise PreconditionError("cannot multiply symbols of different dimension")
        products = [t.scaled(other.p0) for t in self.terms]
        products += [t.scaled(self.p0) for t in other.terms]
        products += [a * b for a in self.terms for b in other.terms]
        return PolyhomogeneousSymbol(self.p0 * other.p0, merge_terms(products), self.dimension)


def merge_terms(terms: list[HomogeneousTerm]) -> tuple[HomogeneousTerm, ...]:
    """Sum terms of equal order, drop vanishing ones, sort by order."""
    merged: dict[float, HomogeneousTerm] = {}
    for term in terms:
        key = round(term.order, _ORDER_DIGITS)
        if key in merged:
            prev = merged[key]
            term = HomogeneousTerm(key, prev.c_plus + term.c_plus, prev.c_minus + term.c_minus, term.dimension)
        merged[key] = term
    return tuple(merged[k] for k in sorted(merged) if not merged[k].is_zero)


# =============================================================================
# Factories
# =============================================================================


def power_term(order: float, coeff: complex = 1.0, dimension: int = 1) -> HomogeneousTerm:
    """coeff·|ξ|^order."""
    return HomogeneousTerm(order, coeff, coeff, dimension)


def polynomial_term(order: int, coeff: complex = 1.0) -> HomogeneousTerm:
    """coeff·ξ^order in one dimension."""
    return HomogeneousTerm(order, coeff, coeff * (-1) ** order, 1)


def hilbert_symbol() -> HomogeneousTerm:
    """Hilbert transform -i·sgn ξ."""
    return HomogeneousTerm(0.0, -1j, 1j, 1)


def derivative_symbol(alpha: int) -> HomogeneousTerm:
    """(iξ)^α, the symbol of ∂^α in one dimension."""
    return HomogeneousTerm(alpha, 1j**alpha, (1j**alpha) * (-1) ** alpha, 1)


def benjamin_ono_symbol(c: float = 1.0) -> PolyhomogeneousSymbol:
    """|ξ| + c."""
    return PolyhomogeneousSymbol(c, (power_term(1.0),))


def symbol_from_coefficients(coefficients: list[complex], dimension: int = 1) -> PolyhomogeneousSymbol:
    """Σ_j coefficients[j]·|ξ|^j, with coefficients[0] the constant p0."""
    terms = [power_term(j, c, dimension) for j, c in enumerate(coefficients) if j > 0 and c != 0]
    return PolyhomogeneousSymbol(coefficients[0], tuple(terms), dimension)


# =============================================================================
# Classification
# =============================================================================


def singularity_index(p: PolyhomogeneousSymbol) -> float | None:
    """Smallest order among non-polynomial terms, None when every term is polynomial."""
    orders = [t.order for t in p.terms if not t.is_polynomial]
    return min(orders) if orders else None


@dataclass(frozen=True)
class EllipticityReport:
    elliptic: bool
    infimum: float
    witness: float | None
    samples_per_octave: int
    shell_exponents: tuple[int, int] = SHELL_EXPONENTS
    notes: list[str] = field(default_factory=list)

    @property
    def verdict(self) -> Literal["elliptic", "not_elliptic"]:
        return "elliptic" if self.elliptic else "not_elliptic"


def _shell_radii(samples_per_octave: int, exponents: tuple[int, int] = SHELL_EXPONENTS) -> np.ndarray:
    lo, hi = exponents
    return 2.0 ** np.linspace(lo, hi, (hi - lo) * samples_per_octave + 1)


def _directions(p: PolyhomogeneousSymbol) -> tuple[float, ...]:
    return (1.0, -1.0) if p.dimension == 1 else (1.0,)


def _real_zero_on_ray(p: PolyhomogeneousSymbol, direction: float, radii: np.ndarray) -> float | None:
    """Locate a sign change of a symbol that is real (up to a constant phase) on a ray."""
    rays = np.concatenate(([0.0], radii))
    values = np.asarray(p.evaluate(direction * rays))
    scale = np.max(np.abs(values))
    if scale == 0:
        return 0.0
    phase = np.conj(values[np.argmax(np.abs(values))]) / scale
    rotated = values * phase
    if np.max(np.abs(rotated.imag)) > 1e-12 * scale:
        return None
    real = rotated.real
    exact = np.flatnonzero(real == 0)
    if exact.size:
        return direction * rays[exact[0]]
    crossings = np.flatnonzero(np.sign(real[:-1]) * np.sign(real[1:]) < 0)
    if not crossings.size:
        return None
    i = crossings[0]
    root = brentq(lambda r: (p.evaluate(direction * r) * phase).real, rays[i], rays[i + 1], xtol=1e-14)
    return direction * root


def check_ellipticity(
    p: PolyhomogeneousSymbol,
    tolerance: float = DEFAULT_TOLERANCE,
    samples_per_octave: int = 64,
) -> EllipticityReport:
    """Estimate inf ⟨ξ⟩^{-M}|p(ξ)| on dyadic shells 2^-20 <= |ξ| <= 2^20 plus both limits.

    The estimate is empirical: it is exact only up to the sampling density, which
    is reported back. Real-valued symbols are additionally scanned for sign changes,
    which certify a zero between two samples.
    """
    radii = _shell_radii(samples_per_octave)
    M = p.order
    notes = [f"{samples_per_octave} samples per octave on 2^{SHELL_EXPONENTS[0]}..2^{SHELL_EXPONENTS[1]}"]

    for direction in _directions(p):
        zero = _real_zero_on_ray(p, direction, radii)
        if zero is not None:
            notes.append("sign change of a real-valued symbol")
            logger.info("symbol vanishes near xi = %.6g", zero)
            return EllipticityReport(False, 0.0, float(zero), samples_per_octave, notes=notes)

    best, witness = abs(p.p0), 0.0
    for direction in _directions(p):
        xi = direction * radii
        ratio = np.abs(np.asarray(p.evaluate(xi))) / (1.0 + radii**2) ** (M / 2.0)
        i = int(np.argmin(ratio))
        if ratio[i] < best:
            best, witness = float(ratio[i]), float(xi[i])
        if p.terms:
            top = p.terms[-1]
            limit = abs(top.c_plus if direction > 0 else top.c_minus)
        else:
            limit = abs(p.p0)
        if limit < best:
            best, witness = limit, direction * math.inf

    elliptic = best > tolerance
    logger.debug("ellipticity infimum estimate %.6g (witness %s)", best, witness)
    return EllipticityReport(elliptic, best, None if elliptic else witness, samples_per_octave, notes=notes)


# =============================================================================
# Closed-form symbol derivatives
# =============================================================================


@dataclass(frozen=True)
class SymbolDerivativeSpec:
    """Multi-indices (1-D: integers) for D^σ_ξ(ξ^γ̃ D^γ_ξ q)."""

    gamma: int = 0
    gamma_tilde: int = 0
    sigma: int = 0

    def __post_init__(self) -> None:
        if min(self.gamma, self.gamma_tilde, self.sigma) < 0:
            raise PreconditionError("multi-indices must be nonnegative")


def _differentiate(t: HomogeneousTerm) -> HomogeneousTerm:
    # D_ξ = -i ∂_ξ
    m = t.order
    return HomogeneousTerm(m - 1, -1j * m * t.c_plus, 1j * m * t.c_minus, t.dimension)


def _multiply_by_xi(t: HomogeneousTerm) -> HomogeneousTerm:
    return HomogeneousTerm(t.order + 1, t.c_plus, -t.c_minus, t.dimension)


def derived_term(t: HomogeneousTerm, spec: SymbolDerivativeSpec) -> HomogeneousTerm:
    """D^σ_ξ(ξ^γ̃ D^γ_ξ t) in the pointwise sense away from ξ = 0.

    Raises:
        PreconditionError: the term is not one-dimensional, or the result is a nonzero
            term of order below -1 (not locally integrable)
    """
    if t.dimension != 1:
        raise PreconditionError("derived_term is implemented for n = 1 only")
    out = t
    for _ in range(spec.gamma):
        out = _differentiate(out)
    for _ in range(spec.gamma_tilde):
        out = _multiply_by_xi(out)
    for _ in range(spec.sigma):
        out = _differentiate(out)
    if out.order < -1 and not out.is_zero:
        raise PreconditionError(
            f"derived order {out.order:g} < -n = -1: not locally integrable"
        )
    return out


def constant_term(p: PolyhomogeneousSymbol) -> HomogeneousTerm:
    """p0 as an order-0 homogeneous term."""
    return HomogeneousTerm(0.0, p.p0, p.p0, p.dimension)


def lemma31_ratio_bound(
    p: PolyhomogeneousSymbol,
    spec: SymbolDerivativeSpec,
    samples_per_octave: int = 32,
) -> float:
    """Sampled sup over dyadic shells of |D^σ(ξ^γ̃ D^γ p)(ξ)| / |p(ξ)|."""
    if spec.gamma != spec.gamma_tilde:
        raise PreconditionError(f"|gamma| = {spec.gamma} differs from |gamma_tilde| = {spec.gamma_tilde}")
    m = singularity_index(p)
    if m is not None and spec.sigma > math.floor(m):
        raise PreconditionError(f"|sigma| = {spec.sigma} exceeds [m] = {math.floor(m)}")
    derived = [derived_term(t, spec) for t in (constant_term(p), *p.terms)]
    radii = _shell_radii(samples_per_octave)
    best = 0.0
    for direction in _directions(p):
        xi = direction * radii
        numerator = sum(np.asarray(d.evaluate(xi)) for d in derived)
        ratio = np.abs(numerator) / np.abs(np.asarray(p.evaluate(xi)))
        best = max(best, float(np.max(ratio)))
    if not math.isfinite(best):
        logger.warning("derivative ratio is unbounded on the sampled shells")
    return best
