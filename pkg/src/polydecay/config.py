"""Run configuration for the command-line suites.

Every command reads one JSON document validated by a pydantic model. Unknown keys
are rejected and the document must declare ``"schema_version": 1``. Complex numbers
are written either as a plain number or as a two-element list ``[re, im]``.

Example symbol literal for |ξ|^{3/2} + 1::

    {"p0": 1, "terms": [{"order": 1.5, "c_plus": 1, "c_minus": 1}]}

In two dimensions terms are radial: ``{"order": 1, "radial_coeff": 1}``.
"""

from __future__ import annotations

import json
import logging
import math
from pathlib import Path
from typing import Annotated, Any, Callable, Literal, TypeVar

import numpy as np
from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    PlainSerializer,
    ValidationError,
    model_validator,
)

from polydecay.besselwave import ExactSolutionCase
from polydecay.decayometer import predicted_rates
from polydecay.errors import ConfigError, PreconditionError
from polydecay.grid import GridSpec
from polydecay.solver import Nonlinearity
from polydecay.symbols import HomogeneousTerm, PolyhomogeneousSymbol

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1


def _parse_complex(value: Any) -> Any:
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError(f"complex values are [re, im], got {value!r}")
        return complex(float(value[0]), float(value[1]))
    return value


ComplexValue = Annotated[
    complex,
    BeforeValidator(_parse_complex),
    PlainSerializer(lambda z: [z.real, z.imag], return_type=list, when_used="json"),
]


class _Record(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class _RunConfig(_Record):
    schema_version: Annotated[Literal[1], Field(description="Config schema version")] = SCHEMA_VERSION
    grid: GridSpec

    def with_grid(self, half_length: float | None = None, points: int | None = None):
        """Copy with --grid-L / --grid-N overrides applied."""
        if half_length is None and points is None:
            return self
        if self.grid is None:
            logger.warning("grid overrides ignored: this command runs without a grid")
            return self
        grid = GridSpec(
            dimension=self.grid.dimension,
            half_length=self.grid.half_length if half_length is None else half_length,
            points=self.grid.points if points is None else points,
        )
        return self.model_validate({**self.model_dump(), "grid": grid})


# =============================================================================
# Symbol and nonlinearity literals
# =============================================================================


class TermLiteral(_Record):
    """One homogeneous term: (c_plus, c_minus) in 1-D, radial_coeff in 2-D."""

    order: Annotated[float, Field(description="Homogeneity order m_j", gt=0)]
    c_plus: Annotated[ComplexValue | None, Field(description="Profile value at xi = +1")] = None
    c_minus: Annotated[ComplexValue | None, Field(description="Profile value at xi = -1")] = None
    radial_coeff: Annotated[ComplexValue | None, Field(description="Radial coefficient (2-D)")] = None

    @model_validator(mode="after")
    def _one_profile(self) -> TermLiteral:
        line = self.c_plus is not None or self.c_minus is not None
        if line and self.radial_coeff is not None:
            raise ValueError("give either c_plus/c_minus or radial_coeff, not both")
        if line and (self.c_plus is None or self.c_minus is None):
            raise ValueError("c_plus and c_minus come together")
        if not line and self.radial_coeff is None:
            raise ValueError("a term needs c_plus/c_minus or radial_coeff")
        return self

    def to_term(self, dimension: int) -> HomogeneousTerm:
        if dimension == 2:
            if self.radial_coeff is None:
                raise PreconditionError("2-D terms are radial: use radial_coeff")
            return HomogeneousTerm.radial(self.order, self.radial_coeff)
        if self.radial_coeff is not None:
            return HomogeneousTerm(self.order, self.radial_coeff, self.radial_coeff, 1)
        return HomogeneousTerm(self.order, self.c_plus, self.c_minus, 1)


class SymbolLiteral(_Record):
    p0: Annotated[ComplexValue, Field(description="Constant term p0")]
    terms: Annotated[list[TermLiteral], Field(description="Terms in strictly increasing order")] = []
    dimension: Annotated[Literal[1, 2], Field(description="Spatial dimension")] = 1

    @model_validator(mode="after")
    def _well_formed(self) -> SymbolLiteral:
        try:
            self.to_symbol()
        except PreconditionError as exc:
            raise ValueError(str(exc)) from exc
        return self

    def to_symbol(self) -> PolyhomogeneousSymbol:
        return PolyhomogeneousSymbol(
            self.p0, tuple(t.to_term(self.dimension) for t in self.terms), self.dimension
        )


class NonlinearityLiteral(_Record):
    coeffs: Annotated[dict[int, ComplexValue], Field(description="Power j >= 2 to coefficient F_j")]

    @model_validator(mode="after")
    def _superlinear(self) -> NonlinearityLiteral:
        if not self.coeffs or min(self.coeffs) < 2:
            raise ValueError("nonlinearity needs at least one power and all powers >= 2")
        return self

    def to_nonlinearity(self) -> Nonlinearity:
        return Nonlinearity(coeffs=dict(self.coeffs))


def _benjamin_ono_literal() -> SymbolLiteral:
    return SymbolLiteral(p0=1, terms=[TermLiteral(order=1, c_plus=1, c_minus=1)])


# =============================================================================
# Custom exact-solution cases
# =============================================================================


def _radius(coords: tuple[np.ndarray, ...]) -> np.ndarray:
    return np.sqrt(sum(c**2 for c in coords))


class LorentzianPowerProfile(_Record):
    """amplitude·(1 + (scale·|x|)²)^{-power}."""

    kind: Literal["lorentzian_power"]
    amplitude: float = 1.0
    scale: Annotated[float, Field(gt=0)] = 1.0
    power: Annotated[float, Field(gt=0)] = 1.0

    def to_function(self) -> Callable[..., np.ndarray]:
        def profile(*coords):
            return self.amplitude * (1.0 + (self.scale * _radius(coords)) ** 2) ** -self.power

        return profile


class GaussianProfile(_Record):
    """amplitude·exp(-|x|²/(2·width²))."""

    kind: Literal["gaussian"]
    amplitude: float = 1.0
    width: Annotated[float, Field(gt=0)] = 1.0

    def to_function(self) -> Callable[..., np.ndarray]:
        def profile(*coords):
            return self.amplitude * np.exp(-0.5 * (_radius(coords) / self.width) ** 2)

        return profile


ProfileLiteral = Annotated[LorentzianPowerProfile | GaussianProfile, Field(discriminator="kind")]


class CustomCaseLiteral(_Record):
    """A user equation p(D)u = f + F(u) with a candidate solution u.

    Example, the Benjamin-Ono wave written out by hand::

        {"label": "bo", "symbol": {"p0": 1, "terms": [{"order": 1, "c_plus": 1, "c_minus": 1}]},
         "nonlinearity": {"coeffs": {"2": 1}},
         "solution": {"kind": "lorentzian_power", "amplitude": 2}}
    """

    label: Annotated[str, Field(min_length=1)]
    symbol: SymbolLiteral
    nonlinearity: NonlinearityLiteral
    solution: ProfileLiteral
    forcing: ProfileLiteral | None = None
    description: str = ""

    def to_case(self) -> ExactSolutionCase:
        symbol = self.symbol.to_symbol()
        prediction = predicted_rates(symbol)
        return ExactSolutionCase(
            label=self.label,
            symbol=symbol,
            nonlinearity=self.nonlinearity.to_nonlinearity(),
            solution=self.solution.to_function(),
            # polynomial symbols sit in the exponential-decay regime
            predicted_pointwise_decay=math.inf if prediction is None else prediction.pointwise_exponent,
            forcing=None if self.forcing is None else self.forcing.to_function(),
            description=self.description,
        )


# =============================================================================
# Per-command configs
# =============================================================================


class VerifyExactConfig(_RunConfig):
    grid: GridSpec = GridSpec(half_length=100.0, points=2**14)
    cases: Annotated[list[str], Field(description="Catalog labels")] = ["benjamin-ono", "cubic"]
    custom_cases: Annotated[list[CustomCaseLiteral], Field(description="Equations given in full")] = []
    wave_speed: Annotated[float, Field(description="c for the 'benjamin-ono' label", gt=0)] = 1.0
    tolerance: Annotated[float, Field(description="Relative L2 residual bound", gt=0)] = 5e-3

    @model_validator(mode="after")
    def _something_to_check(self) -> VerifyExactConfig:
        if not self.cases and not self.custom_cases:
            raise ValueError("name at least one catalog label or custom case")
        for custom in self.custom_cases:
            if custom.symbol.dimension != self.grid.dimension:
                raise ValueError(f"custom case {custom.label!r}: symbol and grid dimensions differ")
        return self


class InitialGuess(_Record):
    amplitude: Annotated[float, Field(description="Peak of the Gaussian guess")] = 2.0
    width: Annotated[float, Field(description="Width w in A exp(-|x/w|^2)", gt=0)] = 1.0


class SolveRunConfig(_RunConfig):
    grid: GridSpec = GridSpec(half_length=200.0, points=2**14)
    symbol: SymbolLiteral = Field(default_factory=_benjamin_ono_literal)
    nonlinearity: NonlinearityLiteral = NonlinearityLiteral(coeffs={2: 1})
    initial_guess: InitialGuess = InitialGuess()
    method: Annotated[Literal["fixed_point", "petviashvili"], Field(description="Iteration scheme")] = "petviashvili"
    max_iterations: Annotated[int, Field(description="Iteration cap", gt=0)] = 200
    residual_tolerance: Annotated[float, Field(description="Relative residual target", gt=0)] = 1e-10
    damping: Annotated[float, Field(description="Relaxation weight", gt=0, le=1)] = 1.0
    petviashvili_exponent: Annotated[float | None, Field(description="Override of k/(k-1)")] = None
    tail_window: Annotated[tuple[float, float], Field(description="Window for the tail fit")] = (10.0, 40.0)

    @model_validator(mode="after")
    def _dimensions_agree(self) -> SolveRunConfig:
        if self.symbol.dimension != self.grid.dimension:
            raise ValueError("symbol and grid dimensions differ")
        return self


class DecayReportConfig(_RunConfig):
    grid: GridSpec = GridSpec(half_length=100.0, points=2**13)
    case: Annotated[str, Field(description="Catalog label")] = "benjamin-ono"
    max_order: Annotated[int, Field(description="Largest |alpha|", ge=0, le=2)] = 2
    epsilon: Annotated[float, Field(description="Distance below m + n/2", gt=0, lt=1)] = 0.25
    s: Annotated[float, Field(description="Sobolev order")] = 0.0
    lengths: Annotated[list[float], Field(description="Truncation radii", min_length=2)] = [50.0, 100.0, 200.0, 400.0]
    weights: Annotated[list[float], Field(description="Extra weights t for the norm table")] = [1.25, 2.0]
    tail_window: Annotated[tuple[float, float], Field(description="Window for the tail fit")] = (10.0, 40.0)
    tail_tolerance: Annotated[float, Field(description="Allowed |fit - (m+n)|", gt=0)] = 0.05
    bounded_slope: Annotated[float, Field(description="Largest growth slope read as bounded", gt=0)] = 0.1


class Prop33Case(_Record):
    order: Annotated[float, Field(gt=0)]
    c_plus: ComplexValue = 1
    c_minus: ComplexValue = 1
    rho: Annotated[int, Field(ge=0)] = 1


class Prop32Case(_Record):
    order: Annotated[float, Field(ge=1)]
    c_plus: ComplexValue = 1
    c_minus: ComplexValue = 1
    alpha: Annotated[int, Field(ge=0, le=2)]
    beta: Annotated[int, Field(ge=0, le=2)]


class SmoothingProbe(_Record):
    order: Annotated[float, Field(description="Order mu of q = |xi|^mu")]
    s: float = 0.0


class CommutatorProbe(_Record):
    order: Annotated[float, Field(description="Order mu of q = |xi|^mu")]
    r: float = 0.5
    s: float = 0.0
    mode: Literal["l1", "l2"] = "l2"


class CommutatorCheckConfig(_RunConfig):
    grid: GridSpec = GridSpec(half_length=32.0, points=512)
    probe_grid: GridSpec = GridSpec(half_length=2048.0, points=2**16)
    width: Annotated[float, Field(description="Width of the test function", gt=0)] = 1.0
    center: Annotated[float, Field(description="Center of the test function")] = 0.5
    vanishing_moments: Annotated[int, Field(description="j in He_{2j}", ge=0)] = 3
    tolerance: Annotated[float, Field(gt=0)] = 1e-6
    prop33: list[Prop33Case] = [
        Prop33Case(order=1.5, rho=1),
        Prop33Case(order=1.5, rho=2),
        Prop33Case(order=2, rho=1),
    ]
    prop32: list[Prop32Case] = [
        Prop32Case(order=order, alpha=alpha, beta=beta)
        for order in (1.0, 1.5)
        for alpha, beta in ((1, 1), (2, 1), (2, 2))
    ]
    smoothing_probes: list[SmoothingProbe] = [SmoothingProbe(order=-0.25)]
    commutator_probes: list[CommutatorProbe] = [CommutatorProbe(order=1.0, r=0.5)]


class BesselCheckConfig(_RunConfig):
    # the truncated 1/x² tail costs about 0.234/L in absolute error near ξ = π/L
    grid: GridSpec = GridSpec(half_length=400.0, points=2**16)
    max_k: Annotated[int, Field(description="Check K_{k-1/2} for k <= max_k", ge=1)] = 6
    x_min: Annotated[float, Field(gt=0)] = 0.1
    x_max: Annotated[float, Field(gt=0)] = 20.0
    samples: Annotated[int, Field(ge=2)] = 200
    tolerance: Annotated[float, Field(gt=0)] = 1e-12
    quadrature_tolerance: Annotated[float, Field(gt=0)] = 1e-10
    transform_tolerance: Annotated[float, Field(gt=0)] = 1e-3
    transform_band: Annotated[float, Field(description="Compare transforms on |xi| <= band", gt=0)] = 5.0


class EllipticityCase(_Record):
    label: str
    symbol: SymbolLiteral
    expect: Literal["elliptic", "not_elliptic"] | None = None


def _default_ellipticity_suite() -> list[EllipticityCase]:
    def term(order: float, coeff: float = 1.0) -> TermLiteral:
        return TermLiteral(order=order, c_plus=coeff, c_minus=coeff)

    return [
        EllipticityCase(label="|xi| + 1", symbol=SymbolLiteral(p0=1, terms=[term(1)]), expect="elliptic"),
        EllipticityCase(
            label="xi^2 + 3|xi| + 3", symbol=SymbolLiteral(p0=3, terms=[term(1, 3), term(2)]), expect="elliptic"
        ),
        EllipticityCase(label="xi^2 - 1", symbol=SymbolLiteral(p0=-1, terms=[term(2)]), expect="not_elliptic"),
        EllipticityCase(
            label="|xi|^{3/2} - |xi| + 0.1", symbol=SymbolLiteral(p0=0.1, terms=[term(1, -1), term(1.5)])
        ),
    ]


class EllipticityConfig(_RunConfig):
    grid: Annotated[GridSpec | None, Field(description="Unused: classification needs no grid")] = None
    tolerance: Annotated[float, Field(gt=0)] = 1e-9
    samples_per_octave: Annotated[int, Field(ge=1)] = 64
    symbols: list[EllipticityCase] = Field(default_factory=_default_ellipticity_suite)


Config = TypeVar("Config", bound=_RunConfig)


def load_config(model: type[Config], path: str | Path | None = None, **overrides: Any) -> Config:
    """Validate a JSON config file (or the defaults when path is None).

    Raises:
        ConfigError: unreadable file, malformed JSON or schema violation
    """
    data: dict[str, Any] = {}
    if path is not None:
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"config {path} must hold a JSON object")
        if "schema_version" not in data:
            raise ConfigError(f"config {path} lacks schema_version (expected {SCHEMA_VERSION})")
    try:
        config = model.model_validate(data)
        config = config.with_grid(overrides.get("half_length"), overrides.get("points"))
    except ValidationError as exc:
        raise ConfigError(f"invalid {model.__name__}: {exc}") from exc
    logger.debug("resolved %s: %s", model.__name__, config.model_dump(mode="json"))
    return config
