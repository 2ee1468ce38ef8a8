"""Tests for run-configuration loading."""

import json

import numpy as np
import pytest

from polydecay.config import (
    CommutatorCheckConfig,
    EllipticityConfig,
    SolveRunConfig,
    CustomCaseLiteral,
    SymbolLiteral,
    VerifyExactConfig,
    load_config,
)
from polydecay.errors import ConfigError
from polydecay.grid import GridSpec


@pytest.fixture
def write_config(tmp_path):
    def write(document, name="run.json"):
        path = tmp_path / name
        path.write_text(json.dumps(document), encoding="utf-8")
        return path

    return write


def test_defaults():
    config = load_config(SolveRunConfig)
    assert config.grid == GridSpec(half_length=200.0, points=2**14)
    assert config.method == "petviashvili"
    symbol = config.symbol.to_symbol()
    assert symbol.p0 == 1
    assert [t.order for t in symbol.terms] == [1.0]
    assert config.nonlinearity.to_nonlinearity().coeffs == {2: 1}


def test_commutator_defaults_cover_tabulated_cases():
    config = load_config(CommutatorCheckConfig)
    assert {(c.alpha, c.beta) for c in config.prop32} == {(1, 1), (2, 1), (2, 2)}
    assert all(c.rho < c.order + 1 for c in config.prop33)


def test_schema_version_required(write_config):
    with pytest.raises(ConfigError, match="schema_version"):
        load_config(VerifyExactConfig, write_config({"cases": ["cubic"]}))


def test_wrong_schema_version(write_config):
    with pytest.raises(ConfigError):
        load_config(VerifyExactConfig, write_config({"schema_version": 2}))


def test_unknown_key(write_config):
    with pytest.raises(ConfigError):
        load_config(VerifyExactConfig, write_config({"schema_version": 1, "colour": "blue"}))


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(VerifyExactConfig, tmp_path / "absent.json")


def test_malformed_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{schema_version: 1", encoding="utf-8")
    with pytest.raises(ConfigError, match="not valid JSON"):
        load_config(VerifyExactConfig, path)


def test_top_level_must_be_object(write_config):
    with pytest.raises(ConfigError):
        load_config(VerifyExactConfig, write_config([1, 2, 3]))


def test_complex_pairs(write_config):
    path = write_config(
        {
            "schema_version": 1,
            "symbol": {"p0": [1, 0], "terms": [{"order": 1, "c_plus": [0, 1], "c_minus": [0, -1]}]},
        }
    )
    term = load_config(SolveRunConfig, path).symbol.to_symbol().terms[0]
    assert term.c_plus == 1j
    assert term.c_minus == -1j


def test_complex_pair_length(write_config):
    path = write_config({"schema_version": 1, "symbol": {"p0": [1, 0, 0]}})
    with pytest.raises(ConfigError):
        load_config(SolveRunConfig, path)


def test_grid_override():
    config = load_config(VerifyExactConfig, half_length=50.0)
    assert config.grid == GridSpec(half_length=50.0, points=2**14)
    assert load_config(VerifyExactConfig, points=2**12).grid.half_length == 100.0


def test_grid_override_validated():
    with pytest.raises(ConfigError):
        load_config(VerifyExactConfig, points=1000)


def test_invalid_points_in_file(write_config):
    path = write_config({"schema_version": 1, "grid": {"half_length": 10, "points": 1000}})
    with pytest.raises(ConfigError):
        load_config(VerifyExactConfig, path)


def test_grid_override_without_grid():
    assert load_config(EllipticityConfig, points=256).grid is None


def test_radial_symbol():
    literal = SymbolLiteral.model_validate({"p0": 1, "dimension": 2, "terms": [{"order": 1, "radial_coeff": 1}]})
    symbol = literal.to_symbol()
    assert symbol.dimension == 2
    assert symbol.terms[0].c_plus == symbol.terms[0].c_minus == 1


def test_two_dimensional_symbol_needs_radial_terms(write_config):
    path = write_config(
        {
            "schema_version": 1,
            "grid": {"dimension": 2, "half_length": 32, "points": 256},
            "symbol": {"p0": 1, "dimension": 2, "terms": [{"order": 1, "c_plus": 1, "c_minus": 2}]},
        }
    )
    with pytest.raises(ConfigError):
        load_config(SolveRunConfig, path)


def test_symbol_and_grid_dimensions_agree(write_config):
    path = write_config({"schema_version": 1, "grid": {"dimension": 2, "half_length": 32, "points": 256}})
    with pytest.raises(ConfigError, match="dimensions"):
        load_config(SolveRunConfig, path)


def test_orders_must_increase(write_config):
    terms = [{"order": 2, "c_plus": 1, "c_minus": 1}, {"order": 1, "c_plus": 1, "c_minus": 1}]
    path = write_config({"schema_version": 1, "symbol": {"p0": 1, "terms": terms}})
    with pytest.raises(ConfigError):
        load_config(SolveRunConfig, path)


def test_nonlinearity_must_be_superlinear(write_config):
    path = write_config({"schema_version": 1, "nonlinearity": {"coeffs": {"1": 1}}})
    with pytest.raises(ConfigError):
        load_config(SolveRunConfig, path)


def test_resolved_config_round_trips():
    config = load_config(SolveRunConfig)
    dumped = config.model_dump(mode="json")
    assert SolveRunConfig.model_validate(dumped) == config


BO_CUSTOM = {
    "label": "bo",
    "symbol": {"p0": 1, "terms": [{"order": 1, "c_plus": 1, "c_minus": 1}]},
    "nonlinearity": {"coeffs": {"2": 1}},
    "solution": {"kind": "lorentzian_power", "amplitude": 2},
}


class TestCustomCases:
    def test_lorentzian_solution(self):
        case = CustomCaseLiteral.model_validate(BO_CUSTOM).to_case()
        x = np.array([0.0, 1.0, 3.0])
        np.testing.assert_allclose(case.solution(x), 2.0 / (1.0 + x**2))
        assert case.forcing is None
        assert case.predicted_pointwise_decay == 2.0
        assert case.nonlinearity.coeffs == {2: 1}

    def test_profiles_are_radial(self):
        literal = {
            **BO_CUSTOM,
            "symbol": {"p0": 1, "dimension": 2, "terms": [{"order": 1, "radial_coeff": 1}]},
            "solution": {"kind": "lorentzian_power", "scale": 2, "power": 1.5},
            "forcing": {"kind": "gaussian", "amplitude": 3, "width": 0.5},
        }
        case = CustomCaseLiteral.model_validate(literal).to_case()
        assert case.solution(np.array(0.3), np.array(0.4)) == pytest.approx(2.0**-1.5)
        assert case.forcing(np.array(0.3), np.array(0.4)) == pytest.approx(3 * np.exp(-0.5))
        assert case.predicted_pointwise_decay == 3.0

    def test_polynomial_symbol_has_no_algebraic_rate(self):
        literal = {**BO_CUSTOM, "symbol": {"p0": 1, "terms": [{"order": 2, "c_plus": 1, "c_minus": 1}]}}
        assert CustomCaseLiteral.model_validate(literal).to_case().predicted_pointwise_decay == float("inf")

    def test_unknown_profile_kind(self):
        with pytest.raises(ValueError):
            CustomCaseLiteral.model_validate({**BO_CUSTOM, "solution": {"kind": "sech"}})

    def test_custom_cases_only(self, write_config):
        path = write_config({"schema_version": 1, "cases": [], "custom_cases": [BO_CUSTOM]})
        config = load_config(VerifyExactConfig, path)
        assert config.cases == []
        assert config.custom_cases[0].label == "bo"

    def test_nothing_to_check(self, write_config):
        with pytest.raises(ConfigError, match="at least one"):
            load_config(VerifyExactConfig, write_config({"schema_version": 1, "cases": []}))

    def test_dimensions_agree(self, write_config):
        path = write_config({"schema_version": 1, "grid": {"dimension": 2, "half_length": 32, "points": 256},
                             "cases": [], "custom_cases": [BO_CUSTOM]})
        with pytest.raises(ConfigError, match="dimensions"):
            load_config(VerifyExactConfig, path)

    def test_round_trips(self, write_config):
        config = load_config(VerifyExactConfig, write_config({"schema_version": 1, "custom_cases": [BO_CUSTOM]}))
        assert VerifyExactConfig.model_validate(config.model_dump(mode="json")) == config
