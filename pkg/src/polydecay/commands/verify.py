"""verify-exact: residuals of the closed-form solitary waves."""

from __future__ import annotations

import logging
from pathlib import Path

from polydecay.besselwave import benjamin_ono_case, lookup, verify_exact
from polydecay.config import VerifyExactConfig
from polydecay.errors import ToleranceError
from polydecay.reports import write_csv, write_json

logger = logging.getLogger(__name__)


def _resolve(label: str, wave_speed: float):
    if label == "benjamin-ono" and wave_speed != 1.0:
        return benjamin_ono_case(wave_speed)
    return lookup(label)


def cmd_verify_exact(config: VerifyExactConfig, out: Path) -> int:
    """Check p(D)u = f + F(u) for every catalog label and custom case on the configured grid.

    Raises:
        ConfigError: unknown case label
        ToleranceError: some residual exceeds the tolerance (report still written)
    """
    cases = [_resolve(label, config.wave_speed) for label in config.cases]
    cases += [custom.to_case() for custom in config.custom_cases]
    rows = []
    for case in cases:
        value = verify_exact(case, config.grid)
        passed = value <= config.tolerance
        rows.append({"label": case.label, "description": case.description, "residual": value, "passed": passed})
        print(f"{case.label:<24} residual {value:.3e}  {'pass' if passed else 'FAIL'}")

    write_csv(
        out / "verify_exact.csv",
        ["label", "residual", "passed"],
        [(r["label"], r["residual"], r["passed"]) for r in rows],
    )
    write_json(out / "verify_exact.json", {"cases": rows, "all_passed": all(r["passed"] for r in rows)}, config)

    failed = [r["label"] for r in rows if not r["passed"]]
    if failed:
        raise ToleranceError(f"residual above {config.tolerance:g} for {', '.join(failed)}")
    return 0


def register_verify_commands(subparsers, parents):
    """Register the verify-exact subcommand."""
    parser = subparsers.add_parser(
        "verify-exact", parents=parents, help="Residuals of the closed-form solitary waves"
    )
    parser.set_defaults(config_model=VerifyExactConfig, handler=cmd_verify_exact)
