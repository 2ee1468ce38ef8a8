"""ellipticity: classify symbols by sampled inf <xi>^-M |p(xi)|."""

from __future__ import annotations

import logging
from pathlib import Path

from polydecay.config import EllipticityConfig
from polydecay.errors import ToleranceError
from polydecay.reports import write_json
from polydecay.symbols import check_ellipticity

logger = logging.getLogger(__name__)


def cmd_ellipticity(config: EllipticityConfig, out: Path) -> int:
    """Classify each configured symbol; cases with an expected verdict must match it.

    Raises:
        ToleranceError: a verdict differs from its expectation
    """
    rows = []
    for case in config.symbols:
        report = check_ellipticity(case.symbol.to_symbol(), config.tolerance, config.samples_per_octave)
        matches = case.expect is None or case.expect == report.verdict
        rows.append(
            {
                "label": case.label,
                "verdict": report.verdict,
                "infimum": report.infimum,
                "witness": report.witness,
                "expected": case.expect,
                "matches": matches,
                "notes": report.notes,
            }
        )
        witness = "" if report.witness is None else f" witness xi = {report.witness:.6g}"
        print(f"{case.label:<28} {report.verdict} (inf {report.infimum:.3g}){witness}")
    write_json(out / "ellipticity.json", {"symbols": rows}, config)

    mismatched = [r["label"] for r in rows if not r["matches"]]
    if mismatched:
        raise ToleranceError("unexpected verdict for " + ", ".join(mismatched))
    return 0


def register_ellipticity_commands(subparsers, parents):
    """Register the ellipticity subcommand."""
    parser = subparsers.add_parser("ellipticity", parents=parents, help="Global ellipticity classification")
    parser.set_defaults(config_model=EllipticityConfig, handler=cmd_ellipticity)
