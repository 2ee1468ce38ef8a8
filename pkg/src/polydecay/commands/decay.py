"""decay-report: weighted-norm verdicts and the tail fit for a catalog solution."""

from __future__ import annotations

import logging
from pathlib import Path

from polydecay.besselwave import lookup
from polydecay.config import DecayReportConfig
from polydecay.decayometer import theorem_report, weighted_norm_scan
from polydecay.errors import ToleranceError
from polydecay.reports import write_columns, write_csv, write_json

logger = logging.getLogger(__name__)


def cmd_decay_report(config: DecayReportConfig, out: Path) -> int:
    """Run theorem_report plus a norm table over config.weights.

    Raises:
        ConfigError: unknown case label
        ToleranceError: an unbounded verdict or a tail exponent off the prediction
    """
    case = lookup(config.case)
    report = theorem_report(
        case.symbol,
        case.solution,
        max_order=config.max_order,
        epsilon=config.epsilon,
        s=config.s,
        lengths=config.lengths,
        base_grid=config.grid,
        window=config.tail_window,
        tail_tolerance=config.tail_tolerance,
        bounded_slope=config.bounded_slope,
    )
    scan = weighted_norm_scan(case.solution, config.weights, config.lengths, config.s, config.grid)

    write_csv(
        out / "norm_scan.csv",
        ["L", *(f"t={t:g}" for t in scan.weights)],
        [(L, *(scan.table[(t, L)] for t in scan.weights)) for L in scan.lengths],
    )
    write_columns(out / "tail.csv", {"r": report.tail_fit.radii, "mean_abs_u": report.tail_fit.amplitudes})
    prediction = report.prediction
    write_json(
        out / "decay_report.json",
        {
            "case": case.label,
            "prediction": {
                "singularity_index": prediction.singularity_index,
                "pointwise_exponent": prediction.pointwise_exponent,
                "weight_threshold": prediction.weight_threshold,
                "critical_integer": prediction.critical_integer,
                "hypothesis_holds": prediction.hypothesis_holds,
            },
            "estimates": [
                {"alpha": e.alpha, "beta": e.beta, "weight": e.weight, "slope": e.slope, "verdict": e.verdict}
                for e in report.entries
            ],
            "tail": {
                "exponent": report.tail_fit.exponent,
                "r_squared": report.tail_fit.r_squared,
                "window": report.tail_fit.window,
                "consistent": report.tail_consistent,
            },
            "borderline_slope_observed": report.borderline_slope,
            "norm_scan_slopes": {f"{t:g}": slope for t, slope in scan.growth_slopes.items()},
            "notes": scan.notes,
        },
        config,
    )

    for e in report.entries:
        print(f"alpha={e.alpha} beta={e.beta} t={e.weight:g} slope={e.slope} {e.verdict}")
    print(f"tail exponent {report.tail_fit.exponent:.3f} (predicted {prediction.pointwise_exponent:g})")

    problems = [f"(alpha={e.alpha}, beta={e.beta}) {e.verdict}" for e in report.entries if e.verdict != "bounded"]
    if not report.tail_consistent:
        problems.append(f"tail exponent {report.tail_fit.exponent:.3f} vs {prediction.pointwise_exponent:g}")
    if problems:
        raise ToleranceError("; ".join(problems))
    return 0


def register_decay_commands(subparsers, parents):
    """Register the decay-report subcommand."""
    parser = subparsers.add_parser(
        "decay-report", parents=parents, help="Weighted-norm verdicts and tail fit for a catalog solution"
    )
    parser.set_defaults(config_model=DecayReportConfig, handler=cmd_decay_report)
