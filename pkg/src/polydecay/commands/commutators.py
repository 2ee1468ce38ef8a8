"""commutator-check: commutator identities and boundedness probes."""

from __future__ import annotations

import logging
from pathlib import Path

from polydecay.commutators import (
    DEFAULT_WIDTHS,
    IdentityReport,
    ProbeReport,
    lemma34_probe,
    lemma35_probe,
    moment_free_gaussian,
    prop32_check_1d,
    prop33_check,
)
from polydecay.config import CommutatorCheckConfig
from polydecay.errors import ToleranceError
from polydecay.reports import write_csv, write_json
from polydecay.runtime import get_executor
from polydecay.symbols import HomogeneousTerm, power_term

logger = logging.getLogger(__name__)


def _identity_rows(config: CommutatorCheckConfig) -> list[IdentityReport]:
    v = moment_free_gaussian(config.grid, config.width, config.center, config.vanishing_moments)
    jobs = [
        (prop33_check, HomogeneousTerm(c.order, c.c_plus, c.c_minus), (c.rho,)) for c in config.prop33
    ] + [
        (prop32_check_1d, HomogeneousTerm(c.order, c.c_plus, c.c_minus), (c.alpha, c.beta)) for c in config.prop32
    ]
    return list(get_executor().map(lambda job: job[0](job[1], *job[2], v), jobs))


def _probe_reports(config: CommutatorCheckConfig) -> list[ProbeReport]:
    reports = [lemma34_probe(power_term(p.order), p.s, grid=config.probe_grid) for p in config.smoothing_probes]
    reports += [
        lemma35_probe(power_term(p.order), p.r, p.s, p.mode, grid=config.probe_grid) for p in config.commutator_probes
    ]
    return reports


def cmd_commutator_check(config: CommutatorCheckConfig, out: Path) -> int:
    """Run every configured identity check and probe.

    Raises:
        RegimeError: a probe is configured outside its parameter regime
        ToleranceError: a residual above tolerance or an unbounded probe family
    """
    identities = _identity_rows(config)
    probes = _probe_reports(config)

    write_csv(
        out / "identities.csv",
        ["label", "lhs_norm", "rhs_norm", "residual_norm", "relative_residual"],
        [(r.label, r.lhs_norm, r.rhs_norm, r.residual_norm, r.relative_residual) for r in identities],
    )
    for i, probe in enumerate(probes):
        write_csv(
            out / f"probe_{i}.csv",
            ["width", "ratio"],
            [(a, "" if r is None else r) for a, r in zip(DEFAULT_WIDTHS, probe.ratios)],
        )
    write_json(
        out / "commutators.json",
        {
            "identities": [
                {"label": r.label, "relative_residual": r.relative_residual, "passed": r.passes(config.tolerance)}
                for r in identities
            ],
            "probes": [
                {
                    "label": p.label,
                    "ratios": p.ratios,
                    "spread": p.spread,
                    "spread_limit": p.spread_limit,
                    "monotone_growth": p.monotone_growth,
                    "bounded": p.bounded,
                    "notes": p.notes,
                }
                for p in probes
            ],
        },
        config,
    )

    for r in identities:
        print(f"{r.label:<32} residual {r.relative_residual:.3e}")
    for p in probes:
        print(f"{p.label:<32} spread {p.spread:.3g} {'bounded' if p.bounded else 'UNBOUNDED'}")

    problems = [r.label for r in identities if not r.passes(config.tolerance)]
    problems += [p.label for p in probes if not p.bounded]
    if problems:
        raise ToleranceError("out of tolerance: " + "; ".join(problems))
    return 0


def register_commutator_commands(subparsers, parents):
    """Register the commutator-check subcommand."""
    parser = subparsers.add_parser(
        "commutator-check", parents=parents, help="Commutator identities and boundedness probes"
    )
    parser.set_defaults(config_model=CommutatorCheckConfig, handler=cmd_commutator_check)
