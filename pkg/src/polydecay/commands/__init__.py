"""Subcommands of the polydecay CLI.

Commands are organized by suite:
- verify: exact-solution residuals for the closed-form catalog
- solve: solitary-wave profiles by spectral iteration
- decay: tail fits, weighted-norm scans and the decay-law report
- commutators: commutator identities and boundedness probes
- bessel: half-integer Bessel recurrences, closed forms and the transform formula
- ellipticity: global ellipticity classification of symbols
"""

from polydecay.commands.bessel import register_bessel_commands
from polydecay.commands.commutators import register_commutator_commands
from polydecay.commands.decay import register_decay_commands
from polydecay.commands.ellipticity import register_ellipticity_commands
from polydecay.commands.solve import register_solve_commands
from polydecay.commands.verify import register_verify_commands


def register_all_commands(subparsers, parents):
    """Register every subcommand.

    Args:
        subparsers: action returned by ArgumentParser.add_subparsers()
        parents: parsers holding the options shared by all subcommands
    """
    register_verify_commands(subparsers, parents)
    register_solve_commands(subparsers, parents)
    register_decay_commands(subparsers, parents)
    register_commutator_commands(subparsers, parents)
    register_bessel_commands(subparsers, parents)
    register_ellipticity_commands(subparsers, parents)


__all__ = [
    "register_all_commands",
    "register_verify_commands",
    "register_solve_commands",
    "register_decay_commands",
    "register_commutator_commands",
    "register_bessel_commands",
    "register_ellipticity_commands",
]
