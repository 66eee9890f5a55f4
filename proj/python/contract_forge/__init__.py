"""Realizability checking and synthesis for assume-guarantee contracts."""

from contract_forge._core import (
    __version__,
    ContractForgeError,
    check,
    emit_smt,
    oracle_check,
    parse_summary,
    simulate,
    synthesize_c,
    synthesize_skolem,
)

__all__ = [
    "__version__",
    "ContractForgeError",
    "check",
    "emit_smt",
    "oracle_check",
    "parse_summary",
    "simulate",
    "synthesize_c",
    "synthesize_skolem",
]
