"""Exact graded computer algebra for chordal stochastic flows.

The package wraps a C++ engine that works over exact rationals throughout:
mode algebras with graded brackets (Neveu-Schwarz, Ramond, and plain
Virasoro sectors), highest-weight modules and their singular vectors, the
transcription of algebra-valued random walks into superspace SDEs, exact
martingale decisions in the quotient module, and a Monte Carlo cross-check
of the classical flow.

Rationals cross the boundary as ``"p/q"`` strings; structured inputs and
outputs are JSON text or plain dicts.
"""

from ._core import (
    build_sde_json,
    drift_state_json,
    estimate_martingale,
    kappa0_error,
    locus,
    martingale,
    named_walk_json,
    run_check,
    run_suite,
    simulate_csv,
    singular,
    suite_check_names,
    verify_link,
    verify_solution_ok,
    walk_names,
)

__all__ = [
    "build_sde_json",
    "drift_state_json",
    "estimate_martingale",
    "kappa0_error",
    "locus",
    "martingale",
    "named_walk_json",
    "run_check",
    "run_suite",
    "simulate_csv",
    "singular",
    "suite_check_names",
    "verify_link",
    "verify_solution_ok",
    "walk_names",
]

__version__ = "0.1.0"
