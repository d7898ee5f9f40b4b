"""Modes of algorithmic computation checked exhaustively on bounded domains."""
from . import core, models, combinators, dovetail, modes, theorems  # noqa: F401  (registers simulators)
from .core import (
    Alphabet, MachineDescription, MachineError, ResourceUsage, RunOutcome, Status, output_alphabet,
    run, run_metered, shortlex_index, shortlex_word,
)
from .modes import BoundedDomain, ModeVerdict, verify

__all__ = [
    "Alphabet", "BoundedDomain", "MachineDescription", "MachineError", "ModeVerdict",
    "ResourceUsage", "RunOutcome", "Status", "output_alphabet", "run", "run_metered",
    "shortlex_index", "shortlex_word", "verify",
]
