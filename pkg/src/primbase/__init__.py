"""Exact base size and minimal degree for primitive permutation groups.

The package provides permutation group machinery with deterministic
stabilizer chains, constructors for the standard primitive families
(subset, partition, affine, classical, wreath and Mathieu actions),
exact and witness-based invariants, closed-form degree and bound
formulas, and a sweep driver that checks the bounds against computed
invariants and writes byte-reproducible reports.
"""

from .errors import BudgetExceeded, ConstructionError, PrimbaseError
from .families import build, parse_spec, spec
from .group import PermGroup, StabilizerChain
from .invariants import compute_invariants
from .verifier import evaluate_spec, load_config, report, run_sweep

__all__ = [
    "BudgetExceeded",
    "ConstructionError",
    "PrimbaseError",
    "PermGroup",
    "StabilizerChain",
    "build",
    "parse_spec",
    "spec",
    "compute_invariants",
    "evaluate_spec",
    "load_config",
    "report",
    "run_sweep",
]

__version__ = "0.1.0"
