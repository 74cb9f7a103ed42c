"""Initial algebras, final coalgebras and algebraic compactness over finite posets."""

from .dsl import (
    FactoredFunctor,
    GuardednessReport,
    Workspace,
    check_guardedness,
    elaborate_covariant,
    elaborate_mixed,
    load_workspace,
    parse_covariant,
    parse_mixed,
)
from .engine import (
    Approximated,
    BarrReport,
    CompactAlgebra,
    OmegaChain,
    Refuted,
    Stabilized,
    barr_condition_check,
    solve_covariant,
    solve_mixed,
)
from .finpos import EpPair, FinPoset, MonotoneMap

__version__ = "0.1.0"

__all__ = [
    "Approximated",
    "BarrReport",
    "CompactAlgebra",
    "EpPair",
    "FactoredFunctor",
    "FinPoset",
    "GuardednessReport",
    "MonotoneMap",
    "OmegaChain",
    "Refuted",
    "Stabilized",
    "Workspace",
    "barr_condition_check",
    "check_guardedness",
    "elaborate_covariant",
    "elaborate_mixed",
    "load_workspace",
    "parse_covariant",
    "parse_mixed",
    "solve_covariant",
    "solve_mixed",
]
