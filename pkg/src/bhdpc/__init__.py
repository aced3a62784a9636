"""Paired 2-disjoint path covers of faulty balanced hypercubes."""

from .constructor import CasePlan, explain, solve
from .errors import (BhdpcError, BudgetExceeded, FaultBudgetExceeded, InputError, InternalError,
                     NotAdjacent, NotFound)
from .instance import Dpc2, Instance, Terminals
from .topology import FaultSet

__all__ = [
    "BhdpcError", "BudgetExceeded", "CasePlan", "Dpc2", "FaultBudgetExceeded", "FaultSet",
    "InputError", "Instance", "InternalError", "NotAdjacent", "NotFound", "Terminals",
    "explain", "solve",
]
