"""
Equidad - Asignaciones EQ1 de ítems indivisibles
Contiene el núcleo (conjuntos, asignaciones, verificadores), las familias de
valuaciones, los algoritmos, el oráculo exhaustivo, las reducciones de
dureza, las particiones de grafos y el formato de archivos.
"""

from equidad.core import (
    Allocation, BudgetExceeded, EquidadError, EquityReport, InvalidAllocation, InvariantViolation,
    ItemSet, NotApplicable, PreconditionViolated, Value, WitnessCertificate,
    check_ef1, check_eq1, check_lower_witness, find_lower_witness, poor_agents, rich_agents,
)
from equidad.valuations import Instance, evaluate, negate
from equidad.algorithms import SolveResult, solve_dispatch

__all__ = [
    "Allocation", "BudgetExceeded", "EquidadError", "EquityReport", "InvalidAllocation",
    "InvariantViolation", "ItemSet", "NotApplicable", "PreconditionViolated", "Value",
    "WitnessCertificate", "check_ef1", "check_eq1", "check_lower_witness", "find_lower_witness",
    "poor_agents", "rich_agents", "Instance", "evaluate", "negate", "SolveResult", "solve_dispatch",
]
