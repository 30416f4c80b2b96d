"""
Oráculo exhaustivo
Enumera las n^m asignaciones (dígitos en base n, ítem 0 el menos
significativo) y decide si existe alguna EQ1.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import lcm
from typing import Iterator, Optional, Sequence, Tuple

from config import Config
from equidad.core import Allocation, BudgetExceeded, check_eq1, full_mask, iter_bits
from equidad.valuations import Instance, tabulate


@dataclass(frozen=True)
class ExistenceReport:
    exists: bool
    witness_allocation: Optional[Allocation]
    total_checked: int
    eq1_count: int


def allocation_count(n: int, m: int) -> int:
    return n ** m


def _require_budget(instance: Instance, budget: Optional[int]) -> int:
    budget = Config.BRUTE_BUDGET if budget is None else budget
    total = allocation_count(instance.n, instance.m)
    if total > budget:
        raise BudgetExceeded(total, budget, "oráculo exhaustivo")
    return total


def iter_allocations(n: int, m: int) -> Iterator[Tuple[int, ...]]:
    """Máscaras por agente de cada asignación, el ítem 0 varía más rápido"""
    for digits in product(range(n), repeat=m):
        masks = [0] * n
        for position, agent in enumerate(digits):
            masks[agent] |= 1 << (m - 1 - position)
        yield tuple(masks)


class _TabulatedProfile:
    """Tablas enteras de todos los agentes escaladas por un mismo factor"""

    def __init__(self, instance: Instance):
        tables = [tabulate(spec) for spec in instance.specs]
        scale = lcm(*(v.denominator for table in tables for v in table))
        self.tables = [[int(v * scale) for v in table] for table in tables]
        self.n = instance.n
        self.m = instance.m

    def is_eq1(self, masks: Sequence[int]) -> bool:
        values = [self.tables[i][masks[i]] for i in range(self.n)]
        for i in range(self.n):
            for j in range(self.n):
                if values[i] < values[j] and not self._repairable(masks, values, i, j):
                    return False
        return True

    def _repairable(self, masks, values, poor: int, rich: int) -> bool:
        rich_table, poor_table = self.tables[rich], self.tables[poor]
        if any(values[poor] >= rich_table[masks[rich] & ~(1 << g)] for g in iter_bits(masks[rich])):
            return True
        return any(poor_table[masks[poor] & ~(1 << c)] >= values[rich] for c in iter_bits(masks[poor]))


def all_eq1_allocations(instance: Instance, budget: Optional[int] = None) -> Iterator[Allocation]:
    """Asignaciones EQ1 en orden de enumeración"""
    _require_budget(instance, budget)
    if instance.n == 1:
        allocation = Allocation.from_masks([full_mask(instance.m)], instance.m)
        if check_eq1(instance, allocation).is_eq1:
            yield allocation
        return
    profile = _TabulatedProfile(instance)
    for masks in iter_allocations(instance.n, instance.m):
        if profile.is_eq1(masks):
            yield Allocation.from_masks(masks, instance.m)


def first_eq1_allocation(instance: Instance, budget: Optional[int] = None) -> Optional[Allocation]:
    return next(all_eq1_allocations(instance, budget), None)


def exists_eq1_bruteforce(instance: Instance, budget: Optional[int] = None) -> ExistenceReport:
    """Revisa las n^m asignaciones y cuenta cuántas son EQ1"""
    total = _require_budget(instance, budget)
    first = None
    count = 0
    for allocation in all_eq1_allocations(instance, budget):
        if first is None:
            first = allocation
        count += 1
    return ExistenceReport(count > 0, first, total, count)


def count_eq1(instance: Instance, budget: Optional[int] = None) -> int:
    return sum(1 for _ in all_eq1_allocations(instance, budget))
