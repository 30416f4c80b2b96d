"""
Reducciones de dureza
Partition -> Restricted-Partition -> instancia EQ1 de 3 agentes supermodulares,
y la instancia canónica de 5 ítems sin asignación EQ1.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Iterator, Optional, Sequence, Tuple

from equidad.core import ItemSet, PreconditionViolated, full_mask
from equidad.valuations import ADDITIVE, FIRST_TWO, SUPERMODULAR, THIRD, HardnessPair, Instance

MIN_RESTRICTED_ITEMS = 5


@dataclass(frozen=True)
class PartitionInput:
    values: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if any(v <= 0 for v in self.values):
            raise ValueError(f"Partition requiere enteros positivos: {self.values}")

    @property
    def total(self) -> int:
        return sum(self.values)

    @property
    def m(self) -> int:
        return len(self.values)


def partition_to_restricted(a: PartitionInput) -> PartitionInput:
    """Agrega 4 copias de T: el total pasa a 5T y cada elemento queda bajo 5T/4"""
    if not a.values:
        raise ValueError("Partition vacío")
    return PartitionInput(a.values + (a.total,) * 4)


def is_restricted(b: PartitionInput) -> bool:
    """Promesa de Restricted-Partition: m >= 5 y todo b_i < T/4"""
    return b.m >= MIN_RESTRICTED_ITEMS and all(4 * v < b.total for v in b.values)


def equal_sum_bipartition(p: PartitionInput) -> Optional[Tuple[ItemSet, ItemSet]]:
    """Primer (S, M \\ S) con sumas iguales, buscando S por máscara creciente"""
    if p.total % 2:
        return None
    half = p.total // 2
    full = full_mask(p.m)
    for bits in range(1 << p.m):
        if sum(v for e, v in enumerate(p.values) if bits >> e & 1) == half:
            return ItemSet(bits, p.m), ItemSet(full & ~bits, p.m)
    return None


def restricted_to_instance(b: PartitionInput, extra_third_copies: int = 0) -> Instance:
    """
    Agentes 1 y 2: 0 en ∅ y 2·Σ_S b - T en otro caso (supermodular);
    agente 3 (y sus copias): |S|.
    """
    if not is_restricted(b):
        raise PreconditionViolated(
            f"la entrada {b.values} no cumple la promesa (m >= {MIN_RESTRICTED_ITEMS}, b_i < T/4)"
        )
    if extra_third_copies < 0:
        raise ValueError("el número de copias extra no puede ser negativo")
    first = HardnessPair(b.values, FIRST_TWO, declared_class=SUPERMODULAR)
    third = HardnessPair(b.values, THIRD, declared_class=ADDITIVE)
    return Instance(b.m, (first, first) + (third,) * (1 + extra_third_copies))


def nonexistence_instance(k: int = 0) -> Instance:
    """b = (1,1,1,1,1): sin EQ1 con 3 agentes; k copias extra del agente 3"""
    return restricted_to_instance(PartitionInput((1,) * MIN_RESTRICTED_ITEMS), extra_third_copies=k)


def restricted_inputs(sizes: Sequence[int], max_value: int, limit: Optional[int] = None) -> Iterator[PartitionInput]:
    """Multiconjuntos ordenados con valores en 1..max_value que cumplen la promesa"""
    produced = 0
    for size in sizes:
        for values in combinations_with_replacement(range(1, max_value + 1), size):
            candidate = PartitionInput(values)
            if not is_restricted(candidate):
                continue
            yield candidate
            produced += 1
            if limit is not None and produced >= limit:
                return
