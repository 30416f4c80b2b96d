"""
Generadores de instancias con semilla
Cada familia produce valuaciones que cumplen su clase por construcción;
las restricciones de signo del paquete total se imponen por rechazo.
"""
from __future__ import annotations

from typing import Callable, List, Optional, Sequence

import networkx as nx
import numpy as np

from equidad.core import PreconditionViolated, full_mask, iter_bits, popcount
from equidad.reductions import PartitionInput, restricted_to_instance
from equidad.valuations import (
    DOUBLY_MONOTONE, NONNEGATIVE, SUBADDITIVE, SUBMODULAR,
    Additive, Cut, Density, Instance, Table, ValuationSpec, subsets_by_size, submasks,
)

MAX_ATTEMPTS = 1000

KINDS = (
    "additive-mixed", "table-nonneg", "table-general", "table-submodular",
    "table-doubly-monotone", "table-subadditive-identical", "cut", "density",
    "supermodular-hardness",
)


def make_rng(seed: Optional[int]) -> np.random.Generator:
    return np.random.default_rng(seed)


def _ints(rng: np.random.Generator, low: int, high: int, size: int) -> List[int]:
    return [int(x) for x in rng.integers(low, high + 1, size=size)]


def _rejecting(build: Callable[[], ValuationSpec], accept: Callable[[ValuationSpec], bool]) -> ValuationSpec:
    for _ in range(MAX_ATTEMPTS):
        spec = build()
        if accept(spec):
            return spec
    raise PreconditionViolated(f"restricciones infactibles tras {MAX_ATTEMPTS} intentos")


def _nonneg_grand(spec: ValuationSpec) -> bool:
    return spec.value(full_mask(spec.m)) >= 0


# ===== FAMILIAS DE VALUACIONES =====

def random_additive(rng: np.random.Generator, m: int, low: int = -5, high: int = 5) -> Additive:
    return Additive(tuple(_ints(rng, low, high, m)))


def random_nonneg_table(rng: np.random.Generator, m: int, high: int = 9) -> Table:
    values = _ints(rng, 0, high, 1 << m)
    values[0] = 0
    return Table(tuple(values), declared_class=NONNEGATIVE)


def random_general_table(rng: np.random.Generator, m: int, low: int = -5, high: int = 9) -> Table:
    values = _ints(rng, low, high, 1 << m)
    values[0] = 0
    return Table(tuple(values))


def random_subadditive_table(rng: np.random.Generator, m: int, low: int = -3, high: int = 8) -> Table:
    """f(S) = min(sorteo, mínimo sobre particiones {A, S \\ A} de f(A) + f(S \\ A))"""
    f = [0] * (1 << m)
    for S in subsets_by_size(m)[1:]:
        value = int(rng.integers(low, high + 1))
        for A in submasks(S):
            if A and A != S:
                value = min(value, f[A] + f[S ^ A])
        f[S] = value
    return Table(tuple(f), declared_class=SUBADDITIVE)


def random_submodular_table(rng: np.random.Generator, m: int) -> Table:
    """Parte modular de signo mixto más sumas ponderadas de min(c, |S ∩ G|)"""
    modular = _ints(rng, -3, 3, m)
    groups = []
    for _ in range(int(rng.integers(1, 4))):
        members = sum(1 << e for e in range(m) if rng.random() < 0.5)
        groups.append((members, int(rng.integers(1, 4)), int(rng.integers(1, 5))))
    values = []
    for S in range(1 << m):
        total = sum(modular[e] for e in iter_bits(S))
        total += sum(weight * min(cap, popcount(S & members)) for members, cap, weight in groups)
        values.append(total)
    return Table(tuple(values), declared_class=SUBMODULAR)


def _monotone_table(rng: np.random.Generator, m: int, high: int) -> List[int]:
    g = [0] * (1 << m)
    for S in subsets_by_size(m)[1:]:
        g[S] = max([int(rng.integers(0, high + 1))] + [g[S & ~(1 << e)] for e in iter_bits(S)])
    return g


def random_doubly_monotone_table(rng: np.random.Generator, m: int, high: int = 6) -> Table:
    """f(S) = g(S ∩ bienes) - h(S ∩ tareas) con g y h monótonas no decrecientes"""
    goods = sum(1 << e for e in range(m) if rng.random() < 0.6)
    gain = _monotone_table(rng, m, high)
    cost = _monotone_table(rng, m, high)
    values = tuple(gain[S & goods] - cost[S & ~goods] for S in range(1 << m))
    return Table(values, declared_class=DOUBLY_MONOTONE)


def random_graph(rng: np.random.Generator, num_vertices: int, edge_prob: float = 0.5) -> nx.Graph:
    return nx.gnp_random_graph(num_vertices, edge_prob, seed=int(rng.integers(2 ** 31)))


# ===== INSTANCIAS =====

def additive_mixed_instance(rng, n: int, m: int) -> Instance:
    return Instance(m, tuple(_rejecting(lambda: random_additive(rng, m), _nonneg_grand) for _ in range(n)))


def nonneg_table_instance(rng, n: int, m: int) -> Instance:
    return Instance(m, tuple(random_nonneg_table(rng, m) for _ in range(n)))


def general_table_instance(rng, n: int, m: int) -> Instance:
    return Instance(m, tuple(_rejecting(lambda: random_general_table(rng, m), _nonneg_grand) for _ in range(n)))


def submodular_table_instance(rng, n: int, m: int) -> Instance:
    return Instance(m, tuple(_rejecting(lambda: random_submodular_table(rng, m), _nonneg_grand) for _ in range(n)))


def doubly_monotone_table_instance(rng, n: int, m: int) -> Instance:
    return Instance(m, tuple(
        _rejecting(lambda: random_doubly_monotone_table(rng, m), _nonneg_grand) for _ in range(n)
    ))


def identical_subadditive_instance(rng, n: int, m: int) -> Instance:
    spec = _rejecting(lambda: random_subadditive_table(rng, m), _nonneg_grand)
    return Instance(m, (spec,) * n)


def cut_instance(rng, n: int, m: int, edge_prob: float = 0.5) -> Instance:
    return Instance(m, (Cut(random_graph(rng, m, edge_prob)),) * n)


def density_instance(rng, n: int, m: int, edge_prob: float = 0.5) -> Instance:
    return Instance(m, (Density(random_graph(rng, m, edge_prob)),) * n)


def generate_instance(kind: str, n: int, m: int, seed: Optional[int] = None,
                      values: Optional[Sequence[int]] = None, edge_prob: float = 0.5) -> Instance:
    """Instancia determinista para (kind, n, m, seed)"""
    rng = make_rng(seed)
    if kind == "supermodular-hardness":
        if not values:
            raise PreconditionViolated("supermodular-hardness requiere los valores b")
        return restricted_to_instance(PartitionInput(tuple(values)))
    builders = {
        "additive-mixed": additive_mixed_instance,
        "table-nonneg": nonneg_table_instance,
        "table-general": general_table_instance,
        "table-submodular": submodular_table_instance,
        "table-doubly-monotone": doubly_monotone_table_instance,
        "table-subadditive-identical": identical_subadditive_instance,
    }
    if kind in builders:
        return builders[kind](rng, n, m)
    if kind == "cut":
        return cut_instance(rng, n, m, edge_prob)
    if kind == "density":
        return density_instance(rng, n, m, edge_prob)
    raise ValueError(f"tipo de instancia desconocido: {kind!r} (opciones: {', '.join(KINDS)})")
