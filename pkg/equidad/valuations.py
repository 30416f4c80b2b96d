"""
Valuaciones
Familias de funciones de conjunto (aditiva, tabla, corte, densidad, par de la
reducción de dureza y negación), instancias, clases declaradas y
verificadores exhaustivos de propiedades para m pequeño.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import ClassVar, Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from config import Config
from equidad.core import (
    BudgetExceeded, ItemSet, Value, as_value, full_mask, iter_bits, popcount,
)

ADDITIVE = "additive"
SUBMODULAR = "submodular"
SUPERMODULAR = "supermodular"
SUBADDITIVE = "subadditive"
SUPERADDITIVE = "superadditive"
DOUBLY_MONOTONE = "doubly_monotone"
NONNEGATIVE = "nonnegative"
NONPOSITIVE = "nonpositive"
GENERAL = "general"

CLASS_TAGS = (
    ADDITIVE, SUBMODULAR, SUPERMODULAR, SUBADDITIVE, SUPERADDITIVE,
    DOUBLY_MONOTONE, NONNEGATIVE, NONPOSITIVE, GENERAL,
)

NEGATED_CLASS = {
    ADDITIVE: ADDITIVE,
    SUBMODULAR: SUPERMODULAR,
    SUPERMODULAR: SUBMODULAR,
    SUBADDITIVE: SUPERADDITIVE,
    SUPERADDITIVE: SUBADDITIVE,
    DOUBLY_MONOTONE: DOUBLY_MONOTONE,
    NONNEGATIVE: NONPOSITIVE,
    NONPOSITIVE: NONNEGATIVE,
    GENERAL: GENERAL,
}

# Inclusiones válidas con v(∅) = 0
_IMPLIES = {
    ADDITIVE: {SUBMODULAR, SUPERMODULAR, SUBADDITIVE, SUPERADDITIVE, DOUBLY_MONOTONE},
    SUBMODULAR: {SUBADDITIVE},
    SUPERMODULAR: {SUPERADDITIVE},
}

ALL_NONNEG = "all_nonneg"
ALL_NONPOS = "all_nonpos"
MIXED = "mixed"


def _check_bits(bits: int, m: int) -> None:
    if bits < 0 or bits >> m:
        raise IndexError(f"máscara {bits:#x} fuera del universo de {m} ítems")


# ===== FAMILIAS =====

@dataclass(frozen=True, kw_only=True)
class ValuationSpec:
    """Función de conjunto v: 2^M -> Q con una clase declarada (confiada, no verificada)"""

    declared_class: Optional[str] = None

    kind: ClassVar[str] = GENERAL

    def __post_init__(self):
        if self.declared_class is None:
            object.__setattr__(self, "declared_class", self.default_class())
        if self.declared_class not in CLASS_TAGS:
            raise ValueError(f"clase desconocida: {self.declared_class!r}")

    def default_class(self) -> str:
        return GENERAL

    def intrinsic_classes(self) -> FrozenSet[str]:
        """Clases que la familia garantiza por construcción"""
        return frozenset()

    @property
    def m(self) -> int:
        raise NotImplementedError

    def value(self, bits: int) -> Fraction:
        raise NotImplementedError


@dataclass(frozen=True)
class Additive(ValuationSpec):
    values: Tuple[Fraction, ...]

    kind: ClassVar[str] = "additive"

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(as_value(v) for v in self.values))
        super().__post_init__()

    def default_class(self) -> str:
        return ADDITIVE

    def intrinsic_classes(self) -> FrozenSet[str]:
        return frozenset({ADDITIVE})

    @property
    def m(self) -> int:
        return len(self.values)

    def value(self, bits: int) -> Fraction:
        _check_bits(bits, self.m)
        return sum((self.values[e] for e in iter_bits(bits)), Fraction(0))


@dataclass(frozen=True)
class Table(ValuationSpec):
    """Tabla explícita de 2^m valores indexada por máscara"""

    values: Tuple[Fraction, ...]

    kind: ClassVar[str] = "table"

    def __post_init__(self):
        size = len(self.values)
        if size == 0 or size & (size - 1):
            raise ValueError(f"una tabla necesita 2^m entradas, recibió {size}")
        object.__setattr__(self, "values", tuple(as_value(v) for v in self.values))
        super().__post_init__()

    @property
    def m(self) -> int:
        return len(self.values).bit_length() - 1

    def value(self, bits: int) -> Fraction:
        _check_bits(bits, self.m)
        return self.values[bits]


def _edge_key(graph: nx.Graph) -> Tuple[int, Tuple[Tuple[int, int], ...]]:
    return graph.number_of_nodes(), tuple(sorted((min(u, v), max(u, v)) for u, v in graph.edges()))


@dataclass(frozen=True)
class _GraphValuation(ValuationSpec):
    graph: nx.Graph = field(compare=False, repr=False)
    edges: Tuple[Tuple[int, int], ...] = field(init=False)
    num_vertices: int = field(init=False)
    _adjacency: Tuple[int, ...] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if set(self.graph.nodes()) != set(range(self.graph.number_of_nodes())):
            raise ValueError("los vértices del grafo deben ser 0..|V|-1")
        num_vertices, edges = _edge_key(self.graph)
        adjacency = [0] * num_vertices
        for u, v in edges:
            adjacency[u] |= 1 << v
            adjacency[v] |= 1 << u
        object.__setattr__(self, "num_vertices", num_vertices)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "_adjacency", tuple(adjacency))
        super().__post_init__()

    @property
    def m(self) -> int:
        return self.num_vertices


@dataclass(frozen=True)
class Cut(_GraphValuation):
    """v(S) = número de aristas con exactamente un extremo en S"""

    kind: ClassVar[str] = "cut"

    def default_class(self) -> str:
        return SUBMODULAR

    def intrinsic_classes(self) -> FrozenSet[str]:
        return frozenset({SUBMODULAR, NONNEGATIVE})

    def value(self, bits: int) -> Fraction:
        _check_bits(bits, self.m)
        return Fraction(sum(popcount(self._adjacency[u] & ~bits) for u in iter_bits(bits)))


@dataclass(frozen=True)
class Density(_GraphValuation):
    """v(S) = aristas internas de S / |S|, con v(∅) = 0"""

    kind: ClassVar[str] = "density"

    def default_class(self) -> str:
        return NONNEGATIVE

    def intrinsic_classes(self) -> FrozenSet[str]:
        return frozenset({NONNEGATIVE})

    def value(self, bits: int) -> Fraction:
        _check_bits(bits, self.m)
        size = popcount(bits)
        if size == 0:
            return Fraction(0)
        internal = sum(popcount(self._adjacency[u] & bits) for u in iter_bits(bits)) // 2
        return Fraction(internal, size)


FIRST_TWO = "first_two"
THIRD = "third"


@dataclass(frozen=True)
class HardnessPair(ValuationSpec):
    """
    Valuaciones de la reducción desde Partition:
    first_two -> 0 en ∅, 2·Σ_{e∈S} b_e - T en otro caso; third -> |S|
    """

    b: Tuple[int, ...]
    role: str = FIRST_TWO

    kind: ClassVar[str] = "hardness"

    def __post_init__(self):
        if self.role not in (FIRST_TWO, THIRD):
            raise ValueError(f"rol desconocido: {self.role!r}")
        object.__setattr__(self, "b", tuple(int(x) for x in self.b))
        super().__post_init__()

    def default_class(self) -> str:
        return SUPERMODULAR if self.role == FIRST_TWO else ADDITIVE

    def intrinsic_classes(self) -> FrozenSet[str]:
        if self.role == FIRST_TWO:
            return frozenset({SUPERMODULAR})
        return frozenset({ADDITIVE, NONNEGATIVE})

    @property
    def m(self) -> int:
        return len(self.b)

    def value(self, bits: int) -> Fraction:
        _check_bits(bits, self.m)
        if self.role == THIRD:
            return Fraction(popcount(bits))
        if bits == 0:
            return Fraction(0)
        return Fraction(2 * sum(self.b[e] for e in iter_bits(bits)) - sum(self.b))


@dataclass(frozen=True)
class Negated(ValuationSpec):
    inner: ValuationSpec

    kind: ClassVar[str] = "negated"

    def default_class(self) -> str:
        return NEGATED_CLASS[self.inner.declared_class]

    def intrinsic_classes(self) -> FrozenSet[str]:
        return frozenset(NEGATED_CLASS[c] for c in self.inner.intrinsic_classes())

    @property
    def m(self) -> int:
        return self.inner.m

    def value(self, bits: int) -> Fraction:
        return -self.inner.value(bits)


def evaluate(spec: ValuationSpec, S: ItemSet) -> Value:
    if S.m != spec.m:
        raise IndexError(f"conjunto sobre {S.m} ítems para una valuación de {spec.m}")
    return spec.value(S.bits)


def negate(spec: ValuationSpec) -> ValuationSpec:
    """u(S) = -v(S); la clase declarada se transforma con NEGATED_CLASS"""
    if isinstance(spec, Negated) and spec.declared_class == NEGATED_CLASS[spec.inner.declared_class]:
        return spec.inner
    return Negated(spec, declared_class=NEGATED_CLASS[spec.declared_class])


def classes_of(spec: ValuationSpec) -> FrozenSet[str]:
    """Clase declarada más las intrínsecas, cerradas bajo las inclusiones de clases"""
    classes = set(spec.intrinsic_classes())
    if spec.declared_class != GENERAL:
        classes.add(spec.declared_class)
    pending = list(classes)
    while pending:
        for implied in _IMPLIES.get(pending.pop(), ()):
            if implied not in classes:
                classes.add(implied)
                pending.append(implied)
    return frozenset(classes)


# ===== INSTANCIAS =====

@dataclass(frozen=True)
class Instance:
    m: int
    specs: Tuple[ValuationSpec, ...]

    def __post_init__(self):
        object.__setattr__(self, "specs", tuple(self.specs))
        if not self.specs:
            raise ValueError("una instancia necesita al menos un agente")
        if not 0 <= self.m <= Config.MAX_ITEMS:
            raise ValueError(f"m = {self.m} fuera de rango (máx {Config.MAX_ITEMS})")
        for i, spec in enumerate(self.specs):
            if spec.m != self.m:
                raise ValueError(f"la valuación del agente {i} es sobre {spec.m} ítems, no {self.m}")

    @property
    def n(self) -> int:
        return len(self.specs)

    def value(self, agent: int, bits: int) -> Fraction:
        return self.specs[agent].value(bits)

    def evaluate(self, agent: int, S: ItemSet) -> Value:
        return evaluate(self.specs[agent], S)

    def negated(self) -> "Instance":
        return Instance(self.m, tuple(negate(s) for s in self.specs))

    def is_identical(self) -> bool:
        return all(s == self.specs[0] for s in self.specs[1:])

    def grand_bundle_values(self) -> Tuple[Fraction, ...]:
        full = full_mask(self.m)
        return tuple(s.value(full) for s in self.specs)


def grand_bundle_sign(instance: Instance) -> str:
    values = instance.grand_bundle_values()
    if all(v >= 0 for v in values):
        return ALL_NONNEG
    if all(v <= 0 for v in values):
        return ALL_NONPOS
    return MIXED


# ===== VERIFICADORES EXHAUSTIVOS =====

@dataclass(frozen=True)
class ClassReport:
    property_name: str
    holds: bool
    counterexample: Optional[Dict[str, object]] = None
    goods: Optional[ItemSet] = None
    chores: Optional[ItemSet] = None


def tabulate(spec: ValuationSpec, m: Optional[int] = None) -> List[Fraction]:
    """Los 2^m valores de v indexados por máscara"""
    m = spec.m if m is None else m
    if m != spec.m:
        raise IndexError(f"tabla de {m} ítems para una valuación de {spec.m}")
    return [spec.value(bits) for bits in range(1 << m)]


def scaled_table(values: Sequence[Fraction]) -> List[int]:
    """Escala por el mcm de los denominadores; preserva el orden"""
    scale = lcm(*(v.denominator for v in values)) if values else 1
    return [int(v * scale) for v in values]


def subsets_by_size(m: int) -> List[int]:
    """Máscaras de 2^M ordenadas por cardinalidad y luego por valor numérico"""
    return sorted(range(1 << m), key=lambda b: (popcount(b), b))


def submasks(mask: int) -> Iterator[int]:
    """Submáscaras de mask en orden numérico creciente, incluyendo 0"""
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        sub = (sub - mask) & mask


def _prepare(spec: ValuationSpec, m: int, budget: Optional[int]) -> Tuple[List[Fraction], List[int]]:
    budget = Config.VERIFY_MAX_M if budget is None else budget
    if m > budget:
        raise BudgetExceeded(1 << m, 1 << budget, "verificador de clase")
    values = tabulate(spec, m)
    return values, scaled_table(values)


def _iset(bits: int, m: int) -> ItemSet:
    return ItemSet(bits, m)


def _verify_modular(spec: ValuationSpec, m: int, budget: Optional[int], sub: bool) -> ClassReport:
    values, f = _prepare(spec, m, budget)
    name = SUBMODULAR if sub else SUPERMODULAR
    full = full_mask(m)
    for S in subsets_by_size(m):
        outside = full & ~S
        for e2 in iter_bits(outside):
            T = S | 1 << e2
            for e in iter_bits(outside & ~(1 << e2)):
                gain_small = f[S | 1 << e] - f[S]
                gain_large = f[T | 1 << e] - f[T]
                if (gain_small < gain_large) if sub else (gain_small > gain_large):
                    return ClassReport(name, False, {
                        "S": _iset(S, m), "T": _iset(T, m), "e": e,
                        "gain_S": values[S | 1 << e] - values[S],
                        "gain_T": values[T | 1 << e] - values[T],
                    })
    return ClassReport(name, True)


def verify_submodular(spec: ValuationSpec, m: Optional[int] = None, budget: Optional[int] = None) -> ClassReport:
    """Contraejemplo (S, T = S ∪ {e'}, e) con ganancia marginal de e mayor en T"""
    return _verify_modular(spec, spec.m if m is None else m, budget, sub=True)


def verify_supermodular(spec: ValuationSpec, m: Optional[int] = None, budget: Optional[int] = None) -> ClassReport:
    return _verify_modular(spec, spec.m if m is None else m, budget, sub=False)


def _verify_additive_kind(spec: ValuationSpec, m: int, budget: Optional[int], sub: bool) -> ClassReport:
    values, f = _prepare(spec, m, budget)
    name = SUBADDITIVE if sub else SUPERADDITIVE
    full = full_mask(m)
    for S in subsets_by_size(m):
        for T in submasks(full & ~S):
            union = f[S | T]
            if (union > f[S] + f[T]) if sub else (union < f[S] + f[T]):
                return ClassReport(name, False, {
                    "S": _iset(S, m), "T": _iset(T, m),
                    "union": values[S | T], "sum": values[S] + values[T],
                })
    return ClassReport(name, True)


def verify_subadditive(spec: ValuationSpec, m: Optional[int] = None, budget: Optional[int] = None) -> ClassReport:
    """v(S ∪ T) <= v(S) + v(T) para todo par disjunto"""
    return _verify_additive_kind(spec, spec.m if m is None else m, budget, sub=True)


def verify_superadditive(spec: ValuationSpec, m: Optional[int] = None, budget: Optional[int] = None) -> ClassReport:
    return _verify_additive_kind(spec, spec.m if m is None else m, budget, sub=False)


def verify_doubly_monotone(spec: ValuationSpec, m: Optional[int] = None, budget: Optional[int] = None) -> ClassReport:
    """
    Cada ítem es bien (marginal >= 0 siempre) o tarea (marginal <= 0 siempre).
    Los ítems de marginal siempre nula se clasifican como bienes.
    """
    m = spec.m if m is None else m
    values, f = _prepare(spec, m, budget)
    order = subsets_by_size(m)
    goods = chores = 0
    for e in range(m):
        bit = 1 << e
        up = down = None
        for S in order:
            if S & bit:
                continue
            delta = f[S | bit] - f[S]
            if delta > 0 and up is None:
                up = S
            elif delta < 0 and down is None:
                down = S
            if up is not None and down is not None:
                return ClassReport(DOUBLY_MONOTONE, False, {
                    "e": e, "S_up": _iset(up, m), "S_down": _iset(down, m),
                })
        if down is None:
            goods |= bit
        else:
            chores |= bit
    return ClassReport(DOUBLY_MONOTONE, True, goods=_iset(goods, m), chores=_iset(chores, m))


def _verify_sign(spec: ValuationSpec, m: int, budget: Optional[int], nonneg: bool) -> ClassReport:
    values, f = _prepare(spec, m, budget)
    name = NONNEGATIVE if nonneg else NONPOSITIVE
    for S in subsets_by_size(m):
        if (f[S] < 0) if nonneg else (f[S] > 0):
            return ClassReport(name, False, {"S": _iset(S, m), "value": values[S]})
    return ClassReport(name, True)


def verify_nonnegative(spec: ValuationSpec, m: Optional[int] = None, budget: Optional[int] = None) -> ClassReport:
    return _verify_sign(spec, spec.m if m is None else m, budget, nonneg=True)


def verify_nonpositive(spec: ValuationSpec, m: Optional[int] = None, budget: Optional[int] = None) -> ClassReport:
    return _verify_sign(spec, spec.m if m is None else m, budget, nonneg=False)


def verify_marginal_witness(spec: ValuationSpec, m: Optional[int] = None, budget: Optional[int] = None) -> ClassReport:
    """
    Para todo A y todo B no vacío disjunto con v(A ∪ B) >= v(A) existe g ∈ B
    con v(A ∪ {g}) >= v(A). Contraejemplo: el primer (A, B) que lo incumple.
    """
    m = spec.m if m is None else m
    values, f = _prepare(spec, m, budget)
    full = full_mask(m)
    for A in subsets_by_size(m):
        outside = full & ~A
        good = 0
        for g in iter_bits(outside):
            if f[A | 1 << g] >= f[A]:
                good |= 1 << g
        bad = outside & ~good
        if not bad:
            continue
        candidates = sorted((B for B in submasks(bad) if B), key=lambda b: (popcount(b), b))
        for B in candidates:
            if f[A | B] >= f[A]:
                return ClassReport("marginal_witness", False, {
                    "A": _iset(A, m), "B": _iset(B, m),
                    "value_A": values[A], "value_AB": values[A | B],
                })
    return ClassReport("marginal_witness", True)


VERIFIERS = {
    SUBMODULAR: verify_submodular,
    SUPERMODULAR: verify_supermodular,
    SUBADDITIVE: verify_subadditive,
    SUPERADDITIVE: verify_superadditive,
    DOUBLY_MONOTONE: verify_doubly_monotone,
    NONNEGATIVE: verify_nonnegative,
    NONPOSITIVE: verify_nonpositive,
    "marginal_witness": verify_marginal_witness,
}
