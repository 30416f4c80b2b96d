"""
Núcleo del modelo de reparto equitativo
Conjuntos de ítems, asignaciones, jerarquía de errores y verificadores de
EQ1 / EF1 / testigo inferior sobre cualquier perfil de valuaciones
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, List, Optional, Protocol, Sequence, Tuple, Union

from config import Config

# Valores exactos: nunca punto flotante
Value = Fraction

EXACT = "exact"


# ===== ERRORES =====

class EquidadError(Exception):
    """Raíz de los errores del paquete"""


class InvalidAllocation(EquidadError, ValueError):
    """La asignación no es una partición del universo de ítems"""


class BudgetExceeded(EquidadError):
    """Una enumeración exhaustiva superaría su presupuesto"""

    def __init__(self, needed: int, budget: int, what: str = "enumeración"):
        self.needed = needed
        self.budget = budget
        super().__init__(f"{what}: se requieren {needed:,} evaluaciones, presupuesto {budget:,}")


class NotApplicable(EquidadError):
    """Ningún algoritmo disponible cubre la instancia"""


class PreconditionViolated(EquidadError, ValueError):
    """Un solver recibió una instancia fuera de su clase"""


class InvariantViolation(EquidadError, AssertionError):
    """Un invariante de lazo falló en modo depuración"""


def as_value(x: Union[int, str, Fraction]) -> Fraction:
    """Convierte enteros, fracciones o cadenas 'p/q' a un valor exacto"""
    if isinstance(x, bool) or isinstance(x, float):
        raise TypeError(f"valor no exacto: {x!r}")
    return Fraction(x)


# ===== MÁSCARAS DE BITS =====

def popcount(mask: int) -> int:
    return mask.bit_count()


def iter_bits(mask: int) -> Iterator[int]:
    """Índices presentes en la máscara, en orden ascendente"""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def full_mask(m: int) -> int:
    return (1 << m) - 1


@dataclass(frozen=True, order=True)
class ItemSet:
    """Subconjunto de {0..m-1} representado como máscara de bits"""

    bits: int
    m: int

    def __post_init__(self):
        if not 0 <= self.m <= Config.MAX_ITEMS:
            raise ValueError(f"universo de {self.m} ítems fuera de rango (máx {Config.MAX_ITEMS})")
        if self.bits < 0 or self.bits >> self.m:
            raise ValueError(f"máscara {self.bits:#x} contiene índices fuera de 0..{self.m - 1}")

    @classmethod
    def from_items(cls, items: Iterable[int], m: int) -> "ItemSet":
        bits = 0
        for e in items:
            if not 0 <= e < m:
                raise ValueError(f"ítem {e} fuera de 0..{m - 1}")
            bits |= 1 << e
        return cls(bits, m)

    @classmethod
    def empty(cls, m: int) -> "ItemSet":
        return cls(0, m)

    @classmethod
    def full(cls, m: int) -> "ItemSet":
        return cls(full_mask(m), m)

    @classmethod
    def singleton(cls, e: int, m: int) -> "ItemSet":
        return cls.from_items([e], m)

    def _same_universe(self, other: "ItemSet") -> None:
        if self.m != other.m:
            raise ValueError(f"universos distintos: {self.m} vs {other.m}")

    def __or__(self, other: "ItemSet") -> "ItemSet":
        self._same_universe(other)
        return ItemSet(self.bits | other.bits, self.m)

    def __and__(self, other: "ItemSet") -> "ItemSet":
        self._same_universe(other)
        return ItemSet(self.bits & other.bits, self.m)

    def __sub__(self, other: "ItemSet") -> "ItemSet":
        self._same_universe(other)
        return ItemSet(self.bits & ~other.bits, self.m)

    def complement(self) -> "ItemSet":
        return ItemSet(full_mask(self.m) & ~self.bits, self.m)

    def add(self, e: int) -> "ItemSet":
        return self | ItemSet.singleton(e, self.m)

    def remove(self, e: int) -> "ItemSet":
        return self - ItemSet.singleton(e, self.m)

    def issubset(self, other: "ItemSet") -> bool:
        self._same_universe(other)
        return self.bits & ~other.bits == 0

    def __contains__(self, e: int) -> bool:
        return 0 <= e < self.m and bool(self.bits >> e & 1)

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.bits)

    def __len__(self) -> int:
        return popcount(self.bits)

    def items(self) -> List[int]:
        return list(self)

    def __repr__(self) -> str:
        return "{" + ",".join(str(e) for e in self) + "}"


# ===== PERFIL DE VALUACIONES =====

class ValuationProfile(Protocol):
    """Lo mínimo que necesitan los verificadores: n agentes, m ítems y un oráculo"""

    n: int
    m: int

    def value(self, agent: int, bits: int) -> Fraction: ...


# ===== ASIGNACIONES =====

@dataclass(frozen=True)
class Allocation:
    """Partición ordenada del universo en n paquetes, uno por agente"""

    bundles: Tuple[ItemSet, ...]

    def __post_init__(self):
        if not self.bundles:
            raise InvalidAllocation("una asignación necesita al menos un agente")
        m = self.bundles[0].m
        union = 0
        for i, bundle in enumerate(self.bundles):
            if bundle.m != m:
                raise InvalidAllocation(f"el paquete del agente {i} usa un universo de {bundle.m} ítems, no {m}")
            if union & bundle.bits:
                repeated = ItemSet(union & bundle.bits, m)
                raise InvalidAllocation(f"ítems {repeated} asignados a más de un agente")
            union |= bundle.bits
        if union != full_mask(m):
            missing = ItemSet(full_mask(m) & ~union, m)
            raise InvalidAllocation(f"ítems {missing} sin asignar")

    @classmethod
    def from_masks(cls, masks: Sequence[int], m: int) -> "Allocation":
        return cls(tuple(ItemSet(b, m) for b in masks))

    @classmethod
    def from_lists(cls, lists: Sequence[Iterable[int]], m: int) -> "Allocation":
        try:
            return cls(tuple(ItemSet.from_items(items, m) for items in lists))
        except ValueError as e:
            if isinstance(e, InvalidAllocation):
                raise
            raise InvalidAllocation(str(e)) from e

    @property
    def n(self) -> int:
        return len(self.bundles)

    @property
    def m(self) -> int:
        return self.bundles[0].m

    @property
    def masks(self) -> Tuple[int, ...]:
        return tuple(b.bits for b in self.bundles)

    def as_lists(self) -> List[List[int]]:
        return [b.items() for b in self.bundles]

    def permuted(self, order: Sequence[int]) -> "Allocation":
        """Paquete k del resultado = paquete order[k] del original"""
        return Allocation(tuple(self.bundles[j] for j in order))

    def __getitem__(self, agent: int) -> ItemSet:
        return self.bundles[agent]


def _masks_for(profile: ValuationProfile, allocation: Allocation) -> Tuple[int, ...]:
    if allocation.n != profile.n or allocation.m != profile.m:
        raise InvalidAllocation(
            f"asignación de {allocation.n} agentes / {allocation.m} ítems "
            f"para una instancia de {profile.n} agentes / {profile.m} ítems"
        )
    return allocation.masks


def bundle_values(profile: ValuationProfile, allocation: Allocation) -> Tuple[Fraction, ...]:
    masks = _masks_for(profile, allocation)
    return tuple(profile.value(i, masks[i]) for i in range(profile.n))


# ===== EQ1 =====

@dataclass(frozen=True)
class Repair:
    """Cómo se repara un par desigual: quitando un ítem del rico o del pobre"""

    poor: int
    rich: int
    side: str
    item: int


@dataclass(frozen=True)
class EquityReport:
    is_eq1: bool
    values: Tuple[Fraction, ...]
    violations: Tuple[Tuple[int, int], ...] = ()
    repairs: Tuple[Repair, ...] = ()


def _repair_pair(profile: ValuationProfile, masks: Sequence[int], values: Sequence[Fraction],
                 poor: int, rich: int) -> Optional[Repair]:
    for g in iter_bits(masks[rich]):
        if values[poor] >= profile.value(rich, masks[rich] & ~(1 << g)):
            return Repair(poor, rich, "rich", g)
    for c in iter_bits(masks[poor]):
        if profile.value(poor, masks[poor] & ~(1 << c)) >= values[rich]:
            return Repair(poor, rich, "poor", c)
    return None


def is_eq1_pairwise_violation(profile: ValuationProfile, allocation: Allocation, poor: int, rich: int) -> bool:
    """(poor, rich) viola EQ1: el pobre vale menos y ninguna remoción lo repara"""
    masks = _masks_for(profile, allocation)
    values = [profile.value(i, masks[i]) for i in range(profile.n)]
    return values[poor] < values[rich] and _repair_pair(profile, masks, values, poor, rich) is None


def check_eq1(profile: ValuationProfile, allocation: Allocation) -> EquityReport:
    """
    Revisa EQ1: para cada par con v_i(A_i) < v_j(A_j) debe existir un ítem cuya
    remoción (del paquete rico o del pobre) cierre la brecha.
    """
    masks = _masks_for(profile, allocation)
    values = tuple(profile.value(i, masks[i]) for i in range(profile.n))
    violations: List[Tuple[int, int]] = []
    repairs: List[Repair] = []
    for i in range(profile.n):
        for j in range(profile.n):
            if values[i] < values[j]:
                repair = _repair_pair(profile, masks, values, i, j)
                if repair is None:
                    violations.append((i, j))
                else:
                    repairs.append(repair)
    return EquityReport(not violations, values, tuple(violations), tuple(repairs))


def check_eq(profile: ValuationProfile, allocation: Allocation) -> bool:
    """Equitatividad exacta: todos los agentes valoran su paquete igual"""
    return len(set(bundle_values(profile, allocation))) <= 1


def equitability_gap(profile: ValuationProfile, allocation: Allocation) -> Fraction:
    values = bundle_values(profile, allocation)
    return max(values) - min(values)


# ===== EF1 =====

def check_ef1(profile: ValuationProfile, allocation: Allocation) -> bool:
    """Libre de envidia salvo un ítem (comparación intra-agente)"""
    masks = _masks_for(profile, allocation)
    for i in range(profile.n):
        own = profile.value(i, masks[i])
        for j in range(profile.n):
            if i == j or own >= profile.value(i, masks[j]):
                continue
            if not any(
                profile.value(i, masks[i] & ~(1 << e)) >= profile.value(i, masks[j] & ~(1 << e))
                for e in iter_bits(masks[i] | masks[j])
            ):
                return False
    return True


# ===== TESTIGO INFERIOR =====

@dataclass(frozen=True)
class WitnessCertificate:
    """Por agente: 'exact' si v_i(A_i) = θ, o el ítem g con v_i(A_i \\ {g}) <= θ"""

    theta: Fraction
    per_agent: Tuple[Union[str, int], ...]

    def recheck(self, profile: ValuationProfile, allocation: Allocation) -> bool:
        masks = _masks_for(profile, allocation)
        if len(self.per_agent) != profile.n:
            return False
        for i, entry in enumerate(self.per_agent):
            own = profile.value(i, masks[i])
            if own < self.theta:
                return False
            if entry == EXACT:
                if own != self.theta:
                    return False
            elif not (masks[i] >> entry & 1) or profile.value(i, masks[i] & ~(1 << entry)) > self.theta:
                return False
        return True


@dataclass(frozen=True)
class WitnessCheck:
    ok: bool
    certificate: Optional[WitnessCertificate] = None
    clause: Optional[str] = None
    agent: Optional[int] = None
    reason: str = ""


def check_lower_witness(profile: ValuationProfile, allocation: Allocation, theta) -> WitnessCheck:
    """
    θ es testigo inferior si (a) todo agente vale al menos θ y (b) todo agente
    vale exactamente θ o baja a θ o menos al quitarle un ítem.
    """
    theta = as_value(theta)
    masks = _masks_for(profile, allocation)
    values = [profile.value(i, masks[i]) for i in range(profile.n)]
    for i, own in enumerate(values):
        if own < theta:
            return WitnessCheck(False, clause="a", agent=i,
                                reason=f"agente {i} vale {own} < θ = {theta}")
    per_agent: List[Union[str, int]] = []
    for i, own in enumerate(values):
        if own == theta:
            per_agent.append(EXACT)
            continue
        item = next((g for g in iter_bits(masks[i])
                     if profile.value(i, masks[i] & ~(1 << g)) <= theta), None)
        if item is None:
            return WitnessCheck(False, clause="b", agent=i,
                                reason=f"agente {i} vale {own} > θ = {theta} y ninguna remoción lo baja a θ")
        per_agent.append(item)
    return WitnessCheck(True, certificate=WitnessCertificate(theta, tuple(per_agent)))


def find_lower_witness(profile: ValuationProfile, allocation: Allocation) -> Optional[Tuple[Fraction, WitnessCertificate]]:
    """Mayor θ entre los valores de paquetes y de paquetes menos un ítem que sea testigo"""
    masks = _masks_for(profile, allocation)
    candidates = set()
    for i in range(profile.n):
        candidates.add(profile.value(i, masks[i]))
        for g in iter_bits(masks[i]):
            candidates.add(profile.value(i, masks[i] & ~(1 << g)))
    for theta in sorted(candidates, reverse=True):
        check = check_lower_witness(profile, allocation, theta)
        if check.ok:
            return theta, check.certificate
    return None


# ===== AGENTES RICOS Y POBRES =====

def rich_agents(profile: ValuationProfile, allocation: Allocation) -> frozenset:
    values = bundle_values(profile, allocation)
    top = max(values)
    return frozenset(i for i, v in enumerate(values) if v == top)


def poor_agents(profile: ValuationProfile, allocation: Allocation) -> frozenset:
    values = bundle_values(profile, allocation)
    bottom = min(values)
    return frozenset(i for i, v in enumerate(values) if v == bottom)
