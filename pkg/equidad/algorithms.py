"""
Algoritmos de asignación EQ1
- Dos agentes con valuaciones generales (barrido de prefijos)
- Propiedad del ítem testigo marginal (submodulares y doblemente monótonas)
- No negativas, e idénticas subaditivas (paquetes válidos de valor mínimo)
- No negativas submodulares con paquetes no vacíos
- Despacho por clase, con negación para valuaciones no positivas
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from config import Config
from equidad.core import (
    Allocation, BudgetExceeded, InvariantViolation, NotApplicable, PreconditionViolated,
    WitnessCertificate, bundle_values, check_eq1, check_lower_witness, full_mask, iter_bits, popcount,
)
from equidad.valuations import (
    ALL_NONPOS, DOUBLY_MONOTONE, MIXED, NONNEGATIVE, SUBADDITIVE,
    SUBMODULAR, Additive, Instance, Negated, ValuationSpec, classes_of, grand_bundle_sign,
    verify_doubly_monotone, verify_marginal_witness,
)

TRIVIAL = "trivial"
TWO_AGENTS = "two-agents"
MARGINAL_WITNESS = "marginal-witness"
NONNEG = "nonnegative"
IDENTICAL_SUBADDITIVE = "identical-subadditive"
NONNEG_SUBMODULAR = "nonneg-submodular"
BRUTE = "brute"

SOLVERS = (TWO_AGENTS, MARGINAL_WITNESS, NONNEG, IDENTICAL_SUBADDITIVE, NONNEG_SUBMODULAR, BRUTE)


@dataclass
class SolveResult:
    allocation: Allocation
    witness: Optional[Tuple[Fraction, WitnessCertificate]]
    solver: str
    trace: Optional[List[Dict]] = None
    oracle_calls: int = 0

    @property
    def theta(self) -> Optional[Fraction]:
        return self.witness[0] if self.witness else None


class CountingOracle:
    """Perfil de valuaciones que cuenta las consultas al oráculo"""

    def __init__(self, instance: Instance):
        self.instance = instance
        self.n = instance.n
        self.m = instance.m
        self.calls = 0

    def value(self, agent: int, bits: int) -> Fraction:
        self.calls += 1
        return self.instance.value(agent, bits)


# ===== AUXILIARES =====

def _require_normalized(instance: Instance) -> None:
    for i in range(instance.n):
        empty = instance.value(i, 0)
        if empty != 0:
            raise PreconditionViolated(f"el agente {i} vale {empty} el conjunto vacío (se requiere 0)")


def _require_classes(instance: Instance, accepted: Sequence[str], solver: str) -> None:
    for i, spec in enumerate(instance.specs):
        if not set(accepted) & classes_of(spec):
            raise PreconditionViolated(
                f"{solver}: el agente {i} declara '{spec.declared_class}', se requiere una de {list(accepted)}"
            )


def _require_nonneg_grand(oracle: CountingOracle) -> None:
    full = full_mask(oracle.m)
    for i in range(oracle.n):
        value = oracle.value(i, full)
        if value < 0:
            raise PreconditionViolated(f"el agente {i} vale {value} < 0 el paquete total")


def _witness(instance: Instance, allocation: Allocation, theta: Fraction) -> Tuple[Fraction, WitnessCertificate]:
    check = check_lower_witness(instance, allocation, theta)
    if not check.ok:
        raise InvariantViolation(f"θ = {theta} no es testigo inferior: {check.reason}")
    return theta, check.certificate


def _degenerate(instance: Instance) -> Optional[SolveResult]:
    """m = 0 reparte paquetes vacíos y n = 1 entrega M; θ solo si certifica"""
    if instance.m == 0:
        allocation = Allocation.from_masks([0] * instance.n, 0)
    elif instance.n == 1:
        allocation = Allocation.from_masks([full_mask(instance.m)], instance.m)
    else:
        return None
    theta = min(bundle_values(instance, allocation))
    check = check_lower_witness(instance, allocation, theta)
    witness = (theta, check.certificate) if check.ok else None
    return SolveResult(allocation, witness, TRIVIAL)


def _budget(needed: int, budget: Optional[int], what: str) -> None:
    budget = Config.SUBSET_BUDGET if budget is None else budget
    if needed > budget:
        raise BudgetExceeded(needed, budget, what)


# ===== DOS AGENTES =====

def solve_two_agents(instance: Instance, trace: bool = False) -> SolveResult:
    """
    Barrido de prefijos S_t = {e_1..e_t}: i es el primer t con v_1(S_t) > v_2(M \\ S_t).
    Devuelve (S_i, M \\ S_i) si es EQ1, si no (S_{i-1}, M \\ S_{i-1}).
    """
    if instance.n != 2:
        raise PreconditionViolated(f"{TWO_AGENTS} requiere exactamente 2 agentes, hay {instance.n}")
    _require_normalized(instance)
    oracle = CountingOracle(instance)
    _require_nonneg_grand(oracle)
    m = instance.m
    full = full_mask(m)
    steps: List[Dict] = []

    if oracle.value(0, full) == 0:
        allocation = Allocation.from_masks([full, 0], m)
        return SolveResult(allocation, None, TWO_AGENTS, steps if trace else None, oracle.calls)

    first = m
    for t in range(1, m + 1):
        prefix = full_mask(t)
        left, right = oracle.value(0, prefix), oracle.value(1, full & ~prefix)
        steps.append({"t": t, "v1_prefix": left, "v2_rest": right})
        if left > right:
            first = t
            break

    prefix = full_mask(first)
    allocation = Allocation.from_masks([prefix, full & ~prefix], m)
    if not check_eq1(oracle, allocation).is_eq1:
        prefix = full_mask(first - 1)
        allocation = Allocation.from_masks([prefix, full & ~prefix], m)
    steps.append({"chosen_t": popcount(prefix)})
    return SolveResult(allocation, None, TWO_AGENTS, steps if trace else None, oracle.calls)


# ===== ÍTEM TESTIGO MARGINAL =====

WitnessFinder = Callable[[CountingOracle, int, int, int, Fraction], Optional[int]]


def singleton_witness(oracle: CountingOracle, agent: int, bundle: int, pool: int, mu: Fraction) -> Optional[int]:
    """Primer g del pool (índice más bajo) con v(A ∪ {g}) >= μ"""
    for g in iter_bits(pool):
        if oracle.value(agent, bundle | 1 << g) >= mu:
            return g
    return None


def goods_of(spec: ValuationSpec) -> int:
    """Máscara de bienes de una valuación doblemente monótona"""
    if isinstance(spec, Additive):
        return sum(1 << e for e, v in enumerate(spec.values) if v >= 0)
    if isinstance(spec, Negated) and isinstance(spec.inner, Additive):
        return sum(1 << e for e, v in enumerate(spec.inner.values) if v <= 0)
    report = verify_doubly_monotone(spec)
    if not report.holds:
        raise PreconditionViolated(f"la valuación no es doblemente monótona: {report.counterexample}")
    return report.goods.bits


def goods_first_witness(instance: Instance) -> WitnessFinder:
    """Prefiere un bien del pool (marginal >= 0 siempre); si no hay, barre como singleton_witness"""
    goods = [goods_of(spec) for spec in instance.specs]

    def finder(oracle, agent, bundle, pool, mu):
        available = pool & goods[agent]
        if available:
            return next(iter_bits(available))
        return singleton_witness(oracle, agent, bundle, pool, mu)

    return finder


def _check_witness_invariants(instance: Instance, masks: Sequence[int], pool: int, mu_prev: Fraction) -> None:
    for j, bundle in enumerate(masks):
        own = instance.value(j, bundle)
        if own < mu_prev:
            raise InvariantViolation(f"agente {j} vale {own} < μ previo {mu_prev}")
        if own > mu_prev and not any(instance.value(j, bundle & ~(1 << g)) <= mu_prev for g in iter_bits(bundle)):
            raise InvariantViolation(f"agente {j} no baja a μ previo {mu_prev} quitando un ítem")
        extended = instance.value(j, bundle | pool)
        if extended < mu_prev:
            raise InvariantViolation(f"agente {j} con todo el pool vale {extended} < μ previo {mu_prev}")


def _marginal_witness_loop(oracle: CountingOracle, instance: Instance, masks: List[int], pool: int,
                           finder: WitnessFinder, steps: List[Dict], check: bool,
                           require_nonneg: bool = False) -> Fraction:
    """Lazo común: el agente más pobre recibe un ítem testigo hasta vaciar el pool"""
    n = oracle.n
    mu_prev = Fraction(0)
    while pool:
        values = [oracle.value(i, masks[i]) for i in range(n)]
        if require_nonneg and any(v < 0 for v in values):
            raise PreconditionViolated(f"valor negativo encontrado: {values}")
        if check:
            _check_witness_invariants(instance, masks, pool, mu_prev)
        mu = min(values)
        poorest = values.index(mu)
        if check and mu < mu_prev:
            raise InvariantViolation(f"μ decreció de {mu_prev} a {mu}")

        for i in range(n):
            extended = oracle.value(i, masks[i] | pool)
            if extended <= mu:
                masks[i] |= pool
                steps.append({"mu": mu, "exit": "whole_pool", "agent": i})
                return extended

        for i in range(n):
            for h in iter_bits(pool):
                if oracle.value(i, masks[i] | (pool & ~(1 << h))) <= mu:
                    masks[i] |= pool
                    steps.append({"mu": mu, "exit": "pool_minus_one", "agent": i, "item": h})
                    return mu

        g = finder(oracle, poorest, masks[poorest], pool, mu)
        if g is None:
            raise PreconditionViolated(
                f"no hay ítem testigo para el agente {poorest}: la valuación no tiene la propiedad marginal"
            )
        masks[poorest] |= 1 << g
        pool &= ~(1 << g)
        steps.append({"mu": mu, "agent": poorest, "item": g})
        mu_prev = mu

    # Pool agotado: el mínimo final acota por debajo y cada remoción baja a μ previo
    return min(instance.value(i, masks[i]) for i in range(n))


def _resolve_finder(instance: Instance, witness_finder: Union[str, WitnessFinder]) -> WitnessFinder:
    if callable(witness_finder):
        return witness_finder
    if witness_finder == "singleton":
        return singleton_witness
    if witness_finder == "goods-first":
        return goods_first_witness(instance)
    raise ValueError(f"estrategia de testigo desconocida: {witness_finder!r}")


def solve_marginal_witness(instance: Instance, witness_finder: Union[str, WitnessFinder] = "singleton",
                           trace: bool = False, check_invariants: Optional[bool] = None,
                           verify: bool = False) -> SolveResult:
    """
    EQ1 para valuaciones con la propiedad del ítem testigo marginal y v_i(M) >= 0.
    La clase se confía vía declared_class salvo que verify=True.
    """
    check = Config.CHECK_INVARIANTS if check_invariants is None else check_invariants
    _require_normalized(instance)
    if verify:
        for i, spec in enumerate(instance.specs):
            report = verify_marginal_witness(spec)
            if not report.holds:
                raise PreconditionViolated(f"agente {i} sin propiedad marginal: {report.counterexample}")
    else:
        _require_classes(instance, (SUBMODULAR, DOUBLY_MONOTONE), MARGINAL_WITNESS)
    degenerate = _degenerate(instance)
    if degenerate:
        return degenerate

    oracle = CountingOracle(instance)
    _require_nonneg_grand(oracle)
    finder = _resolve_finder(instance, witness_finder)
    masks = [0] * instance.n
    steps: List[Dict] = []
    theta = _marginal_witness_loop(oracle, instance, masks, full_mask(instance.m), finder, steps, check)
    allocation = Allocation.from_masks(masks, instance.m)
    return SolveResult(allocation, _witness(instance, allocation, theta), MARGINAL_WITNESS,
                       steps if trace else None, oracle.calls)


def solve_nonneg_submodular(instance: Instance, trace: bool = False,
                            check_invariants: Optional[bool] = None) -> SolveResult:
    """Como solve_marginal_witness pero el agente i arranca con el ítem i: paquetes no vacíos si m >= n"""
    check = Config.CHECK_INVARIANTS if check_invariants is None else check_invariants
    _require_normalized(instance)
    _require_classes(instance, (SUBMODULAR,), NONNEG_SUBMODULAR)
    _require_classes(instance, (NONNEGATIVE,), NONNEG_SUBMODULAR)
    degenerate = _degenerate(instance)
    if degenerate:
        return degenerate
    if instance.m < instance.n:
        raise PreconditionViolated(f"{NONNEG_SUBMODULAR} requiere m >= n ({instance.m} < {instance.n})")

    oracle = CountingOracle(instance)
    masks = [1 << i for i in range(instance.n)]
    pool = full_mask(instance.m) & ~full_mask(instance.n)
    steps: List[Dict] = []
    theta = _marginal_witness_loop(oracle, instance, masks, pool, singleton_witness, steps, check,
                                   require_nonneg=True)
    allocation = Allocation.from_masks(masks, instance.m)
    return SolveResult(allocation, _witness(instance, allocation, theta), NONNEG_SUBMODULAR,
                       steps if trace else None, oracle.calls)


# ===== PAQUETES VÁLIDOS DE VALOR MÍNIMO =====

def _valid_bundles(pool: int, n: int) -> List[int]:
    """T ⊆ pool no vacío que deja al menos n-1 ítems"""
    items = list(iter_bits(pool))
    limit = len(items) - (n - 1)
    bundles = []
    for size in range(1, limit + 1):
        for combo in combinations(items, size):
            bundles.append(sum(1 << e for e in combo))
    return bundles


def _check_rich(instance: Instance, masks: Sequence[int], receiver: int) -> None:
    values = [instance.value(i, masks[i]) for i in range(instance.n)]
    if values[receiver] != max(values):
        raise InvariantViolation(f"el agente {receiver} recibió pero no es rico: {values}")


def _min_bundle_loop(oracle: CountingOracle, instance: Instance, masks: List[int], pool: int,
                     last: int, steps: List[Dict], check: bool) -> Tuple[int, int]:
    """
    Mientras |R| >= n: entre todo agente j y paquete válido T, el par que
    minimiza v_j(A_j ∪ T) (desempate: agente, |T|, máscara) recibe T.
    """
    n = oracle.n
    while popcount(pool) >= n:
        best = None
        agent_minimum = [None] * n
        for T in _valid_bundles(pool, n):
            for j in range(n):
                value = oracle.value(j, masks[j] | T)
                key = (value, j, popcount(T), T)
                if best is None or key < best:
                    best = key
                if agent_minimum[j] is None or value < agent_minimum[j]:
                    agent_minimum[j] = value
        value, last, _, T = best
        masks[last] |= T
        pool &= ~T
        steps.append({"agent": last, "bundle": list(iter_bits(T)), "value": value})
        if check:
            _check_rich(instance, masks, last)
            if any(agent_minimum[i] < value for i in range(n) if i != last):
                raise InvariantViolation("un agente no receptor tenía un paquete válido de menor valor")

    others = [i for i in range(n) if i != last]
    for i, e in zip(others, iter_bits(pool)):
        masks[i] |= 1 << e
    return last, pool


def solve_nonnegative(instance: Instance, trace: bool = False, check_invariants: Optional[bool] = None,
                      budget: Optional[int] = None) -> SolveResult:
    """EQ1 para valuaciones no negativas; θ = valor del último receptor"""
    check = Config.CHECK_INVARIANTS if check_invariants is None else check_invariants
    _require_normalized(instance)
    _require_classes(instance, (NONNEGATIVE,), NONNEG)
    degenerate = _degenerate(instance)
    if degenerate:
        return degenerate
    if instance.m >= instance.n:
        _budget(1 << instance.m, budget, NONNEG)

    oracle = CountingOracle(instance)
    masks = [0] * instance.n
    steps: List[Dict] = []
    last, _ = _min_bundle_loop(oracle, instance, masks, full_mask(instance.m), instance.n - 1, steps, check)
    allocation = Allocation.from_masks(masks, instance.m)
    theta = instance.value(last, masks[last])
    return SolveResult(allocation, _witness(instance, allocation, theta), NONNEG,
                       steps if trace else None, oracle.calls)


def _largest_negative_subset(oracle: CountingOracle) -> int:
    m = oracle.m
    for size in range(m, 0, -1):
        candidates = sorted(sum(1 << e for e in combo) for combo in combinations(range(m), size))
        for L in candidates:
            if oracle.value(0, L) < 0:
                return L
    return 0


def solve_identical_subadditive(instance: Instance, trace: bool = False,
                                check_invariants: Optional[bool] = None,
                                budget: Optional[int] = None) -> SolveResult:
    """
    Valuación común subaditiva con v(M) >= 0: el agente 0 arranca con el mayor
    conjunto L de valor negativo y luego corre el lazo de paquetes mínimos.
    """
    check = Config.CHECK_INVARIANTS if check_invariants is None else check_invariants
    if not instance.is_identical():
        raise PreconditionViolated(f"{IDENTICAL_SUBADDITIVE} requiere valuaciones idénticas")
    _require_normalized(instance)
    _require_classes(instance, (SUBADDITIVE,), IDENTICAL_SUBADDITIVE)
    degenerate = _degenerate(instance)
    if degenerate:
        return degenerate
    _budget(1 << instance.m, budget, IDENTICAL_SUBADDITIVE)

    oracle = CountingOracle(instance)
    _require_nonneg_grand(oracle)
    n, m = instance.n, instance.m
    negative = _largest_negative_subset(oracle)
    masks = [0] * n
    masks[0] = negative
    pool = full_mask(m) & ~negative
    steps: List[Dict] = [{"negative_subset": list(iter_bits(negative))}]

    if popcount(pool) <= n:
        # Un ítem del pool por agente, empezando por el agente 0
        for i, e in enumerate(iter_bits(pool)):
            masks[i] |= 1 << e
        theta = Fraction(0)
    else:
        last, _ = _min_bundle_loop(oracle, instance, masks, pool, 0, steps, check)
        theta = instance.value(last, masks[last])

    allocation = Allocation.from_masks(masks, m)
    return SolveResult(allocation, _witness(instance, allocation, theta), IDENTICAL_SUBADDITIVE,
                       steps if trace else None, oracle.calls)


# ===== DESPACHO =====

def _all_have(instance: Instance, *tags: str) -> bool:
    return all(set(tags) <= classes_of(spec) for spec in instance.specs)


def _all_have_any(instance: Instance, *tags: str) -> bool:
    return all(set(tags) & classes_of(spec) for spec in instance.specs)


def _route(instance: Instance) -> str:
    if instance.n == 2:
        return TWO_AGENTS
    if _all_have(instance, NONNEGATIVE, SUBMODULAR) and instance.m >= instance.n:
        return NONNEG_SUBMODULAR
    if _all_have_any(instance, SUBMODULAR, DOUBLY_MONOTONE):
        return MARGINAL_WITNESS
    if _all_have(instance, NONNEGATIVE):
        return NONNEG
    if instance.is_identical() and _all_have(instance, SUBADDITIVE):
        return IDENTICAL_SUBADDITIVE
    raise NotApplicable(
        "ningún algoritmo cubre la instancia: con n >= 3 y valuaciones generales "
        "una asignación EQ1 puede no existir (use --force brute)"
    )


def _run(instance: Instance, solver: str, trace: bool, budget: Optional[int],
         subset_budget: Optional[int]) -> SolveResult:
    if solver == TWO_AGENTS:
        return solve_two_agents(instance, trace=trace)
    if solver == MARGINAL_WITNESS:
        return solve_marginal_witness(instance, trace=trace)
    if solver == NONNEG:
        return solve_nonnegative(instance, trace=trace, budget=subset_budget)
    if solver == IDENTICAL_SUBADDITIVE:
        return solve_identical_subadditive(instance, trace=trace, budget=subset_budget)
    if solver == NONNEG_SUBMODULAR:
        return solve_nonneg_submodular(instance, trace=trace)
    if solver == BRUTE:
        from equidad.oracle import first_eq1_allocation
        allocation = first_eq1_allocation(instance, budget=budget)
        if allocation is None:
            raise NotApplicable("el oráculo exhaustivo no encontró asignación EQ1")
        return SolveResult(allocation, None, BRUTE)
    raise ValueError(f"solver desconocido: {solver!r}")


def solve_dispatch(instance: Instance, force: Optional[str] = None, trace: bool = False,
                   budget: Optional[int] = None, subset_budget: Optional[int] = None) -> SolveResult:
    """
    Elige el algoritmo por signo del paquete total y clases declaradas.
    budget acota las asignaciones del oráculo exhaustivo (BRUTE_BUDGET) y
    subset_budget los subconjuntos por ronda de los solvers exponenciales (SUBSET_BUDGET).
    Si todos los v_i(M) <= 0 resuelve la instancia negada y devuelve la misma
    asignación (sin testigo, que no se transfiere).
    """
    if force is not None and force not in SOLVERS:
        raise ValueError(f"solver desconocido: {force!r}")
    if force == BRUTE:
        return _run(instance, BRUTE, trace, budget, subset_budget)
    degenerate = _degenerate(instance)
    if degenerate:
        return degenerate

    sign = grand_bundle_sign(instance)
    if sign == MIXED:
        values = instance.grand_bundle_values()
        positive = next(i for i, v in enumerate(values) if v > 0)
        negative = next(i for i, v in enumerate(values) if v < 0)
        raise NotApplicable(
            f"signos mixtos del paquete total: agente {positive} vale {values[positive]}, "
            f"agente {negative} vale {values[negative]}"
        )
    if sign == ALL_NONPOS:
        result = solve_dispatch(instance.negated(), force=force, trace=trace, budget=budget,
                                subset_budget=subset_budget)
        return SolveResult(result.allocation, None, f"negation+{result.solver}", result.trace, result.oracle_calls)

    solver = force or _route(instance)
    return _run(instance, solver, trace, budget, subset_budget)
