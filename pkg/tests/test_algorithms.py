from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from equidad.algorithms import (
    BRUTE, IDENTICAL_SUBADDITIVE, MARGINAL_WITNESS, NONNEG, NONNEG_SUBMODULAR, TRIVIAL, TWO_AGENTS,
    CountingOracle, goods_first_witness, solve_dispatch, solve_identical_subadditive,
    solve_marginal_witness, solve_nonneg_submodular, solve_nonnegative, solve_two_agents,
)
from equidad.core import (
    BudgetExceeded, NotApplicable, PreconditionViolated, check_ef1, check_eq1, check_lower_witness,
)
from equidad.generators import (
    additive_mixed_instance, cut_instance, doubly_monotone_table_instance, general_table_instance,
    identical_subadditive_instance, make_rng, nonneg_table_instance, submodular_table_instance,
)
from equidad.graphkit import build_graph
from equidad.instance_io import load_instance
from equidad.reductions import nonexistence_instance
from equidad.valuations import NONNEGATIVE, THIRD, Additive, Cut, HardnessPair, Instance, Table
from tests.conftest import additive

SEEDS = st.integers(0, 2 ** 32 - 1)


def _certified(instance, result):
    assert check_eq1(instance, result.allocation).is_eq1
    if result.witness is not None:
        assert check_lower_witness(instance, result.allocation, result.theta).ok


# ===== Dos agentes =====

def test_two_agents_falls_back_to_previous_prefix():
    result = solve_two_agents(additive((1, 1), (1, 1)), trace=True)
    assert result.allocation.as_lists() == [[0], [1]]
    assert result.solver == TWO_AGENTS
    assert result.trace[-1] == {"chosen_t": 1}


def test_two_agents_gives_everything_when_first_grand_bundle_is_zero(fixtures_dir):
    instance = load_instance(fixtures_dir / "dos_agentes_total_cero.json")
    result = solve_two_agents(instance)
    assert result.allocation.as_lists() == [[0, 1, 2], []]
    _certified(instance, result)


def test_two_agents_requires_two_agents():
    with pytest.raises(PreconditionViolated):
        solve_two_agents(additive((1,), (1,), (1,)))


def test_two_agents_requires_nonnegative_grand_bundle():
    with pytest.raises(PreconditionViolated):
        solve_two_agents(additive((1, -3), (1, 1)))


def test_solvers_require_normalized_valuations():
    instance = Instance(1, (Table((1, 2)), Table((0, 1))))
    with pytest.raises(PreconditionViolated, match="conjunto vacío"):
        solve_two_agents(instance)


@pytest.mark.property_based
@settings(max_examples=60, deadline=None)
@given(SEEDS, st.integers(0, 6))
def test_two_agents_always_eq1_within_call_bound(seed, m):
    instance = general_table_instance(make_rng(seed), 2, m)
    result = solve_two_agents(instance)
    _certified(instance, result)
    assert result.oracle_calls <= 4 * m + 4


# ===== Ítem testigo marginal =====

def test_marginal_witness_small_additive():
    instance = additive((2, 1), (2, 1))
    result = solve_marginal_witness(instance, trace=True)
    assert result.allocation.as_lists() == [[0], [1]]
    assert result.theta == 0
    assert result.trace[-1]["exit"] == "pool_minus_one"
    _certified(instance, result)


def test_marginal_witness_rejects_supermodular_agents():
    with pytest.raises(PreconditionViolated):
        solve_marginal_witness(nonexistence_instance())


def test_marginal_witness_verify_mode_finds_missing_property():
    hardness = HardnessPair((1, 1, 1, 1, 1))
    instance = Instance(5, (hardness, hardness, HardnessPair((1, 1, 1, 1, 1), THIRD)))
    with pytest.raises(PreconditionViolated, match="propiedad marginal"):
        solve_marginal_witness(instance, verify=True)


def test_goods_first_witness_prefers_goods():
    instance = additive((-1, 3, 2), (2, -1, 3))
    finder = goods_first_witness(instance)
    oracle = CountingOracle(instance)
    assert finder(oracle, 0, 0, 0b111, Fraction(0)) == 1
    assert finder(oracle, 1, 0, 0b010, Fraction(0)) is None
    result = solve_marginal_witness(instance, witness_finder="goods-first")
    _certified(instance, result)


def test_unknown_witness_finder():
    with pytest.raises(ValueError):
        solve_marginal_witness(additive((1, 1), (1, 1)), witness_finder="aleatorio")


@pytest.mark.property_based
@settings(max_examples=60, deadline=None)
@given(SEEDS, st.integers(2, 4), st.integers(1, 8), st.booleans())
def test_marginal_witness_on_doubly_monotone(seed, n, m, tables):
    rng = make_rng(seed)
    build = doubly_monotone_table_instance if tables else additive_mixed_instance
    instance = build(rng, n, m)
    result = solve_marginal_witness(instance, check_invariants=True)
    _certified(instance, result)


@pytest.mark.property_based
@settings(max_examples=40, deadline=None)
@given(SEEDS, st.integers(2, 4), st.integers(1, 8))
def test_marginal_witness_on_submodular_tables(seed, n, m):
    instance = submodular_table_instance(make_rng(seed), n, m)
    result = solve_marginal_witness(instance, check_invariants=True)
    _certified(instance, result)


# ===== Submodulares no negativas =====

def test_nonneg_submodular_on_path():
    path = build_graph(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
    instance = Instance(5, (Cut(path),) * 2)
    result = solve_nonneg_submodular(instance)
    assert result.allocation.as_lists() == [[0], [1, 2, 3, 4]]
    assert result.theta == 1


def test_nonneg_submodular_needs_enough_items():
    instance = Instance(2, (Cut(build_graph(2, [(0, 1)])),) * 3)
    with pytest.raises(PreconditionViolated):
        solve_nonneg_submodular(instance)


@pytest.mark.property_based
@settings(max_examples=40, deadline=None)
@given(SEEDS, st.integers(2, 4), st.integers(4, 10))
def test_nonneg_submodular_bundles_nonempty_with_polynomial_calls(seed, n, m):
    instance = cut_instance(make_rng(seed), n, m)
    result = solve_nonneg_submodular(instance)
    _certified(instance, result)
    assert all(len(bundle) > 0 for bundle in result.allocation.bundles)
    assert result.oracle_calls <= 4 * n * m * m


# ===== No negativas =====

def test_nonnegative_identical_additive():
    instance = additive((1, 1, 1), (1, 1, 1), declared_class=NONNEGATIVE)
    result = solve_nonnegative(instance, trace=True)
    assert result.allocation.as_lists() == [[0, 2], [1]]
    assert result.theta == 1
    assert [step["agent"] for step in result.trace] == [0, 1]


def test_nonnegative_budget():
    with pytest.raises(BudgetExceeded):
        solve_nonnegative(additive((1, 1, 1), (1, 1, 1), declared_class=NONNEGATIVE), budget=4)


def test_nonnegative_rejects_undeclared_classes():
    instance = Instance(1, (Table((0, 1)), Table((0, 1))))
    with pytest.raises(PreconditionViolated):
        solve_nonnegative(instance)


@pytest.mark.property_based
@settings(max_examples=40, deadline=None)
@given(SEEDS, st.integers(2, 3), st.integers(1, 6))
def test_nonnegative_tables(seed, n, m):
    instance = nonneg_table_instance(make_rng(seed), n, m)
    result = solve_nonnegative(instance, check_invariants=True)
    _certified(instance, result)
    if m >= n:
        assert all(len(bundle) > 0 for bundle in result.allocation.bundles)


# ===== Subaditivas idénticas =====

def test_identical_subadditive_starts_from_largest_negative_subset():
    instance = additive((-3, 2, 2, 2), (-3, 2, 2, 2))
    result = solve_identical_subadditive(instance, trace=True)
    assert result.trace[0] == {"negative_subset": [0, 1]}
    assert result.allocation.as_lists() == [[0, 1, 2], [3]]
    assert result.theta == 0
    _certified(instance, result)


def test_identical_subadditive_requires_identical_valuations():
    with pytest.raises(PreconditionViolated):
        solve_identical_subadditive(additive((1, 1), (1, 2)))


@pytest.mark.property_based
@settings(max_examples=40, deadline=None)
@given(SEEDS, st.integers(2, 3), st.integers(1, 6))
def test_identical_subadditive_is_eq1_and_ef1(seed, n, m):
    instance = identical_subadditive_instance(make_rng(seed), n, m)
    result = solve_identical_subadditive(instance, check_invariants=True)
    _certified(instance, result)
    assert check_ef1(instance, result.allocation)


# ===== Despacho =====

def test_dispatch_trivial_cases():
    single = solve_dispatch(additive((1, -1)))
    assert single.solver == TRIVIAL
    assert single.allocation.as_lists() == [[0, 1]]
    empty = solve_dispatch(Instance(0, (Additive(()), Additive(()), Additive(()))))
    assert empty.solver == TRIVIAL
    assert empty.theta == 0


def test_dispatch_trivial_cases_accept_general_tables():
    # Sin ítems los signos del paquete total no importan
    empty = solve_dispatch(Instance(0, (Table((5,)), Table((-3,)))))
    assert empty.solver == TRIVIAL
    assert empty.allocation.as_lists() == [[], []]
    assert empty.witness is None

    equal = solve_dispatch(Instance(0, (Table((2,)), Table((2,)))))
    assert equal.theta == 2

    single = solve_dispatch(Instance(1, (Table((1, 4)),)))
    assert single.solver == TRIVIAL
    assert single.allocation.as_lists() == [[0]]
    assert single.theta == 4

    negative = solve_dispatch(Instance(2, (Table((0, -1, -1, -5)),)))
    assert negative.solver == TRIVIAL
    assert negative.allocation.as_lists() == [[0, 1]]


def test_dispatch_routes_by_class():
    assert solve_dispatch(additive((1, 2), (2, 1))).solver == TWO_AGENTS
    assert solve_dispatch(additive((1, -1, 2), (1, 1, 0), (0, 0, 1))).solver == MARGINAL_WITNESS
    cut = Cut(build_graph(4, [(0, 1), (1, 2), (2, 3)]))
    assert solve_dispatch(Instance(4, (cut,) * 3)).solver == NONNEG_SUBMODULAR
    table = Table(tuple(range(16)), declared_class=NONNEGATIVE)
    assert solve_dispatch(Instance(4, (table,) * 3)).solver == NONNEG


def test_dispatch_rejects_mixed_signs(fixtures_dir):
    instance = load_instance(fixtures_dir / "signos_mixtos.json")
    with pytest.raises(NotApplicable, match="agente 0.*agente 1"):
        solve_dispatch(instance)


def test_dispatch_without_applicable_algorithm():
    with pytest.raises(NotApplicable):
        solve_dispatch(nonexistence_instance())
    with pytest.raises(NotApplicable):
        solve_dispatch(nonexistence_instance(), force=BRUTE)


def test_dispatch_force_brute_finds_allocation():
    instance = additive((1, 1, 1), (1, 1, 1), (1, 1, 1))
    result = solve_dispatch(instance, force=BRUTE)
    assert result.solver == BRUTE and result.witness is None
    assert check_eq1(instance, result.allocation).is_eq1


def test_dispatch_unknown_solver():
    with pytest.raises(ValueError):
        solve_dispatch(additive((1, 1), (1, 1)), force="voraz")


@pytest.mark.parametrize("name, solver", [
    ("negacion_dos_agentes.json", f"negation+{TWO_AGENTS}"),
    ("negacion_supermodular.json", f"negation+{MARGINAL_WITNESS}"),
    ("negacion_doble_monotona.json", f"negation+{MARGINAL_WITNESS}"),
    ("negacion_superaditiva_identica.json", f"negation+{IDENTICAL_SUBADDITIVE}"),
])
def test_dispatch_solves_nonpositive_instances_by_negation(fixtures_dir, name, solver):
    instance = load_instance(fixtures_dir / name)
    result = solve_dispatch(instance)
    assert result.solver == solver
    assert result.witness is None
    assert check_eq1(instance, result.allocation).is_eq1
