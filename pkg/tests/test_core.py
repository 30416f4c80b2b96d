from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from equidad.core import (
    EXACT, Allocation, InvalidAllocation, ItemSet, Repair, as_value, check_ef1, check_eq, check_eq1,
    check_lower_witness, equitability_gap, find_lower_witness, is_eq1_pairwise_violation, iter_bits,
    poor_agents, rich_agents,
)
from equidad.oracle import iter_allocations
from equidad.valuations import Instance, Table
from tests.conftest import additive


# ===== ItemSet =====

def test_itemset_operations():
    S = ItemSet.from_items([0, 2], 4)
    T = ItemSet.from_items([2, 3], 4)
    assert repr(S) == "{0,2}"
    assert (S | T).items() == [0, 2, 3]
    assert (S & T).items() == [2]
    assert (S - T).items() == [0]
    assert S.complement().items() == [1, 3]
    assert S.add(1).items() == [0, 1, 2]
    assert S.remove(0).items() == [2]
    assert len(S) == 2 and 2 in S and 1 not in S and 7 not in S
    assert ItemSet.empty(4).issubset(S)
    assert not T.issubset(S)
    assert ItemSet.full(3).items() == [0, 1, 2]


def test_itemset_rejects_out_of_range():
    with pytest.raises(ValueError):
        ItemSet.from_items([4], 4)
    with pytest.raises(ValueError):
        ItemSet(0b10000, 4)
    with pytest.raises(ValueError):
        ItemSet.from_items([0], 3) | ItemSet.from_items([0], 4)


def test_iter_bits_is_ascending():
    assert list(iter_bits(0b101101)) == [0, 2, 3, 5]


def test_as_value_rejects_floats():
    assert as_value("3/6") == Fraction(1, 2)
    with pytest.raises(TypeError):
        as_value(0.5)
    with pytest.raises(TypeError):
        as_value(True)


# ===== Allocation =====

def test_allocation_must_be_a_partition():
    with pytest.raises(InvalidAllocation, match="más de un agente"):
        Allocation.from_lists([[0, 1], [1, 2]], 3)
    with pytest.raises(InvalidAllocation, match="sin asignar"):
        Allocation.from_lists([[0], [2]], 3)
    with pytest.raises(InvalidAllocation):
        Allocation.from_lists([[0, 5], [1, 2]], 3)


def test_allocation_accessors():
    allocation = Allocation.from_lists([[2], [0, 1], []], 3)
    assert allocation.n == 3 and allocation.m == 3
    assert allocation.masks == (0b100, 0b011, 0)
    assert allocation.as_lists() == [[2], [0, 1], []]
    assert allocation.permuted([1, 0, 2]).as_lists() == [[0, 1], [2], []]
    assert allocation[1].items() == [0, 1]


def test_dimension_mismatch_is_rejected():
    instance = additive((1, 1, 1), (1, 1, 1))
    with pytest.raises(InvalidAllocation):
        check_eq1(instance, Allocation.from_lists([[0], [1], [2]], 3))


# ===== EQ1 =====

def test_eq1_repaired_from_rich_side():
    instance = additive((1, 1, 1), (1, 1, 1))
    report = check_eq1(instance, Allocation.from_lists([[0, 1], [2]], 3))
    assert report.is_eq1
    assert report.values == (2, 1)
    assert report.repairs == (Repair(poor=1, rich=0, side="rich", item=0),)


def test_eq1_violation_when_poor_is_empty():
    instance = additive((1, 1, 1), (1, 1, 1))
    allocation = Allocation.from_lists([[0, 1, 2], []], 3)
    report = check_eq1(instance, allocation)
    assert not report.is_eq1
    assert report.violations == ((1, 0),)
    assert is_eq1_pairwise_violation(instance, allocation, 1, 0)
    assert not is_eq1_pairwise_violation(instance, allocation, 0, 1)


def test_eq1_repaired_from_poor_side_with_chores():
    instance = additive((-2, 0), (0, 0))
    report = check_eq1(instance, Allocation.from_lists([[0], [1]], 2))
    assert report.is_eq1
    assert report.repairs == (Repair(poor=0, rich=1, side="poor", item=0),)


def test_gap_and_exact_equitability():
    instance = additive((1, 1, 1), (1, 1, 1))
    allocation = Allocation.from_lists([[0, 1], [2]], 3)
    assert equitability_gap(instance, allocation) == 1
    assert not check_eq(instance, allocation)
    assert check_eq(additive((1, 1), (1, 1)), Allocation.from_lists([[0], [1]], 2))


def test_rich_and_poor_agents():
    instance = additive((1, 1, 1), (1, 1, 1), (1, 1, 1))
    allocation = Allocation.from_lists([[0, 1], [2], []], 3)
    assert rich_agents(instance, allocation) == frozenset({0})
    assert poor_agents(instance, allocation) == frozenset({2})


def test_ef1_detects_envy_beyond_one_item():
    instance = additive((1, 1, 1), (1, 1, 1))
    assert check_ef1(instance, Allocation.from_lists([[0, 1], [2]], 3))
    assert not check_ef1(instance, Allocation.from_lists([[0, 1, 2], []], 3))


# ===== Testigo inferior =====

def test_lower_witness_clauses():
    instance = additive((1, 1, 1), (1, 1, 1))
    allocation = Allocation.from_lists([[0, 1], [2]], 3)

    ok = check_lower_witness(instance, allocation, 1)
    assert ok.ok
    assert ok.certificate.per_agent == (0, EXACT)
    assert ok.certificate.recheck(instance, allocation)

    too_high = check_lower_witness(instance, allocation, 2)
    assert not too_high.ok and too_high.clause == "a" and too_high.agent == 1

    too_low = check_lower_witness(instance, allocation, 0)
    assert not too_low.ok and too_low.clause == "b" and too_low.agent == 0


def test_find_lower_witness_returns_largest_theta():
    instance = additive((1, 1, 1), (1, 1, 1))
    theta, certificate = find_lower_witness(instance, Allocation.from_lists([[0, 1], [2]], 3))
    assert theta == 1
    assert certificate.theta == 1


def test_find_lower_witness_none_when_not_eq1():
    instance = additive((1, 1, 1), (1, 1, 1))
    assert find_lower_witness(instance, Allocation.from_lists([[0, 1, 2], []], 3)) is None


# ===== Propiedades =====

def _table_strategy(m):
    return st.lists(st.integers(-4, 6), min_size=(1 << m) - 1, max_size=(1 << m) - 1).map(
        lambda rest: Table(tuple([0] + rest))
    )


@pytest.mark.property_based
@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3).flatmap(lambda m: st.tuples(st.just(m), _table_strategy(m))), st.integers(2, 3))
def test_eq1_and_ef1_coincide_for_identical_valuations(m_spec, n):
    m, spec = m_spec
    instance = Instance(m, (spec,) * n)
    for masks in iter_allocations(n, m):
        allocation = Allocation.from_masks(masks, m)
        assert check_eq1(instance, allocation).is_eq1 == check_ef1(instance, allocation)


@pytest.mark.property_based
@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3).flatmap(lambda m: st.tuples(st.just(m), _table_strategy(m), _table_strategy(m))))
def test_lower_witness_implies_eq1(m_specs):
    m, first, second = m_specs
    instance = Instance(m, (first, second))
    for masks in iter_allocations(2, m):
        allocation = Allocation.from_masks(masks, m)
        if find_lower_witness(instance, allocation) is not None:
            assert check_eq1(instance, allocation).is_eq1


def _instance_with_allocation(max_m, max_n):
    """(instancia, asignación) con tablas normalizadas e ítems repartidos al azar"""
    return st.tuples(st.integers(1, max_m), st.integers(2, max_n)).flatmap(
        lambda mn: st.tuples(
            st.lists(_table_strategy(mn[0]), min_size=mn[1], max_size=mn[1]),
            st.lists(st.integers(0, mn[1] - 1), min_size=mn[0], max_size=mn[0]),
        ).map(lambda drawn: (
            Instance(mn[0], tuple(drawn[0])),
            Allocation.from_lists([[e for e, a in enumerate(drawn[1]) if a == i] for i in range(mn[1])], mn[0]),
        ))
    )


@pytest.mark.property_based
@settings(max_examples=60, deadline=None)
@given(_instance_with_allocation(4, 3), st.data())
def test_eq1_verdict_is_symmetric_under_agent_relabeling(drawn, data):
    instance, allocation = drawn
    order = data.draw(st.permutations(range(instance.n)))
    relabeled = Instance(instance.m, tuple(instance.specs[j] for j in order))
    original = check_eq1(instance, allocation)
    report = check_eq1(relabeled, allocation.permuted(order))
    assert report.is_eq1 == original.is_eq1
    assert report.values == tuple(original.values[j] for j in order)
    assert {(order[i], order[j]) for i, j in report.violations} == set(original.violations)


@pytest.mark.property_based
@settings(max_examples=25, deadline=None)
@given(st.integers(1, 5).flatmap(lambda m: st.tuples(
    st.just(m), st.lists(_table_strategy(m), min_size=2, max_size=3),
)))
def test_negation_preserves_eq1_on_every_allocation(m_specs):
    m, specs = m_specs
    instance = Instance(m, tuple(specs))
    negated = instance.negated()
    for masks in iter_allocations(instance.n, m):
        allocation = Allocation.from_masks(masks, m)
        original = check_eq1(instance, allocation)
        flipped = check_eq1(negated, allocation)
        assert original.is_eq1 == flipped.is_eq1
        # El pobre pasa a ser el rico
        assert {(j, i) for i, j in flipped.violations} == set(original.violations)
