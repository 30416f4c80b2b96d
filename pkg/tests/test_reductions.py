import pytest

from config import Config

from equidad.core import ItemSet, PreconditionViolated
from equidad.oracle import first_eq1_allocation
from equidad.reductions import (
    PartitionInput, equal_sum_bipartition, is_restricted, nonexistence_instance, partition_to_restricted,
    restricted_inputs, restricted_to_instance,
)
from equidad.valuations import FIRST_TWO, SUPERMODULAR, THIRD, classes_of


def test_partition_input_requires_positive_integers():
    with pytest.raises(ValueError):
        PartitionInput((1, 0, 2))
    assert PartitionInput((3, 1)).total == 4


def test_transformation_to_restricted_partition():
    restricted = partition_to_restricted(PartitionInput((1, 1, 2)))
    assert restricted.values == (1, 1, 2, 4, 4, 4, 4)
    assert is_restricted(restricted)
    assert not is_restricted(PartitionInput((1, 1, 2)))
    with pytest.raises(ValueError):
        partition_to_restricted(PartitionInput(()))


def test_equal_sum_bipartition_searches_by_increasing_mask():
    left, right = equal_sum_bipartition(PartitionInput((1, 1, 2)))
    assert left == ItemSet.from_items([0, 1], 3)
    assert right == ItemSet.from_items([2], 3)
    assert equal_sum_bipartition(PartitionInput((1, 2))) is None
    assert equal_sum_bipartition(PartitionInput((1, 1, 1, 1, 1))) is None


def test_restricted_to_instance_shape():
    instance = restricted_to_instance(PartitionInput((1,) * 6), extra_third_copies=2)
    assert instance.n == 5 and instance.m == 6
    assert [spec.role for spec in instance.specs] == [FIRST_TWO, FIRST_TWO, THIRD, THIRD, THIRD]
    assert SUPERMODULAR in classes_of(instance.specs[0])
    assert instance.value(0, 0) == 0
    assert instance.value(0, 0b000111) == 0
    assert instance.value(2, 0b000111) == 3


def test_restricted_to_instance_rejects_broken_promise():
    with pytest.raises(PreconditionViolated):
        restricted_to_instance(PartitionInput((1, 1, 2)))
    with pytest.raises(ValueError):
        restricted_to_instance(PartitionInput((1,) * 5), extra_third_copies=-1)


def test_nonexistence_instance_agents():
    assert nonexistence_instance().n == 3
    assert nonexistence_instance(k=2).n == 5


def test_restricted_inputs_keep_promise_and_limit():
    inputs = list(restricted_inputs((5, 6), max_value=3))
    assert inputs
    assert all(is_restricted(b) for b in inputs)
    assert list(restricted_inputs((5, 6), max_value=3, limit=1)) == inputs[:1]


@pytest.mark.slow
def test_reduction_preserves_yes_and_no_answers():
    for b in restricted_inputs((5, 6, 7), max_value=5, limit=Config.REDUCTION_MAX_INPUTS):
        has_partition = equal_sum_bipartition(b) is not None
        has_eq1 = first_eq1_allocation(restricted_to_instance(b)) is not None
        assert has_partition == has_eq1, b.values
