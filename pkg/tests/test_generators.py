import pytest

from equidad.core import PreconditionViolated
from equidad.generators import KINDS, generate_instance, make_rng, random_general_table
from equidad.valuations import (
    DOUBLY_MONOTONE, NONNEGATIVE, SUBADDITIVE, SUBMODULAR, classes_of, verify_nonnegative,
)


@pytest.mark.parametrize("kind", [k for k in KINDS if k != "supermodular-hardness"])
def test_same_seed_same_instance(kind):
    first = generate_instance(kind, 3, 4, seed=11)
    second = generate_instance(kind, 3, 4, seed=11)
    assert first == second
    assert first.n == 3 and first.m == 4


@pytest.mark.parametrize("kind, tag", [
    ("table-nonneg", NONNEGATIVE),
    ("table-submodular", SUBMODULAR),
    ("table-doubly-monotone", DOUBLY_MONOTONE),
    ("table-subadditive-identical", SUBADDITIVE),
    ("cut", SUBMODULAR),
    ("density", NONNEGATIVE),
])
def test_generated_agents_carry_their_class(kind, tag):
    instance = generate_instance(kind, 2, 3, seed=3)
    assert all(tag in classes_of(spec) for spec in instance.specs)


def test_grand_bundles_are_nonnegative_where_required():
    for kind in ("additive-mixed", "table-general", "table-submodular", "table-doubly-monotone"):
        for seed in range(10):
            instance = generate_instance(kind, 3, 4, seed=seed)
            assert all(v >= 0 for v in instance.grand_bundle_values()), (kind, seed)


def test_identical_kind_repeats_one_valuation():
    assert generate_instance("table-subadditive-identical", 3, 3, seed=5).is_identical()


def test_nonneg_tables_really_are_nonnegative():
    instance = generate_instance("table-nonneg", 2, 3, seed=8)
    assert all(verify_nonnegative(spec).holds for spec in instance.specs)


def test_general_tables_are_normalized():
    table = random_general_table(make_rng(0), 3)
    assert table.value(0) == 0 and table.m == 3


def test_supermodular_hardness_needs_values():
    instance = generate_instance("supermodular-hardness", 3, 5, values=[1, 1, 1, 1, 1])
    assert instance.n == 3 and instance.m == 5
    with pytest.raises(PreconditionViolated):
        generate_instance("supermodular-hardness", 3, 5)


def test_unknown_kind():
    with pytest.raises(ValueError, match="desconocido"):
        generate_instance("poisson", 2, 2)
