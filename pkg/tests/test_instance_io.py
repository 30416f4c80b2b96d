import json
from fractions import Fraction

import pytest

from equidad.algorithms import solve_dispatch
from equidad.core import EXACT, ItemSet
from equidad.graphkit import build_graph
from equidad.instance_io import (
    InstanceFormatError, dump_instance, dump_solution, load_instance, load_solution, parse_instance,
    parse_solution, parse_value, save_instance, to_jsonable,
)
from equidad.reductions import nonexistence_instance
from equidad.valuations import SUBMODULAR, Cut, Density, Instance, Negated, Table
from tests.conftest import additive


def test_parse_value():
    assert parse_value("-3/6") == Fraction(-1, 2)
    assert parse_value(4) == 4
    for raw in ("0.5", "1/0", True, 1.5, None):
        with pytest.raises(InstanceFormatError):
            parse_value(raw)


def test_fixtures_load(fixtures_dir):
    for path in sorted(fixtures_dir.glob("*.json")):
        assert load_instance(path).n >= 2


def test_every_family_survives_dump_and_parse(tmp_path):
    graph = build_graph(3, [(0, 1), (1, 2)])
    specs = (
        Table((0, "1/2", 1, 2), declared_class=SUBMODULAR),
        Negated(Table((0, 1, 1, 1))),
    )
    instances = [
        additive((1, "-2/3"), (0, 5)),
        Instance(2, specs),
        Instance(3, (Cut(graph), Density(graph))),
        nonexistence_instance(),
    ]
    for instance in instances:
        save_instance(instance, tmp_path / "instancia.json")
        assert load_instance(tmp_path / "instancia.json") == instance


@pytest.mark.parametrize("document, message", [
    ("{", "JSON inválido"),
    ('{"version": "eq1/0", "m": 1, "agents": []}', "versión"),
    ('{"version": "eq1/1", "agents": []}', "'m'"),
    ('{"version": "eq1/1", "m": "2", "agents": []}', "entero"),
    ('{"version": "eq1/1", "m": 1, "agents": [{"kind": "cubic", "payload": {}}]}', "desconocida"),
    ('{"version": "eq1/1", "m": 1, "agents": [{"kind": "table", "payload": {"values": ["0", "1", "2"]}}]}',
     "agente 0"),
    ('{"version": "eq1/1", "m": 2, "agents": [{"kind": "additive", "payload": {"values": ["1"]}}]}',
     "sobre 1 ítems"),
    ('{"version": "eq1/1", "m": 2, "agents": [{"kind": "cut", "payload": {"num_vertices": 2, "edges": [[0, 0]]}}]}',
     "lazo"),
])
def test_malformed_instances(document, message):
    with pytest.raises(InstanceFormatError, match=message):
        parse_instance(document)


def test_missing_file():
    with pytest.raises(InstanceFormatError, match="no se pudo leer"):
        load_instance("/no/existe.json")


def test_solution_document_and_parse_back():
    instance = additive((2, 1), (2, 1))
    result = solve_dispatch(instance, trace=True)
    document = json.loads(dump_solution(instance, result))
    assert document["solver"] == "two-agents"
    assert document["allocation"] == [[0], [1]]
    assert document["values"] == ["2", "1"]
    assert document["eq1"] is True
    assert "witness" not in document
    assert document["trace"][-1] == {"chosen_t": 1}

    allocation, parsed = parse_solution(dump_solution(instance, result), instance)
    assert allocation.as_lists() == [[0], [1]]
    assert parsed["oracle_calls"] == result.oracle_calls


def test_solution_with_witness(tmp_path):
    instance = additive((1, 1, 1), (1, 1, 1), (1, 1, 1))
    result = solve_dispatch(instance)
    path = tmp_path / "solucion.json"
    path.write_text(dump_solution(instance, result), encoding="utf-8")
    _, document = load_solution(path, instance)
    assert document["witness"]["theta"] == result.theta
    assert all(entry == EXACT or isinstance(entry, int) for entry in document["witness"]["per_agent"])


@pytest.mark.parametrize("text, message", [
    ('{"allocation": [[0, 1]]}', "2 paquetes"),
    ('{"allocation": [[0], [0, 1]]}', "asignación inválida"),
    ('{"allocation": [[0], [1]], "witness": {"per_agent": []}}', "theta"),
    ('{"allocation": [[0], [1]], "witness": {"theta": "0", "per_agent": ["x"]}}', "certificado"),
])
def test_malformed_solutions(text, message):
    with pytest.raises(InstanceFormatError, match=message):
        parse_solution(text, additive((1, 1), (1, 1)))


def test_to_jsonable():
    assert to_jsonable({"theta": Fraction(3, 2), 1: (ItemSet.from_items([1], 3), [Fraction(2)])}) == {
        "theta": "3/2",
        "1": [[1], ["2"]],
    }


def test_dump_is_stable_text():
    text = dump_instance(additive((1, 2), (3, 4)))
    assert text.endswith("\n")
    assert json.loads(text)["agents"][1]["payload"]["values"] == ["3", "4"]
