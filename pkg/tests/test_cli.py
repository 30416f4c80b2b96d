import json

import pytest

from cli import EXIT_BUDGET, EXIT_FALSE, EXIT_OK, EXIT_PARSE, main
from equidad.instance_io import parse_instance, save_instance
from equidad.valuations import NONNEGATIVE, Instance, Table


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def solved(tmp_path, capsys, fixtures_dir):
    """Instancia de dos agentes y su solución escrita a disco"""
    instance = fixtures_dir / "dos_agentes_total_cero.json"
    code, out, _ = run(capsys, "solve", instance)
    assert code == EXIT_OK
    solution = tmp_path / "solucion.json"
    solution.write_text(out, encoding="utf-8")
    return instance, solution


def test_solve_writes_solution_json(capsys, fixtures_dir):
    code, out, err = run(capsys, "solve", fixtures_dir / "negacion_dos_agentes.json", "--trace")
    document = json.loads(out)
    assert code == EXIT_OK
    assert document["solver"] == "negation+two-agents"
    assert document["eq1"] is True
    assert "trace" in document
    assert err.startswith("[OK]")


def test_solve_mixed_signs_is_not_applicable(capsys, fixtures_dir):
    code, out, err = run(capsys, "solve", fixtures_dir / "signos_mixtos.json")
    assert code == EXIT_FALSE
    assert out == ""
    assert "[ERROR]" in err and "signos mixtos" in err


def test_solve_without_algorithm(capsys, fixtures_dir):
    assert run(capsys, "solve", fixtures_dir / "sin_eq1.json")[0] == EXIT_FALSE
    assert run(capsys, "solve", fixtures_dir / "sin_eq1.json", "--force", "brute")[0] == EXIT_FALSE


def test_malformed_instance_file(capsys, tmp_path):
    broken = tmp_path / "rota.json"
    broken.write_text("{", encoding="utf-8")
    code, _, err = run(capsys, "solve", broken)
    assert code == EXIT_PARSE
    assert "archivo inválido" in err


def test_check_modes(capsys, solved):
    instance, solution = solved
    code, out, _ = run(capsys, "check", instance, solution)
    assert code == EXIT_OK and json.loads(out)["pass"] is True

    # EQ1 con valores (0, 0) pero el agente 1 envidia el paquete completo
    code, out, _ = run(capsys, "check", instance, solution, "--mode", "ef1")
    assert code == EXIT_FALSE and json.loads(out)["pass"] is False

    code, out, _ = run(capsys, "check", instance, solution, "--mode", "witness")
    assert code == EXIT_OK and json.loads(out)["theta"] == "0"

    code, out, _ = run(capsys, "check", instance, solution, "--mode", "witness", "--theta", "1")
    report = json.loads(out)
    assert code == EXIT_FALSE
    assert report["clause"] == "a"


def test_check_reports_violations(capsys, tmp_path, fixtures_dir):
    instance = fixtures_dir / "dos_agentes_total_cero.json"
    solution = tmp_path / "mala.json"
    solution.write_text(json.dumps({"allocation": [[], [0, 1, 2]]}), encoding="utf-8")
    code, out, _ = run(capsys, "check", instance, solution)
    assert code == EXIT_FALSE
    assert json.loads(out)["violations"] == [[0, 1]]


def test_verify_class(capsys, fixtures_dir):
    code, out, err = run(capsys, "verify-class", fixtures_dir / "sin_eq1.json", "supermodular")
    assert code == EXIT_OK
    assert all(agent["holds"] for agent in json.loads(out)["agents"])

    code, out, err = run(capsys, "verify-class", fixtures_dir / "sin_eq1.json", "submodular")
    agents = json.loads(out)["agents"]
    assert code == EXIT_FALSE
    assert [agent["holds"] for agent in agents] == [False, False, True]
    assert "[WARN] agente 0" in err


def test_brute(capsys, fixtures_dir):
    code, out, _ = run(capsys, "brute", fixtures_dir / "sin_eq1.json")
    assert code == EXIT_FALSE
    assert json.loads(out) == {"exists": False, "total_checked": 243, "eq1_count": 0, "witness_allocation": None}

    code, _, err = run(capsys, "brute", fixtures_dir / "sin_eq1.json", "--budget", "10")
    assert code == EXIT_BUDGET
    assert "presupuesto" in err


def test_reduce(capsys):
    code, out, _ = run(capsys, "reduce", 1, 1, 2, "--mode", "raw")
    instance = parse_instance(out)
    assert code == EXIT_OK
    assert instance.n == 3 and instance.m == 7

    assert run(capsys, "reduce", 1, 1, 2)[0] == EXIT_FALSE
    assert run(capsys, "reduce", 1, 0, 2)[0] == EXIT_PARSE


def test_graph_partition(capsys, fixtures_dir, tmp_path):
    code, out, _ = run(capsys, "graph-partition", fixtures_dir / "path5.graph", 2)
    document = json.loads(out)
    assert code == EXIT_OK
    assert document["parts"] == [[0], [1, 2, 3, 4]]
    assert document["within_bound"] is True
    assert document["max_degree"] == 2

    code, out, _ = run(capsys, "graph-partition", fixtures_dir / "k4.graph", 2, "--mode", "density")
    assert code == EXIT_OK and json.loads(out)["bound"] == "1"

    broken = tmp_path / "roto.graph"
    broken.write_text("p 2 1\n0 0\n", encoding="utf-8")
    assert run(capsys, "graph-partition", broken, 1)[0] == EXIT_PARSE


def test_gen_is_reproducible(capsys):
    _, first, _ = run(capsys, "gen", "table-general", "--agents", 2, "--items", 3, "--seed", 4)
    _, second, _ = run(capsys, "gen", "table-general", "--agents", 2, "--items", 3, "--seed", 4)
    assert first == second
    assert parse_instance(first).n == 2

    assert run(capsys, "gen", "supermodular-hardness")[0] == EXIT_FALSE
    code, out, _ = run(capsys, "gen", "supermodular-hardness", "--values", 1, 1, 1, 1, 1)
    assert code == EXIT_OK and parse_instance(out).m == 5


def test_solve_budgets_are_separate(capsys, tmp_path):
    table = Table(tuple(range(8)), declared_class=NONNEGATIVE)
    instance = tmp_path / "no_negativa.json"
    save_instance(Instance(3, (table,) * 3), instance)

    code, out, _ = run(capsys, "solve", instance, "--budget", 4)
    assert code == EXIT_OK and json.loads(out)["solver"] == "nonnegative"

    code, _, err = run(capsys, "solve", instance, "--subset-budget", 4)
    assert code == EXIT_BUDGET
    assert "presupuesto" in err

    assert run(capsys, "solve", instance, "--force", "brute", "--budget", 4)[0] == EXIT_BUDGET
