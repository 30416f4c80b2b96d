"""
CLI - Interfaz de línea de comandos del solver EQ1
Comandos: solve, check, verify-class, brute, reduce, graph-partition, gen

La salida legible por máquina (JSON) va por stdout y los diagnósticos con
etiqueta ([OK], [WARN], [ERROR]) por stderr.
Códigos de salida: 0 éxito, 1 error de formato, 2 no aplicable o veredicto
falso, 3 presupuesto excedido.
"""

import argparse
import json
import sys
from typing import List, Optional

from config import Config
from equidad.algorithms import SOLVERS, solve_dispatch
from equidad.core import (
    BudgetExceeded, InvalidAllocation, NotApplicable, PreconditionViolated,
    check_ef1, check_eq1, check_lower_witness, equitability_gap, find_lower_witness,
)
from equidad.generators import KINDS, generate_instance
from equidad.graphkit import GraphFormatError, max_degree, partition_cut, partition_density, read_graph
from equidad.instance_io import (
    InstanceFormatError, dump_instance, dump_solution, load_instance, load_solution, parse_value, to_jsonable,
)
from equidad.oracle import exists_eq1_bruteforce
from equidad.reductions import PartitionInput, partition_to_restricted, restricted_to_instance
from equidad.valuations import VERIFIERS

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_FALSE = 2
EXIT_BUDGET = 3


def _emit(document) -> None:
    print(json.dumps(to_jsonable(document), indent=2, ensure_ascii=False))


def _diag(tag: str, message: str) -> None:
    print(f"[{tag}] {message}", file=sys.stderr)


# ===== COMANDOS =====

def cmd_solve(args) -> int:
    instance = load_instance(args.instance)
    result = solve_dispatch(instance, force=args.force, trace=args.trace, budget=args.budget,
                            subset_budget=args.subset_budget)
    sys.stdout.write(dump_solution(instance, result))
    _diag("OK", f"solver {result.solver}: {result.oracle_calls} consultas al oráculo")
    return EXIT_OK


def cmd_check(args) -> int:
    instance = load_instance(args.instance)
    allocation, document = load_solution(args.solution, instance)

    if args.mode == "eq1":
        report = check_eq1(instance, allocation)
        _emit({
            "mode": "eq1",
            "pass": report.is_eq1,
            "values": report.values,
            "gap": equitability_gap(instance, allocation),
            "violations": [list(pair) for pair in report.violations],
            "repairs": [
                {"poor": r.poor, "rich": r.rich, "side": r.side, "item": r.item} for r in report.repairs
            ],
        })
        passed = report.is_eq1

    elif args.mode == "ef1":
        passed = check_ef1(instance, allocation)
        _emit({"mode": "ef1", "pass": passed})

    else:
        if args.theta is not None:
            theta = parse_value(args.theta)
        elif document.get("witness"):
            theta = document["witness"]["theta"]
        else:
            found = find_lower_witness(instance, allocation)
            if found is None:
                _emit({"mode": "witness", "pass": False, "reason": "no existe testigo inferior"})
                return EXIT_FALSE
            theta = found[0]
        check = check_lower_witness(instance, allocation, theta)
        _emit({
            "mode": "witness",
            "pass": check.ok,
            "theta": theta,
            "per_agent": list(check.certificate.per_agent) if check.certificate else None,
            "clause": check.clause,
            "agent": check.agent,
            "reason": check.reason,
        })
        passed = check.ok

    return EXIT_OK if passed else EXIT_FALSE


def cmd_verify_class(args) -> int:
    instance = load_instance(args.instance)
    verifier = VERIFIERS[args.class_name]
    reports = []
    for i, spec in enumerate(instance.specs):
        report = verifier(spec)
        reports.append({
            "agent": i,
            "property": report.property_name,
            "holds": report.holds,
            "counterexample": report.counterexample,
            "goods": report.goods,
            "chores": report.chores,
        })
        if not report.holds:
            _diag("WARN", f"agente {i} no cumple {report.property_name}: {to_jsonable(report.counterexample)}")
    _emit({"class": args.class_name, "agents": reports})
    return EXIT_OK if all(r["holds"] for r in reports) else EXIT_FALSE


def cmd_brute(args) -> int:
    instance = load_instance(args.instance)
    report = exists_eq1_bruteforce(instance, budget=args.budget)
    _emit({
        "exists": report.exists,
        "total_checked": report.total_checked,
        "eq1_count": report.eq1_count,
        "witness_allocation": report.witness_allocation.as_lists() if report.witness_allocation else None,
    })
    return EXIT_OK if report.exists else EXIT_FALSE


def cmd_reduce(args) -> int:
    values = PartitionInput(tuple(args.numbers))
    if args.mode == "raw":
        values = partition_to_restricted(values)
    sys.stdout.write(dump_instance(restricted_to_instance(values)))
    return EXIT_OK


def cmd_graph_partition(args) -> int:
    G = read_graph(args.graph)
    if args.mode == "cut":
        result = partition_cut(G, args.k)
    else:
        result = partition_density(G, args.k, budget=args.budget)
    _emit({
        "mode": result.mode,
        "parts": [part.items() for part in result.parts],
        "values": result.values,
        "spread": result.spread,
        "bound": result.bound,
        "max_degree": max_degree(G),
        "within_bound": result.within_bound,
        "theta": result.theta,
        "solver": result.solver,
        "oracle_calls": result.oracle_calls,
    })
    if not result.within_bound:
        _diag("WARN", f"spread {result.spread} supera la cota {result.bound}")
        return EXIT_FALSE
    return EXIT_OK


def cmd_gen(args) -> int:
    instance = generate_instance(args.kind, args.agents, args.items, seed=args.seed,
                                 values=args.values, edge_prob=args.edge_prob)
    sys.stdout.write(dump_instance(instance))
    return EXIT_OK


# ===== PARSER =====

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cli.py", description="Solver de asignaciones EQ1")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="resuelve una instancia con el algoritmo aplicable")
    p.add_argument("instance")
    p.add_argument("--force", choices=SOLVERS, default=None, help="fuerza un algoritmo")
    p.add_argument("--trace", action="store_true", help="incluye la traza de iteraciones")
    p.add_argument("--budget", type=int, default=None,
                   help="máximo de asignaciones para --force brute (por defecto BRUTE_BUDGET)")
    p.add_argument("--subset-budget", type=int, default=None,
                   help="máximo de subconjuntos por ronda de los solvers exponenciales (por defecto SUBSET_BUDGET)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check", help="verifica una solución")
    p.add_argument("instance")
    p.add_argument("solution")
    p.add_argument("--mode", choices=("eq1", "ef1", "witness"), default="eq1")
    p.add_argument("--theta", default=None, help="θ a verificar (p/q); por defecto el de la solución")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("verify-class", help="verifica exhaustivamente una clase de valuación")
    p.add_argument("instance")
    p.add_argument("class_name", choices=sorted(VERIFIERS))
    p.set_defaults(func=cmd_verify_class)

    p = sub.add_parser("brute", help="decide existencia de EQ1 por fuerza bruta")
    p.add_argument("instance")
    p.add_argument("--budget", type=int, default=None,
                   help=f"máximo de asignaciones (por defecto {Config.BRUTE_BUDGET:,}, variable BRUTE_BUDGET)")
    p.set_defaults(func=cmd_brute)

    p = sub.add_parser("reduce", help="construye la instancia de dureza de 3 agentes")
    p.add_argument("numbers", type=int, nargs="+")
    p.add_argument("--mode", choices=("restricted", "raw"), default="restricted",
                   help="raw aplica antes la transformación a Restricted-Partition")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("graph-partition", help="partición equitativa de un grafo")
    p.add_argument("graph")
    p.add_argument("k", type=int)
    p.add_argument("--mode", choices=("cut", "density"), default="cut")
    p.add_argument("--budget", type=int, default=None,
                   help=f"presupuesto de subconjuntos en modo density (por defecto {Config.SUBSET_BUDGET:,})")
    p.set_defaults(func=cmd_graph_partition)

    p = sub.add_parser("gen", help="genera una instancia aleatoria con semilla")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("--agents", type=int, default=2)
    p.add_argument("--items", type=int, default=4)
    p.add_argument("--seed", type=int, default=Config.EXPERIMENT_SEED)
    p.add_argument("--values", type=int, nargs="+", default=None, help="valores b para supermodular-hardness")
    p.add_argument("--edge-prob", type=float, default=0.5)
    p.set_defaults(func=cmd_gen)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as e:
        _diag("ERROR", f"presupuesto excedido: {e}")
        return EXIT_BUDGET
    except (InstanceFormatError, GraphFormatError, InvalidAllocation) as e:
        _diag("ERROR", f"archivo inválido: {e}")
        return EXIT_PARSE
    except (NotApplicable, PreconditionViolated) as e:
        _diag("ERROR", f"no aplicable: {e}")
        return EXIT_FALSE
    except ValueError as e:
        _diag("ERROR", f"entrada inválida: {e}")
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
