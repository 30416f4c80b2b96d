"""
Formato de archivos de instancia y de solución (JSON, versión eq1/1)
Los racionales se escriben como "p/q" o "p"; las tablas se indexan por
máscara con el ítem 0 en el bit 0.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Tuple, Union

from equidad.algorithms import SolveResult
from equidad.core import EXACT, Allocation, InvalidAllocation, ItemSet, bundle_values, check_eq1
from equidad.graphkit import GraphFormatError, build_graph
from equidad.valuations import (
    Additive, Cut, Density, HardnessPair, Instance, Negated, Table, ValuationSpec,
)

FORMAT_VERSION = "eq1/1"

_RATIONAL = re.compile(r"^-?\d+(/[1-9]\d*)?$")


class InstanceFormatError(ValueError):
    """Archivo de instancia o solución mal formado"""


# ===== VALORES =====

def format_value(value: Fraction) -> str:
    return str(value)


def parse_value(raw: Any) -> Fraction:
    if isinstance(raw, bool):
        raise InstanceFormatError(f"valor booleano no permitido: {raw!r}")
    if isinstance(raw, int):
        return Fraction(raw)
    if isinstance(raw, str) and _RATIONAL.match(raw.strip()):
        return Fraction(raw.strip())
    raise InstanceFormatError(f"racional inválido: {raw!r} (use 'p/q' o 'p')")


# ===== VALUACIONES =====

def spec_to_block(spec: ValuationSpec) -> Dict[str, Any]:
    if isinstance(spec, (Additive, Table)):
        payload = {"values": [format_value(v) for v in spec.values]}
    elif isinstance(spec, (Cut, Density)):
        payload = {"num_vertices": spec.num_vertices, "edges": [list(e) for e in spec.edges]}
    elif isinstance(spec, HardnessPair):
        payload = {"b": list(spec.b), "role": spec.role}
    elif isinstance(spec, Negated):
        payload = {"inner": spec_to_block(spec.inner)}
    else:
        raise InstanceFormatError(f"familia sin formato: {type(spec).__name__}")
    return {"kind": spec.kind, "declared_class": spec.declared_class, "payload": payload}


def _require(block: Dict[str, Any], key: str, where: str) -> Any:
    if not isinstance(block, dict) or key not in block:
        raise InstanceFormatError(f"{where}: falta el campo '{key}'")
    return block[key]


def block_to_spec(block: Dict[str, Any], where: str = "agente") -> ValuationSpec:
    kind = _require(block, "kind", where)
    payload = _require(block, "payload", where)
    declared = block.get("declared_class")
    try:
        if kind == "additive":
            return Additive(tuple(parse_value(v) for v in _require(payload, "values", where)), declared_class=declared)
        if kind == "table":
            return Table(tuple(parse_value(v) for v in _require(payload, "values", where)), declared_class=declared)
        if kind in ("cut", "density"):
            graph = build_graph(int(_require(payload, "num_vertices", where)),
                                [tuple(e) for e in _require(payload, "edges", where)])
            family = Cut if kind == "cut" else Density
            return family(graph, declared_class=declared)
        if kind == "hardness":
            return HardnessPair(tuple(_require(payload, "b", where)), payload.get("role", "first_two"),
                                declared_class=declared)
        if kind == "negated":
            return Negated(block_to_spec(_require(payload, "inner", where), where), declared_class=declared)
    except InstanceFormatError:
        raise
    except (GraphFormatError, ValueError, TypeError) as e:
        raise InstanceFormatError(f"{where}: {e}") from e
    raise InstanceFormatError(f"{where}: familia desconocida '{kind}'")


# ===== INSTANCIAS =====

def instance_to_dict(instance: Instance) -> Dict[str, Any]:
    return {
        "version": FORMAT_VERSION,
        "m": instance.m,
        "agents": [spec_to_block(spec) for spec in instance.specs],
    }


def dump_instance(instance: Instance) -> str:
    return json.dumps(instance_to_dict(instance), indent=2, ensure_ascii=False) + "\n"


def parse_instance(text: str) -> Instance:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise InstanceFormatError(f"JSON inválido: {e}") from e
    version = _require(document, "version", "instancia")
    if version != FORMAT_VERSION:
        raise InstanceFormatError(f"versión no soportada: {version!r} (se espera {FORMAT_VERSION})")
    m = _require(document, "m", "instancia")
    agents = _require(document, "agents", "instancia")
    if not isinstance(m, int) or not isinstance(agents, list):
        raise InstanceFormatError("'m' debe ser entero y 'agents' una lista")
    specs = tuple(block_to_spec(block, f"agente {i}") for i, block in enumerate(agents))
    try:
        return Instance(m, specs)
    except ValueError as e:
        raise InstanceFormatError(str(e)) from e


def load_instance(path: Union[str, Path]) -> Instance:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InstanceFormatError(f"no se pudo leer {path}: {e}") from e
    return parse_instance(text)


def save_instance(instance: Instance, path: Union[str, Path]) -> None:
    Path(path).write_text(dump_instance(instance), encoding="utf-8")


# ===== SOLUCIONES =====

def solution_to_dict(instance: Instance, result: SolveResult) -> Dict[str, Any]:
    allocation = result.allocation
    document: Dict[str, Any] = {
        "version": FORMAT_VERSION,
        "solver": result.solver,
        "allocation": allocation.as_lists(),
        "values": [format_value(v) for v in bundle_values(instance, allocation)],
        "eq1": check_eq1(instance, allocation).is_eq1,
        "oracle_calls": result.oracle_calls,
    }
    if result.witness is not None:
        theta, certificate = result.witness
        document["witness"] = {
            "theta": format_value(theta),
            "per_agent": list(certificate.per_agent),
        }
    if result.trace is not None:
        document["trace"] = [to_jsonable(step) for step in result.trace]
    return document


def dump_solution(instance: Instance, result: SolveResult) -> str:
    return json.dumps(solution_to_dict(instance, result), indent=2, ensure_ascii=False) + "\n"


def parse_solution(text: str, instance: Instance) -> Tuple[Allocation, Dict[str, Any]]:
    """Asignación y documento completo; la asignación se valida contra la instancia"""
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise InstanceFormatError(f"JSON inválido: {e}") from e
    lists = _require(document, "allocation", "solución")
    if not isinstance(lists, list) or len(lists) != instance.n:
        raise InstanceFormatError(f"la solución debe tener {instance.n} paquetes")
    try:
        allocation = Allocation.from_lists(lists, instance.m)
    except (InvalidAllocation, TypeError) as e:
        raise InstanceFormatError(f"asignación inválida: {e}") from e
    witness = document.get("witness")
    if witness is not None:
        witness["theta"] = parse_value(_require(witness, "theta", "testigo"))
        for entry in witness.get("per_agent", []):
            if entry != EXACT and not isinstance(entry, int):
                raise InstanceFormatError(f"certificado inválido: {entry!r}")
    return allocation, document


def load_solution(path: Union[str, Path], instance: Instance) -> Tuple[Allocation, Dict[str, Any]]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InstanceFormatError(f"no se pudo leer {path}: {e}") from e
    return parse_solution(text, instance)


def to_jsonable(obj: Any) -> Any:
    """Fracciones a 'p/q', conjuntos de ítems a listas, tuplas a listas"""
    if isinstance(obj, Fraction):
        return format_value(obj)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, ItemSet):
        return obj.items()
    return obj
