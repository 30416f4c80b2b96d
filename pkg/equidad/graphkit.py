"""
Particiones equitativas de grafos
Los vértices son los ítems y las partes los paquetes de k agentes idénticos:
corte (diferencia <= Δ) y densidad uniforme (diferencia <= 1).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional, Tuple, Union

import networkx as nx

from equidad.algorithms import solve_nonneg_submodular, solve_nonnegative
from equidad.core import ItemSet, PreconditionViolated
from equidad.valuations import Cut, Density, Instance


class GraphFormatError(ValueError):
    pass


# ===== GRAFOS =====

def build_graph(num_vertices: int, edges: Iterable[Tuple[int, int]]) -> nx.Graph:
    """Grafo simple no dirigido sobre 0..num_vertices-1"""
    G = nx.Graph()
    G.add_nodes_from(range(num_vertices))
    for u, v in edges:
        if not (0 <= u < num_vertices and 0 <= v < num_vertices):
            raise GraphFormatError(f"arista ({u}, {v}) fuera de 0..{num_vertices - 1}")
        if u == v:
            raise GraphFormatError(f"lazo en el vértice {u}")
        if G.has_edge(u, v):
            raise GraphFormatError(f"arista repetida ({u}, {v})")
        G.add_edge(u, v)
    return G


def parse_graph(text: str) -> nx.Graph:
    """Formato de lista de aristas: 'p <V> <E>' y luego una línea 'u v' por arista"""
    lines = [line.strip() for line in text.splitlines() if line.strip() and not line.startswith("#")]
    if not lines:
        raise GraphFormatError("archivo de grafo vacío")
    header = lines[0].split()
    if len(header) != 3 or header[0] != "p":
        raise GraphFormatError(f"cabecera inválida: {lines[0]!r}")
    try:
        num_vertices, num_edges = int(header[1]), int(header[2])
        edges = [tuple(int(x) for x in line.split()) for line in lines[1:]]
    except ValueError as e:
        raise GraphFormatError(f"entero inválido: {e}") from e
    if any(len(edge) != 2 for edge in edges):
        raise GraphFormatError("cada arista debe tener exactamente dos vértices")
    if len(edges) != num_edges:
        raise GraphFormatError(f"la cabecera declara {num_edges} aristas y hay {len(edges)}")
    return build_graph(num_vertices, edges)


def format_graph(G: nx.Graph) -> str:
    edges = sorted((min(u, v), max(u, v)) for u, v in G.edges())
    lines = [f"p {G.number_of_nodes()} {len(edges)}"] + [f"{u} {v}" for u, v in edges]
    return "\n".join(lines) + "\n"


def read_graph(path: Union[str, Path]) -> nx.Graph:
    return parse_graph(Path(path).read_text(encoding="utf-8"))


def write_graph(G: nx.Graph, path: Union[str, Path]) -> None:
    Path(path).write_text(format_graph(G), encoding="utf-8")


def max_degree(G: nx.Graph) -> int:
    return max((d for _, d in G.degree()), default=0)


# ===== VALORES =====

def cut_value(G: nx.Graph, S: ItemSet) -> Fraction:
    """δ(S): aristas con exactamente un extremo en S"""
    if S.m != G.number_of_nodes():
        raise IndexError(f"conjunto sobre {S.m} vértices para un grafo de {G.number_of_nodes()}")
    return Fraction(nx.cut_size(G, S.items()))


def density_value(G: nx.Graph, S: ItemSet) -> Fraction:
    """ρ(S) = |E(S)| / |S|, con ρ(∅) = 0"""
    if S.m != G.number_of_nodes():
        raise IndexError(f"conjunto sobre {S.m} vértices para un grafo de {G.number_of_nodes()}")
    if not len(S):
        return Fraction(0)
    return Fraction(G.subgraph(S.items()).number_of_edges(), len(S))


# ===== PARTICIONES =====

@dataclass(frozen=True)
class PartitionResult:
    mode: str
    parts: Tuple[ItemSet, ...]
    values: Tuple[Fraction, ...]
    spread: Fraction
    bound: Fraction
    theta: Optional[Fraction]
    solver: str
    oracle_calls: int

    @property
    def within_bound(self) -> bool:
        return self.spread <= self.bound


def _check_k(G: nx.Graph, k: int) -> None:
    if k < 1:
        raise ValueError("k debe ser al menos 1")
    if k > G.number_of_nodes():
        raise PreconditionViolated(f"k = {k} supera |V| = {G.number_of_nodes()}")


def _result(mode: str, instance: Instance, result, bound: Fraction) -> PartitionResult:
    parts = result.allocation.bundles
    values = tuple(instance.value(i, parts[i].bits) for i in range(instance.n))
    return PartitionResult(
        mode=mode,
        parts=parts,
        values=values,
        spread=max(values) - min(values),
        bound=bound,
        theta=result.theta,
        solver=result.solver,
        oracle_calls=result.oracle_calls,
    )


def partition_cut(G: nx.Graph, k: int) -> PartitionResult:
    """k partes no vacías cuyos cortes difieren a lo más en Δ (tiempo polinomial)"""
    _check_k(G, k)
    spec = Cut(G)
    instance = Instance(G.number_of_nodes(), (spec,) * k)
    result = solve_nonneg_submodular(instance)
    return _result("cut", instance, result, Fraction(max_degree(G)))


def partition_density(G: nx.Graph, k: int, budget: Optional[int] = None) -> PartitionResult:
    """k partes no vacías cuyas densidades difieren a lo más en 1 (exponencial en |V|)"""
    _check_k(G, k)
    spec = Density(G)
    instance = Instance(G.number_of_nodes(), (spec,) * k)
    result = solve_nonnegative(instance, budget=budget)
    return _result("density", instance, result, Fraction(1))
