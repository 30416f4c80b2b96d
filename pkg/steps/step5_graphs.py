"""
Graphs - Particiones equitativas de grafos
Corte: k partes no vacías con cortes que difieren a lo más en el grado máximo,
con un número polinomial de consultas (cota 4·k·|V|²)
Densidad: k partes no vacías con densidades que difieren a lo más en 1
Etapa 5 del experimento
"""

import sys
import time
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Optional

import pandas as pd

sys.path.insert(0, str(Path(__file__).parent.parent))

from config import Config
from equidad.generators import make_rng, random_graph
from equidad.graphkit import max_degree, partition_cut, partition_density
from utils.storage_factory import StorageFactory

CALL_FACTOR = 4


class GraphPartitionBenchmark:
    def __init__(self, storage=None, corridas_corte: Optional[int] = None,
                 corridas_densidad: Optional[int] = None, seed: Optional[int] = None,
                 max_vertices_corte: int = 12, max_vertices_densidad: int = 8):
        self.storage = storage or StorageFactory.get_storage()
        self.fecha_hoy = datetime.now().strftime("%d-%m-%Y")
        self.seed = Config.EXPERIMENT_SEED if seed is None else seed
        self.corridas_corte = Config.CUT_GRAPH_RUNS if corridas_corte is None else corridas_corte
        self.corridas_densidad = Config.DENSITY_GRAPH_RUNS if corridas_densidad is None else corridas_densidad
        self.max_vertices_corte = max_vertices_corte
        self.max_vertices_densidad = max_vertices_densidad
        self.filas: List[Dict] = []

    def _correr(self, modo: str, corrida: int, G, k: int):
        inicio = time.time()
        if modo == "cut":
            result = partition_cut(G, k)
            cota_llamadas = CALL_FACTOR * k * G.number_of_nodes() ** 2
        else:
            result = partition_density(G, k)
            cota_llamadas = None
        fila = {
            "modo": modo,
            "corrida": corrida,
            "vertices": G.number_of_nodes(),
            "aristas": G.number_of_edges(),
            "grado_maximo": max_degree(G),
            "k": k,
            "spread": str(result.spread),
            "cota": str(result.bound),
            "dentro_cota": result.within_bound,
            "no_vacias": all(len(part) > 0 for part in result.parts),
            "oracle_calls": result.oracle_calls,
            "cota_llamadas": cota_llamadas,
            "llamadas_ok": cota_llamadas is None or result.oracle_calls <= cota_llamadas,
            "duracion_segundos": round(time.time() - inicio, 4),
        }
        if not (fila["dentro_cota"] and fila["no_vacias"] and fila["llamadas_ok"]):
            print(f"[WARN] {modo} #{corrida}: spread {result.spread} > {result.bound} "
                  f"o partes vacías o {result.oracle_calls} consultas")
        self.filas.append(fila)

    def benchmark(self, modo: str, corridas: int, max_vertices: int, max_k: int, semilla: int):
        rng = make_rng(semilla)
        for r in range(corridas):
            vertices = int(rng.integers(1, max_vertices + 1))
            k = int(rng.integers(1, min(max_k, vertices) + 1))
            G = random_graph(rng, vertices, float(rng.uniform(0.2, 0.8)))
            self._correr(modo, r, G, k)
        print(f"[OK] Particiones por {modo}: {corridas} grafos")

    def ejecutar(self) -> float:
        inicio = time.time()
        self.benchmark("cut", self.corridas_corte, self.max_vertices_corte, 4, self.seed + 20)
        self.benchmark("density", self.corridas_densidad, self.max_vertices_densidad, 3, self.seed + 21)
        return time.time() - inicio

    def generar_reporte(self, tiempo_total: float) -> Dict:
        tabla = pd.DataFrame(self.filas)
        resumen = {}
        for modo, grupo in tabla.groupby("modo", sort=False) if not tabla.empty else []:
            resumen[modo] = {
                "grafos": int(len(grupo)),
                "dentro_cota": int(grupo["dentro_cota"].sum()),
                "no_vacias": int(grupo["no_vacias"].sum()),
                "llamadas_ok": int(grupo["llamadas_ok"].sum()),
                "max_llamadas": int(grupo["oracle_calls"].max()),
            }

        print("\n" + "=" * 80)
        print("REPORTE DE PARTICIONES DE GRAFOS".center(80))
        print("=" * 80)
        for modo, datos in resumen.items():
            print(f"   {modo:<8} {datos['dentro_cota']:>4}/{datos['grafos']:<4} dentro de la cota, "
                  f"{datos['no_vacias']} con partes no vacías, máx {datos['max_llamadas']} consultas")
        print(f"\n   Tiempo total: {tiempo_total:.2f}s")
        print("=" * 80 + "\n")

        self.storage.save_dataframe(tabla, "paso5_graphs.csv", f"{self.fecha_hoy}/tablas")
        reporte = {
            "metadata": {
                "timestamp": datetime.now().isoformat(),
                "etapa": "graphs",
                "seed": self.seed,
                "factor_llamadas": CALL_FACTOR,
            },
            "resumen": resumen,
            "tiempo_total": tiempo_total,
        }
        self.storage.save_json(reporte, "paso5_graphs.json", f"{self.fecha_hoy}/reportes")
        print(f"[OK] Reporte JSON guardado: {self.fecha_hoy}/reportes/paso5_graphs.json\n")
        return reporte


def main():
    print("""
=================================================
   REPRODUCCION - Etapa 5: Particiones de grafos
=================================================
    """)
    try:
        paso = GraphPartitionBenchmark()
        tiempo = paso.ejecutar()
        paso.generar_reporte(tiempo)
    except Exception as e:
        print(f"\n[ERROR] Error fatal: {e}")
        import traceback
        traceback.print_exc()
        exit(1)


if __name__ == "__main__":
    main()
