"""
Solvers - Benchmark de los algoritmos constructivos
Corre cada algoritmo sobre instancias aleatorias con semilla de su familia y
verifica la salida con los chequeadores independientes (EQ1, testigo inferior,
EF1 y paquetes no vacíos); al final resuelve por negación los casos de
paquete total no positivo incluidos en fixtures/
Etapa 3 del experimento
"""

import sys
import time
from datetime import datetime
from pathlib import Path
from typing import Callable, Dict, List, Optional

import pandas as pd

sys.path.insert(0, str(Path(__file__).parent.parent))

from config import Config
from equidad.algorithms import (
    solve_dispatch, solve_identical_subadditive, solve_marginal_witness, solve_nonnegative, solve_two_agents,
)
from equidad.core import EquidadError, check_ef1, check_eq1, check_lower_witness
from equidad.generators import (
    additive_mixed_instance, cut_instance, doubly_monotone_table_instance, general_table_instance,
    identical_subadditive_instance, make_rng, nonneg_table_instance, submodular_table_instance,
)
from equidad.instance_io import load_instance
from utils.storage_factory import StorageFactory

NEGATION_FIXTURES = (
    "negacion_dos_agentes.json",
    "negacion_supermodular.json",
    "negacion_doble_monotona.json",
    "negacion_superaditiva_identica.json",
)


class SolverBenchmark:
    def __init__(self, storage=None, corridas: Optional[Dict[str, int]] = None,
                 fixtures_dir: Optional[str] = None, seed: Optional[int] = None):
        self.storage = storage or StorageFactory.get_storage()
        self.fecha_hoy = datetime.now().strftime("%d-%m-%Y")
        self.seed = Config.EXPERIMENT_SEED if seed is None else seed
        self.fixtures_dir = Path(fixtures_dir or Config.FIXTURES_DIR)
        self.corridas = {
            "two_agents": Config.TWO_AGENT_RUNS,
            "doubly_monotone": Config.DOUBLY_MONOTONE_RUNS,
            "submodular": Config.SUBMODULAR_RUNS,
            "nonnegative": Config.NONNEGATIVE_RUNS,
            "identical_subadditive": Config.IDENTICAL_SUBADDITIVE_RUNS,
        }
        self.corridas.update(corridas or {})
        self.filas: List[Dict] = []

    # ===== UNA CORRIDA =====

    def _registrar(self, familia: str, corrida: int, instance, solve: Callable, cota_llamadas=None,
                   revisar_ef1: bool = False):
        fila = {
            "familia": familia, "corrida": corrida, "n": instance.n, "m": instance.m,
            "solver": None, "eq1": False, "testigo_ok": None, "ef1": None,
            "no_vacios": None, "oracle_calls": 0, "cota_llamadas": cota_llamadas, "error": "",
        }
        try:
            result = solve(instance)
        except EquidadError as e:
            fila["error"] = f"{type(e).__name__}: {e}"
            print(f"[ERROR] {familia} #{corrida}: {fila['error']}")
            self.filas.append(fila)
            return

        fila["solver"] = result.solver
        fila["oracle_calls"] = result.oracle_calls
        fila["eq1"] = check_eq1(instance, result.allocation).is_eq1
        if result.witness is not None:
            fila["testigo_ok"] = check_lower_witness(instance, result.allocation, result.theta).ok
        if revisar_ef1:
            fila["ef1"] = check_ef1(instance, result.allocation)
        if instance.m >= instance.n:
            fila["no_vacios"] = all(len(bundle) > 0 for bundle in result.allocation.bundles)
        if not fila["eq1"] or fila["testigo_ok"] is False:
            print(f"[WARN] {familia} #{corrida}: salida sin certificar ({result.allocation.as_lists()})")
        self.filas.append(fila)

    def _tamano(self, rng, low: int, high: int) -> int:
        return int(rng.integers(low, high + 1))

    # ===== FAMILIAS =====

    def benchmark_two_agents(self):
        rng = make_rng(self.seed)
        for r in range(self.corridas["two_agents"]):
            m = self._tamano(rng, 0, 6)
            instance = general_table_instance(rng, 2, m)
            self._registrar("two_agents", r, instance, solve_two_agents, cota_llamadas=4 * m + 4)
        print(f"[OK] Dos agentes: {self.corridas['two_agents']} corridas")

    def benchmark_doubly_monotone(self):
        rng = make_rng(self.seed + 1)
        for r in range(self.corridas["doubly_monotone"]):
            n, m = self._tamano(rng, 2, 4), self._tamano(rng, 1, 8)
            # Mitad aditivas de signo mixto, mitad tablas g(bienes) - h(tareas)
            build = additive_mixed_instance if r % 2 == 0 else doubly_monotone_table_instance
            instance = build(rng, n, m)
            self._registrar("doubly_monotone", r, instance, solve_marginal_witness)
        print(f"[OK] Doblemente monótonas: {self.corridas['doubly_monotone']} corridas")

    def benchmark_submodular(self):
        rng = make_rng(self.seed + 2)
        for r in range(self.corridas["submodular"]):
            n, m = self._tamano(rng, 2, 4), self._tamano(rng, 1, 8)
            if r % 2 == 0:
                instance = cut_instance(rng, n, m, edge_prob=float(rng.uniform(0.2, 0.8)))
            else:
                instance = submodular_table_instance(rng, n, m)
            self._registrar("submodular", r, instance, solve_marginal_witness)
        print(f"[OK] Submodulares: {self.corridas['submodular']} corridas")

    def benchmark_nonnegative(self):
        rng = make_rng(self.seed + 3)
        for r in range(self.corridas["nonnegative"]):
            n, m = self._tamano(rng, 2, 3), self._tamano(rng, 1, 7)
            instance = nonneg_table_instance(rng, n, m)
            self._registrar("nonnegative", r, instance, solve_nonnegative)
        print(f"[OK] No negativas: {self.corridas['nonnegative']} corridas")

    def benchmark_identical_subadditive(self):
        rng = make_rng(self.seed + 4)
        for r in range(self.corridas["identical_subadditive"]):
            n, m = self._tamano(rng, 2, 3), self._tamano(rng, 1, 6)
            instance = identical_subadditive_instance(rng, n, m)
            self._registrar("identical_subadditive", r, instance, solve_identical_subadditive, revisar_ef1=True)
        print(f"[OK] Subaditivas idénticas: {self.corridas['identical_subadditive']} corridas")

    def benchmark_negation(self):
        for r, nombre in enumerate(NEGATION_FIXTURES):
            path = self.fixtures_dir / nombre
            if not path.exists():
                print(f"[WARN] Fixture no encontrado: {path}")
                continue
            self._registrar("negation", r, load_instance(path), solve_dispatch)
            print(f"[INFO] {nombre}: solver {self.filas[-1]['solver']}")

    def ejecutar(self) -> Dict[str, float]:
        tiempos = {}
        for familia, metodo in (
            ("two_agents", self.benchmark_two_agents),
            ("doubly_monotone", self.benchmark_doubly_monotone),
            ("submodular", self.benchmark_submodular),
            ("nonnegative", self.benchmark_nonnegative),
            ("identical_subadditive", self.benchmark_identical_subadditive),
            ("negation", self.benchmark_negation),
        ):
            inicio = time.time()
            metodo()
            tiempos[familia] = round(time.time() - inicio, 3)
        return tiempos

    # ===== REPORTE =====

    def resumen(self) -> pd.DataFrame:
        tabla = pd.DataFrame(self.filas)
        if tabla.empty:
            return tabla
        cota = pd.to_numeric(tabla["cota_llamadas"], errors="coerce")
        tabla["dentro_cota"] = cota.isna() | (tabla["oracle_calls"] <= cota.fillna(float("inf")))
        tabla["certificada"] = (
            tabla["eq1"]
            & (tabla["testigo_ok"] != False)  # noqa: E712
            & (tabla["ef1"] != False)  # noqa: E712
            & (tabla["no_vacios"] != False)  # noqa: E712
            & (tabla["error"] == "")
        )
        return tabla.groupby("familia", sort=False).agg(
            corridas=("corrida", "size"),
            certificadas=("certificada", "sum"),
            dentro_cota=("dentro_cota", "sum"),
            max_llamadas=("oracle_calls", "max"),
            errores=("error", lambda s: int((s != "").sum())),
        ).reset_index()

    def generar_reporte(self, tiempos: Dict[str, float]) -> Dict:
        tabla = pd.DataFrame(self.filas)
        resumen = self.resumen()
        tiempo_total = sum(tiempos.values())

        print("\n" + "=" * 80)
        print("REPORTE DE SOLVERS".center(80))
        print("=" * 80)
        for _, fila in resumen.iterrows():
            estado = "[OK]" if fila["certificadas"] == fila["corridas"] else "[ERROR]"
            print(f"   {estado} {fila['familia']:<24} {fila['certificadas']:>5}/{fila['corridas']:<5} "
                  f"certificadas, máx {fila['max_llamadas']} consultas")
        print("\nTIEMPOS POR FAMILIA:")
        for familia, segundos in tiempos.items():
            print(f"   {familia:<24} {segundos:>8.2f}s")
        print(f"\n   Tiempo total: {tiempo_total:.2f}s")
        print("=" * 80 + "\n")

        self.storage.save_dataframe(tabla, "paso3_solvers.csv", f"{self.fecha_hoy}/tablas")
        reporte = {
            "metadata": {
                "timestamp": datetime.now().isoformat(),
                "etapa": "solvers",
                "seed": self.seed,
                "corridas": self.corridas,
            },
            "resumen": [
                {k: (v.item() if hasattr(v, "item") else v) for k, v in fila.items()}
                for fila in resumen.to_dict(orient="records")
            ],
            "todas_certificadas": bool(not resumen.empty and (resumen["certificadas"] == resumen["corridas"]).all()),
            "tiempos": {"por_familia": tiempos, "total_segundos": tiempo_total},
        }
        self.storage.save_json(reporte, "paso3_solvers.json", f"{self.fecha_hoy}/reportes")
        print(f"[OK] Reporte JSON guardado: {self.fecha_hoy}/reportes/paso3_solvers.json\n")
        return reporte


def main():
    print("""
=================================================
   REPRODUCCION - Etapa 3: Benchmark de solvers
=================================================
    """)
    try:
        paso = SolverBenchmark()
        tiempos = paso.ejecutar()
        paso.generar_reporte(tiempos)
    except Exception as e:
        print(f"\n[ERROR] Error fatal: {e}")
        import traceback
        traceback.print_exc()
        exit(1)


if __name__ == "__main__":
    main()
