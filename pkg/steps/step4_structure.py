"""
Structure - Propiedades estructurales de las valuaciones
1. Transferencia por negación: para instancias aleatorias y TODAS sus
   asignaciones, A es EQ1 en I si y solo si es EQ1 en la instancia negada
2. Propiedad del ítem testigo marginal en tablas submodulares y doblemente monótonas
Etapa 4 del experimento
"""

import sys
import time
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Optional

import pandas as pd

sys.path.insert(0, str(Path(__file__).parent.parent))

from config import Config
from equidad.core import Allocation, check_eq1
from equidad.generators import make_rng, random_doubly_monotone_table, random_general_table, random_submodular_table
from equidad.instance_io import to_jsonable
from equidad.oracle import iter_allocations
from equidad.valuations import Instance, verify_marginal_witness
from utils.storage_factory import StorageFactory


class StructureChecker:
    def __init__(self, storage=None, corridas_negacion: Optional[int] = None,
                 corridas_marginal: Optional[int] = None, seed: Optional[int] = None,
                 max_items: int = 5, max_agentes: int = 3):
        self.storage = storage or StorageFactory.get_storage()
        self.fecha_hoy = datetime.now().strftime("%d-%m-%Y")
        self.seed = Config.EXPERIMENT_SEED if seed is None else seed
        self.corridas_negacion = Config.NEGATION_RUNS if corridas_negacion is None else corridas_negacion
        self.corridas_marginal = Config.MARGINAL_PROPERTY_RUNS if corridas_marginal is None else corridas_marginal
        self.max_items = max_items
        self.max_agentes = max_agentes
        self.negacion: List[Dict] = []
        self.marginal: List[Dict] = []

    def verificar_negacion(self):
        rng = make_rng(self.seed + 10)
        for r in range(self.corridas_negacion):
            n = int(rng.integers(2, self.max_agentes + 1))
            m = int(rng.integers(0, self.max_items + 1))
            instance = Instance(m, tuple(random_general_table(rng, m) for _ in range(n)))
            negated = instance.negated()
            revisadas = coinciden = eq1 = 0
            for masks in iter_allocations(n, m):
                allocation = Allocation.from_masks(masks, m)
                original = check_eq1(instance, allocation).is_eq1
                revisadas += 1
                eq1 += original
                coinciden += original == check_eq1(negated, allocation).is_eq1
            self.negacion.append({
                "corrida": r, "n": n, "m": m,
                "asignaciones": revisadas, "eq1": eq1, "coinciden": coinciden,
            })
            if revisadas != coinciden:
                print(f"[ERROR] Negación #{r}: {revisadas - coinciden} asignaciones discrepan")
        print(f"[OK] Negación: {self.corridas_negacion} instancias revisadas")

    def verificar_marginal(self):
        rng = make_rng(self.seed + 11)
        for familia, build in (("submodular", random_submodular_table),
                               ("doubly_monotone", random_doubly_monotone_table)):
            for r in range(self.corridas_marginal):
                m = int(rng.integers(1, self.max_items + 1))
                report = verify_marginal_witness(build(rng, m))
                self.marginal.append({
                    "familia": familia, "corrida": r, "m": m, "cumple": report.holds,
                    "contraejemplo": "" if report.holds else str(to_jsonable(report.counterexample)),
                })
                if not report.holds:
                    print(f"[ERROR] {familia} #{r} sin ítem testigo marginal: {report.counterexample}")
            print(f"[OK] Ítem testigo marginal ({familia}): {self.corridas_marginal} tablas")

    def ejecutar(self) -> Dict[str, float]:
        tiempos = {}
        inicio = time.time()
        self.verificar_negacion()
        tiempos["negacion"] = round(time.time() - inicio, 3)
        inicio = time.time()
        self.verificar_marginal()
        tiempos["marginal"] = round(time.time() - inicio, 3)
        return tiempos

    def generar_reporte(self, tiempos: Dict[str, float]) -> Dict:
        negacion = pd.DataFrame(self.negacion, columns=["corrida", "n", "m", "asignaciones", "eq1", "coinciden"])
        marginal = pd.DataFrame(self.marginal, columns=["familia", "corrida", "m", "cumple", "contraejemplo"])
        asignaciones = int(negacion["asignaciones"].sum())
        coinciden = int(negacion["coinciden"].sum())
        por_familia = {
            familia: {"tablas": int(len(grupo)), "cumplen": int(grupo["cumple"].sum())}
            for familia, grupo in marginal.groupby("familia")
        }
        tiempo_total = sum(tiempos.values())

        print("\n" + "=" * 80)
        print("REPORTE DE ESTRUCTURA".center(80))
        print("=" * 80)
        print(f"   Negación: {coinciden}/{asignaciones} asignaciones con el mismo veredicto EQ1")
        for familia, datos in por_familia.items():
            print(f"   Testigo marginal ({familia}): {datos['cumplen']}/{datos['tablas']}")
        print(f"\n   Tiempo total: {tiempo_total:.2f}s")
        print("=" * 80 + "\n")

        self.storage.save_dataframe(negacion, "paso4_negacion.csv", f"{self.fecha_hoy}/tablas")
        self.storage.save_dataframe(marginal, "paso4_marginal.csv", f"{self.fecha_hoy}/tablas")
        reporte = {
            "metadata": {
                "timestamp": datetime.now().isoformat(),
                "etapa": "structure",
                "seed": self.seed,
            },
            "negacion": {
                "instancias": len(negacion),
                "asignaciones": asignaciones,
                "coinciden": coinciden,
                "transferencia_exacta": asignaciones == coinciden,
            },
            "marginal": por_familia,
            "tiempos": {"por_bloque": tiempos, "total_segundos": tiempo_total},
        }
        self.storage.save_json(reporte, "paso4_structure.json", f"{self.fecha_hoy}/reportes")
        print(f"[OK] Reporte JSON guardado: {self.fecha_hoy}/reportes/paso4_structure.json\n")
        return reporte


def main():
    print("""
=================================================
   REPRODUCCION - Etapa 4: Propiedades estructurales
=================================================
    """)
    try:
        paso = StructureChecker()
        tiempos = paso.ejecutar()
        paso.generar_reporte(tiempos)
    except Exception as e:
        print(f"\n[ERROR] Error fatal: {e}")
        import traceback
        traceback.print_exc()
        exit(1)


if __name__ == "__main__":
    main()
