"""
Non-Existence - Reproducción de la instancia sin asignación EQ1
Enumera todas las asignaciones de la instancia de 5 ítems con b = (1,1,1,1,1)
(y sus extensiones con copias del agente 3) y cuenta las EQ1
Etapa 1 del experimento
"""

import sys
import time
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Sequence

import pandas as pd

# Agregar el directorio padre al path para importar config
sys.path.insert(0, str(Path(__file__).parent.parent))

from config import Config
from equidad.oracle import exists_eq1_bruteforce
from equidad.reductions import nonexistence_instance
from utils.storage_factory import StorageFactory


class NonExistenceReproducer:
    def __init__(self, storage=None, copias_extra: Sequence[int] = (0, 1)):
        self.storage = storage or StorageFactory.get_storage()
        self.fecha_hoy = datetime.now().strftime("%d-%m-%Y")
        self.copias_extra = tuple(copias_extra)
        self.resultados: List[Dict] = []

    def ejecutar(self) -> float:
        """Corre el oráculo exhaustivo sobre cada variante; retorna el tiempo total"""
        inicio = time.time()
        for k in self.copias_extra:
            instance = nonexistence_instance(k)
            t0 = time.time()
            report = exists_eq1_bruteforce(instance, budget=Config.BRUTE_BUDGET)
            primera = report.witness_allocation.as_lists() if report.witness_allocation else None
            self.resultados.append({
                "copias_extra": k,
                "agentes": instance.n,
                "items": instance.m,
                "total_revisadas": report.total_checked,
                "eq1_count": report.eq1_count,
                "existe_eq1": report.exists,
                "primera_eq1": primera,
                "duracion_segundos": round(time.time() - t0, 3),
            })
            estado = "existe EQ1" if report.exists else "sin EQ1"
            print(f"[INFO] {instance.n} agentes, {instance.m} ítems: "
                  f"{report.eq1_count}/{report.total_checked} EQ1 ({estado})")
        return time.time() - inicio

    def generar_reporte(self, tiempo_total: float) -> Dict:
        print("\n" + "=" * 80)
        print("REPORTE DE NO EXISTENCIA".center(80))
        print("=" * 80)
        for fila in self.resultados:
            print(f"   {fila['agentes']} agentes: {fila['eq1_count']:>5} EQ1 de {fila['total_revisadas']:>6} asignaciones")
            if fila["primera_eq1"]:
                print(f"      Primera EQ1: {fila['primera_eq1']}")
        print(f"\n   Tiempo total: {tiempo_total:.2f}s")
        print("=" * 80 + "\n")

        tabla = pd.DataFrame(self.resultados)
        tabla["primera_eq1"] = tabla["primera_eq1"].astype(str)
        self.storage.save_dataframe(tabla, "paso1_nonexistence.csv", f"{self.fecha_hoy}/tablas")

        reporte = {
            "metadata": {
                "timestamp": datetime.now().isoformat(),
                "etapa": "nonexistence",
                "storage_mode": Config.STORAGE_MODE,
            },
            "instancia_base_sin_eq1": bool(self.resultados) and not self.resultados[0]["existe_eq1"],
            "variantes": self.resultados,
            "tiempo_total": tiempo_total,
        }
        self.storage.save_json(reporte, "paso1_nonexistence.json", f"{self.fecha_hoy}/reportes")
        print(f"[OK] Reporte JSON guardado: {self.fecha_hoy}/reportes/paso1_nonexistence.json\n")
        return reporte


def main():
    print("""
=================================================
   REPRODUCCION - Etapa 1: No existencia de EQ1
=================================================
    """)
    try:
        paso = NonExistenceReproducer()
        tiempo = paso.ejecutar()
        paso.generar_reporte(tiempo)
    except Exception as e:
        print(f"\n[ERROR] Error fatal: {e}")
        import traceback
        traceback.print_exc()
        exit(1)


if __name__ == "__main__":
    main()
