"""
Reduction - Validación de la reducción desde Restricted-Partition
Para cada entrada que cumple la promesa compara la existencia de una
bipartición de suma igual con la existencia de EQ1 en la instancia reducida,
y revisa que la transformación Partition -> Restricted-Partition preserve la respuesta
Etapa 2 del experimento
"""

import sys
import time
from datetime import datetime
from itertools import product
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import pandas as pd

sys.path.insert(0, str(Path(__file__).parent.parent))

from config import Config
from equidad.oracle import first_eq1_allocation
from equidad.reductions import (
    PartitionInput, equal_sum_bipartition, partition_to_restricted, restricted_inputs, restricted_to_instance,
)
from utils.storage_factory import StorageFactory


class ReductionValidator:
    def __init__(self, storage=None, tamanos: Sequence[int] = (5, 6, 7), valor_maximo: int = 5,
                 limite: Optional[int] = None, partition_max_len: int = 6, partition_max_valor: int = 6):
        self.storage = storage or StorageFactory.get_storage()
        self.fecha_hoy = datetime.now().strftime("%d-%m-%Y")
        self.tamanos = tuple(tamanos)
        self.valor_maximo = valor_maximo
        self.limite = Config.REDUCTION_MAX_INPUTS if limite is None else limite
        self.partition_max_len = partition_max_len
        self.partition_max_valor = partition_max_valor
        self.filas: List[Dict] = []
        self.transformacion = {"revisadas": 0, "discrepancias": []}

    def validar_reduccion(self):
        for b in restricted_inputs(self.tamanos, self.valor_maximo, self.limite):
            biparticion = equal_sum_bipartition(b) is not None
            existe_eq1 = first_eq1_allocation(restricted_to_instance(b)) is not None
            self.filas.append({
                "valores": " ".join(map(str, b.values)),
                "m": b.m,
                "total": b.total,
                "biparticion": biparticion,
                "existe_eq1": existe_eq1,
                "coincide": biparticion == existe_eq1,
            })
            if len(self.filas) % 250 == 0:
                print(f"[INFO] {len(self.filas)} entradas revisadas")

    def validar_transformacion(self):
        """Entradas de Partition pequeñas: la respuesta se conserva tras agregar 4 copias de T"""
        for largo in range(1, self.partition_max_len + 1):
            for valores in product(range(1, self.partition_max_valor + 1), repeat=largo):
                if list(valores) != sorted(valores):
                    continue
                a = PartitionInput(valores)
                antes = equal_sum_bipartition(a) is not None
                despues = equal_sum_bipartition(partition_to_restricted(a)) is not None
                self.transformacion["revisadas"] += 1
                if antes != despues:
                    self.transformacion["discrepancias"].append(list(valores))

    def ejecutar(self) -> float:
        inicio = time.time()
        self.validar_reduccion()
        self.validar_transformacion()
        return time.time() - inicio

    def generar_reporte(self, tiempo_total: float) -> Dict:
        tabla = pd.DataFrame(self.filas, columns=["valores", "m", "total", "biparticion", "existe_eq1", "coincide"])
        discrepancias = tabla[~tabla["coincide"]]
        por_m = tabla.groupby("m").agg(
            entradas=("coincide", "size"),
            si_instancias=("biparticion", "sum"),
            coincidencias=("coincide", "sum"),
        ).reset_index()

        print("\n" + "=" * 80)
        print("REPORTE DE LA REDUCCION".center(80))
        print("=" * 80)
        print(f"   Entradas Restricted-Partition:   {len(tabla)}")
        print(f"   [OK] Coincidencias:              {int(tabla['coincide'].sum())}")
        print(f"   [ERROR] Discrepancias:           {len(discrepancias)}")
        for _, fila in por_m.iterrows():
            print(f"      m = {fila['m']}: {fila['coincidencias']}/{fila['entradas']} ({fila['si_instancias']} con bipartición)")
        print(f"   Transformación revisada sobre:   {self.transformacion['revisadas']} entradas")
        print(f"   Discrepancias de transformación: {len(self.transformacion['discrepancias'])}")
        print(f"   Tiempo total:                    {tiempo_total:.2f}s")
        print("=" * 80 + "\n")

        self.storage.save_dataframe(tabla, "paso2_reduction.csv", f"{self.fecha_hoy}/tablas")
        reporte = {
            "metadata": {
                "timestamp": datetime.now().isoformat(),
                "etapa": "reduction",
                "tamanos": list(self.tamanos),
                "valor_maximo": self.valor_maximo,
                "limite": self.limite,
            },
            "resumen": {
                "entradas": len(tabla),
                "coincidencias": int(tabla["coincide"].sum()),
                "discrepancias": discrepancias["valores"].tolist(),
                "por_m": por_m.astype(int).to_dict(orient="records"),
            },
            "transformacion": self.transformacion,
            "tiempo_total": tiempo_total,
        }
        self.storage.save_json(reporte, "paso2_reduction.json", f"{self.fecha_hoy}/reportes")
        print(f"[OK] Reporte JSON guardado: {self.fecha_hoy}/reportes/paso2_reduction.json\n")
        return reporte


def main():
    print("""
=================================================
   REPRODUCCION - Etapa 2: Reducción de dureza
=================================================
    """)
    try:
        paso = ReductionValidator()
        tiempo = paso.ejecutar()
        paso.generar_reporte(tiempo)
    except Exception as e:
        print(f"\n[ERROR] Error fatal: {e}")
        import traceback
        traceback.print_exc()
        exit(1)


if __name__ == "__main__":
    main()
