"""
Experiment Orchestrator - Orquestador de la reproducción
Ejecuta los pasos del experimento en secuencia y genera siempre el reporte consolidado
"""

import time
from datetime import datetime
from typing import Callable, Dict, List

from config import Config
from utils.storage_factory import StorageFactory

from steps.step1_nonexistence import NonExistenceReproducer
from steps.step2_reduction import ReductionValidator
from steps.step3_solvers import SolverBenchmark
from steps.step4_structure import StructureChecker
from steps.step5_graphs import GraphPartitionBenchmark
from steps.step6_upload_to_db import ResultsUploader
from steps.step7_generate_report import ReportGenerator


class ExperimentOrchestrator:
    def __init__(self, storage=None):
        self.storage = storage or StorageFactory.get_storage()
        self.fecha_hoy = datetime.now().strftime("%d-%m-%Y")
        self.pasos_completados: List[Dict] = []
        self.pasos_fallidos: List[Dict] = []

    def limpiar_ejecucion_previa(self):
        """Elimina la ejecución del mismo día para no mezclar reportes"""
        print("\n" + "=" * 80)
        print("VERIFICACION DE EJECUCION PREVIA".center(80))
        print("=" * 80)
        if self.storage.folder_exists(self.fecha_hoy):
            print(f"\n⚠️  Ya existe una ejecución para {self.fecha_hoy}; se elimina")
            if not self.storage.delete_folder(self.fecha_hoy):
                print("   ⚠️  No se pudo eliminar la ejecución previa")
        else:
            print(f"\n✅ No hay ejecución previa para {self.fecha_hoy}")
        print("=" * 80 + "\n")

    def ejecutar_paso(self, paso: int, nombre: str, accion: Callable[[], None], critico: bool = True):
        print("\n" + "=" * 80)
        print(f"PASO {paso}: {nombre.upper()}")
        print("=" * 80 + "\n")
        inicio = time.time()
        try:
            accion()
        except Exception as e:
            print(f"\n[ERROR] ERROR EN PASO {paso}: {e}")
            self.pasos_fallidos.append({"paso": paso, "nombre": nombre, "error": str(e)})
            if critico:
                raise
            return
        self.pasos_completados.append({
            "paso": paso,
            "nombre": nombre,
            "duracion_segundos": time.time() - inicio,
            "exitoso": True,
        })

    # ===== ACCIONES =====

    def _nonexistence(self):
        paso = NonExistenceReproducer(self.storage)
        paso.generar_reporte(paso.ejecutar())

    def _reduction(self):
        paso = ReductionValidator(self.storage)
        paso.generar_reporte(paso.ejecutar())

    def _solvers(self):
        paso = SolverBenchmark(self.storage)
        paso.generar_reporte(paso.ejecutar())

    def _structure(self):
        paso = StructureChecker(self.storage)
        paso.generar_reporte(paso.ejecutar())

    def _graphs(self):
        paso = GraphPartitionBenchmark(self.storage)
        paso.generar_reporte(paso.ejecutar())

    def _upload(self):
        uploader = ResultsUploader(self.storage)
        uploader.generar_reporte(uploader.subir_todas_las_tablas())
        uploader.engine.dispose()

    def _report(self):
        inicio = time.time()
        generator = ReportGenerator(self.storage)
        generator.generar_reporte(time.time() - inicio)

    def ejecutar_experimento_completo(self):
        print("""
=================================================================
   REPRODUCCION EQ1

   Paso 1: No existencia de EQ1 (instancia de 5 ítems)
   Paso 2: Reducción desde Restricted-Partition
   Paso 3: Benchmark de solvers
   Paso 4: Negación e ítem testigo marginal
   Paso 5: Particiones equitativas de grafos
   Paso 6: Carga a base de datos (si DATABASE_URL)
   Paso 7: Reporte consolidado
=================================================================
        """)
        Config.print_config()
        self.limpiar_ejecucion_previa()

        try:
            self.ejecutar_paso(1, "No existencia", self._nonexistence)
            self.ejecutar_paso(2, "Reducción", self._reduction)
            self.ejecutar_paso(3, "Solvers", self._solvers)
            self.ejecutar_paso(4, "Estructura", self._structure)
            self.ejecutar_paso(5, "Grafos", self._graphs)
            if Config.DATABASE_URL:
                self.ejecutar_paso(6, "Carga a BD", self._upload, critico=False)
            else:
                print("\n[INFO] DATABASE_URL vacía: se omite el paso 6")
        except Exception as e:
            print(f"\n[ERROR] ERROR NO MANEJADO EN EL EXPERIMENTO: {e}")
            import traceback
            traceback.print_exc()
        finally:
            self.ejecutar_paso(7, "Reporte consolidado", self._report, critico=False)


def main():
    try:
        orchestrator = ExperimentOrchestrator()
        orchestrator.ejecutar_experimento_completo()
        if orchestrator.pasos_fallidos:
            print(f"\n[WARN] EXPERIMENTO TERMINADO CON {len(orchestrator.pasos_fallidos)} PASOS FALLIDOS")
        else:
            print("\n[OK] EXPERIMENTO COMPLETADO EXITOSAMENTE!")
    except Exception as e:
        print(f"\n[ERROR] ERROR FATAL EN EL EXPERIMENTO: {e}")
        import traceback
        traceback.print_exc()
        exit(1)


if __name__ == "__main__":
    main()
