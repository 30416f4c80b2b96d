"""
Generate Consolidated Report - Reporte consolidado del experimento
Lee los reportes individuales de cada paso y genera experimento_completo.json
Etapa 7 del experimento (final)
"""

import sys
import time
from datetime import datetime
from pathlib import Path
from typing import Dict, List

sys.path.insert(0, str(Path(__file__).parent.parent))

from config import Config
from utils.storage_factory import StorageFactory

REPORT_FILES = {
    1: ("No existencia", "paso1_nonexistence.json"),
    2: ("Reducción", "paso2_reduction.json"),
    3: ("Solvers", "paso3_solvers.json"),
    4: ("Estructura", "paso4_structure.json"),
    5: ("Grafos", "paso5_graphs.json"),
    6: ("Carga a BD", "paso6_upload_to_db.json"),
}


def tiempo_de(reporte: Dict):
    """tiempo_total en la raíz o tiempos.total_segundos, según el paso"""
    if "tiempo_total" in reporte:
        return reporte["tiempo_total"]
    return reporte.get("tiempos", {}).get("total_segundos")


def veredicto_de(paso: int, reporte: Dict):
    """Si el paso reprodujo lo esperado (None si el paso no tiene veredicto)"""
    if paso == 1:
        return reporte.get("instancia_base_sin_eq1")
    if paso == 2:
        resumen = reporte.get("resumen", {})
        return resumen.get("entradas") == resumen.get("coincidencias") \
            and not reporte.get("transformacion", {}).get("discrepancias")
    if paso == 3:
        return reporte.get("todas_certificadas")
    if paso == 4:
        marginal = reporte.get("marginal", {})
        return reporte.get("negacion", {}).get("transferencia_exacta") \
            and all(d["tablas"] == d["cumplen"] for d in marginal.values())
    if paso == 5:
        return all(d["grafos"] == d["dentro_cota"] == d["no_vacias"] == d["llamadas_ok"]
                   for d in reporte.get("resumen", {}).values())
    return None


class ReportGenerator:
    def __init__(self, storage=None):
        self.storage = storage or StorageFactory.get_storage()
        self.fecha_hoy = datetime.now().strftime("%d-%m-%Y")
        print(f"[INFO] Generando reporte consolidado para: {self.fecha_hoy}")

        self.pasos_completados: List[Dict] = []
        self.pasos_fallidos: List[Dict] = []
        self.reportes_individuales: Dict[str, Dict] = {}
        self.tiempo_total_experimento = 0.0

    def leer_reportes_individuales(self):
        reportes_subfolder = f"{self.fecha_hoy}/reportes"
        print(f"[INFO] Leyendo reportes individuales desde: {reportes_subfolder}")
        for paso, (nombre, filename) in REPORT_FILES.items():
            try:
                reporte = self.storage.load_json(filename, reportes_subfolder)
            except (OSError, ValueError) as e:
                print(f"   ⚠️  Reporte paso {paso} no encontrado: {filename}")
                self.pasos_fallidos.append({"paso": paso, "nombre": nombre, "error": f"Reporte no encontrado: {e}"})
                continue
            self.reportes_individuales[f"paso_{paso}"] = reporte
            tiempo = tiempo_de(reporte) or 0.0
            self.tiempo_total_experimento += tiempo
            self.pasos_completados.append({
                "paso": paso,
                "nombre": nombre,
                "duracion_segundos": round(tiempo, 2),
                "reproducido": veredicto_de(paso, reporte),
            })
            print(f"   ✓ Reporte paso {paso} cargado")

    def crear_reporte_consolidado(self) -> Dict:
        veredictos = [p["reproducido"] for p in self.pasos_completados if p["reproducido"] is not None]
        return {
            "metadata": {
                "timestamp": datetime.now().isoformat(),
                "experimento": "Reproducción de asignaciones EQ1",
                "fecha_ejecucion": self.fecha_hoy,
                "storage_mode": Config.STORAGE_MODE,
                "seed": Config.EXPERIMENT_SEED,
                "generado_por": "step7_generate_report.py",
            },
            "resumen_experimento": {
                "pasos_totales": len(REPORT_FILES),
                "pasos_completados": len(self.pasos_completados),
                "pasos_fallidos": len(self.pasos_fallidos),
                "todo_reproducido": bool(veredictos) and all(veredictos),
                "tiempo_total_segundos": round(self.tiempo_total_experimento, 2),
                "tiempo_total_minutos": round(self.tiempo_total_experimento / 60, 2),
            },
            "pasos_ejecutados": self.pasos_completados,
            "pasos_fallidos": self.pasos_fallidos,
            "reportes_individuales": self.reportes_individuales,
        }

    def imprimir_resumen(self):
        print("\n" + "=" * 80)
        print("REPORTE CONSOLIDADO DEL EXPERIMENTO".center(80))
        print("=" * 80)
        print(f"   Fecha de ejecucion:       {self.fecha_hoy}")
        print(f"   Storage mode:             {Config.STORAGE_MODE}")
        print(f"   Pasos completados:        {len(self.pasos_completados)}/{len(REPORT_FILES)}")
        print(f"   Tiempo total:             {self.tiempo_total_experimento:.1f}s")
        if self.pasos_completados:
            print("\nDESGLOSE:")
            for paso in self.pasos_completados:
                estado = {True: "[OK]", False: "[ERROR]", None: "[INFO]"}[paso["reproducido"]]
                print(f"   {estado} Paso {paso['paso']} ({paso['nombre']}): {paso['duracion_segundos']:.1f}s")
        if self.pasos_fallidos:
            print("\nPASOS SIN REPORTE:")
            for paso in self.pasos_fallidos:
                print(f"   Paso {paso['paso']} ({paso['nombre']}): {paso['error'][:80]}")
        print("=" * 80 + "\n")

    def generar_reporte(self, tiempo_ejecucion: float) -> Dict:
        self.leer_reportes_individuales()
        consolidado = self.crear_reporte_consolidado()
        reportes_subfolder = f"{self.fecha_hoy}/reportes"
        self.storage.save_json(consolidado, "experimento_completo.json", reportes_subfolder)
        print(f"\n[OK] Reporte consolidado guardado: {reportes_subfolder}/experimento_completo.json")
        self.imprimir_resumen()

        self.storage.save_json({
            "paso": 7,
            "nombre": "Generate Consolidated Report",
            "timestamp": datetime.now().isoformat(),
            "tiempo_total": tiempo_ejecucion,
            "reportes_leidos": len(self.reportes_individuales),
        }, "paso7_generate_report.json", reportes_subfolder)
        print(f"[OK] Reporte JSON guardado: {reportes_subfolder}/paso7_generate_report.json\n")
        return consolidado


def main():
    print("""
=================================================
   REPRODUCCION - Etapa 7: Reporte consolidado
=================================================
    """)
    try:
        inicio = time.time()
        generator = ReportGenerator()
        generator.generar_reporte(time.time() - inicio)
    except Exception as e:
        print(f"\n[ERROR] Error en Paso 7: {e}")
        import traceback
        traceback.print_exc()
        exit(1)


if __name__ == "__main__":
    main()
