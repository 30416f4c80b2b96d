"""
Upload to Database - Carga de tablas de resultados a PostgreSQL
Sube las tablas CSV de los pasos 1 a 5 como tablas 'eq1_<nombre>'
Etapa 6 del experimento (opcional: requiere DATABASE_URL)
"""

import sys
import time
from datetime import datetime
from pathlib import Path
from typing import Dict, Optional

import pandas as pd
from sqlalchemy import create_engine, text
from sqlalchemy.engine import Engine
from sqlalchemy.exc import SQLAlchemyError
from sqlalchemy.pool import NullPool

sys.path.insert(0, str(Path(__file__).parent.parent))

from config import Config
from utils.storage_factory import StorageFactory

TABLE_PREFIX = "eq1_"


class ResultsUploader:
    def __init__(self, storage=None, engine: Optional[Engine] = None):
        self.storage = storage or StorageFactory.get_storage()
        self.fecha_hoy = datetime.now().strftime("%d-%m-%Y")

        if engine is None:
            if not Config.DATABASE_URL:
                raise Exception("DATABASE_URL no está configurada en las variables de entorno")
            engine = create_engine(Config.DATABASE_URL, poolclass=NullPool, echo=False)
        self.engine = engine

        self.resultados = {"exitosos": [], "fallidos": []}

    def _destino(self) -> str:
        """host/base sin credenciales"""
        url = self.engine.url
        return f"{url.host or 'local'}/{url.database or ''}"

    def subir_tabla(self, filename: str) -> Dict:
        nombre_tabla = TABLE_PREFIX + Path(filename).stem
        inicio = time.time()
        try:
            df = self.storage.load_dataframe(filename, f"{self.fecha_hoy}/tablas")
            if df.empty:
                return {"status": "warning", "tabla": nombre_tabla, "archivo": filename,
                        "mensaje": "CSV vacío, se omite", "registros": 0}
            df = df.where(pd.notna(df), None)
            df.to_sql(nombre_tabla, self.engine, if_exists="replace", index=False, method="multi", chunksize=1000)
            elapsed = time.time() - inicio
            print(f"      [OK] {len(df)} registros en {nombre_tabla} ({elapsed:.2f}s)")
            return {
                "status": "success",
                "tabla": nombre_tabla,
                "archivo": filename,
                "registros": len(df),
                "columnas": list(df.columns),
                "duracion_segundos": round(elapsed, 2),
            }
        except (SQLAlchemyError, OSError, ValueError) as e:
            return {
                "status": "error",
                "tabla": nombre_tabla,
                "archivo": filename,
                "error": str(e),
                "duracion_segundos": round(time.time() - inicio, 2),
            }

    def subir_todas_las_tablas(self) -> float:
        print("Verificando conexión a la base de datos...")
        with self.engine.connect() as conn:
            conn.execute(text("SELECT 1"))
        print(f"[OK] Conexión exitosa: {self._destino()}\n")

        inicio = time.time()
        archivos = self.storage.list_files(f"{self.fecha_hoy}/tablas", "*.csv")
        print(f"Total de tablas a subir: {len(archivos)}\n")
        for idx, filename in enumerate(archivos, 1):
            resultado = self.subir_tabla(filename)
            if resultado["status"] == "error":
                print(f"[{idx}/{len(archivos)}] ✗ {resultado['tabla']}: {resultado['error'][:80]}")
                self.resultados["fallidos"].append(resultado)
            else:
                print(f"[{idx}/{len(archivos)}] ✓ {resultado['tabla']}: {resultado['registros']} registros")
                self.resultados["exitosos"].append(resultado)
        return time.time() - inicio

    def generar_reporte(self, tiempo_total_segundos: float) -> Dict:
        exitosos = len(self.resultados["exitosos"])
        fallidos = len(self.resultados["fallidos"])
        total = exitosos + fallidos
        total_registros = sum(r.get("registros", 0) for r in self.resultados["exitosos"])

        print("\n" + "=" * 80)
        print("REPORTE DE CARGA A BASE DE DATOS".center(80))
        print("=" * 80)
        print(f"   Total de tablas:          {total}")
        print(f"   [OK] Exitosas:            {exitosos}")
        print(f"   [ERROR] Fallidas:         {fallidos}")
        print(f"   Registros insertados:     {total_registros:,}")
        print(f"   Tiempo total:             {tiempo_total_segundos:.2f}s")
        print("=" * 80 + "\n")

        reporte = {
            "metadata": {
                "timestamp": datetime.now().isoformat(),
                "etapa": "upload_to_db",
                "base_de_datos": self._destino(),
                "carpeta_origen": f"{self.fecha_hoy}/tablas",
                "storage_mode": Config.STORAGE_MODE,
            },
            "resumen": {
                "total_tablas": total,
                "exitosas": exitosos,
                "fallidas": fallidos,
                "total_registros_insertados": total_registros,
            },
            "tiempos": {"total_segundos": round(tiempo_total_segundos, 2)},
            "tablas_exitosas": self.resultados["exitosos"],
            "tablas_fallidas": self.resultados["fallidos"],
        }
        self.storage.save_json(reporte, "paso6_upload_to_db.json", f"{self.fecha_hoy}/reportes")
        print(f"[OK] Reporte JSON guardado: {self.fecha_hoy}/reportes/paso6_upload_to_db.json\n")
        return reporte


def main():
    print("""
=================================================
   REPRODUCCION - Etapa 6: Carga a base de datos
=================================================
    """)
    try:
        uploader = ResultsUploader()
        tiempo_total = uploader.subir_todas_las_tablas()
        uploader.generar_reporte(tiempo_total)
        uploader.engine.dispose()
    except Exception as e:
        print(f"\n[ERROR] Error fatal: {e}")
        import traceback
        traceback.print_exc()
        exit(1)


if __name__ == "__main__":
    main()
