"""
Storage Factory - Almacenamiento de artefactos de experimentos
Interfaz única para guardar reportes y tablas en disco local o en S3
"""

import io
import json
import shutil
from pathlib import Path
from typing import List, Optional, Union

import pandas as pd

from config import Config
from utils.s3_storage import S3StorageManager


class LocalStorage:
    """
    Almacenamiento en el sistema de archivos bajo un directorio base
    """

    def __init__(self, base_dir: Union[str, Path]):
        self.base_dir = Path(base_dir)
        print(f"[LOCAL] Directorio base: {self.base_dir}")

    def _path(self, filename: str, subfolder: str = "") -> Path:
        return self.base_dir / subfolder / filename

    def save_json(self, data: dict, filename: str, subfolder: str = "") -> bool:
        try:
            file_path = self._path(filename, subfolder)
            file_path.parent.mkdir(parents=True, exist_ok=True)
            with open(file_path, 'w', encoding='utf-8') as f:
                json.dump(data, f, indent=2, ensure_ascii=False)
            print(f"[LOCAL] Guardado JSON: {file_path} ({file_path.stat().st_size / 1024:.1f} KB)")
            return True
        except (OSError, TypeError) as e:
            print(f"[LOCAL] Error al guardar JSON {filename}: {e}")
            return False

    def save_dataframe(self, df: pd.DataFrame, filename: str, subfolder: str = "") -> bool:
        try:
            file_path = self._path(filename, subfolder)
            file_path.parent.mkdir(parents=True, exist_ok=True)
            df.to_csv(file_path, index=False)
            print(f"[LOCAL] Guardado CSV: {file_path} ({len(df)} filas)")
            return True
        except OSError as e:
            print(f"[LOCAL] Error al guardar CSV {filename}: {e}")
            return False

    def load_json(self, filename: str, subfolder: str = "") -> dict:
        with open(self._path(filename, subfolder), 'r', encoding='utf-8') as f:
            return json.load(f)

    def load_dataframe(self, filename: str, subfolder: str = "") -> pd.DataFrame:
        return pd.read_csv(self._path(filename, subfolder))

    def list_files(self, subfolder: str = "", pattern: str = "*") -> List[str]:
        """Nombres de archivo (sin carpeta) que calzan con el patrón"""
        folder = self.base_dir / subfolder
        if not folder.exists():
            return []
        return sorted(p.name for p in folder.glob(pattern) if p.is_file())

    def folder_exists(self, subfolder: str) -> bool:
        return (self.base_dir / subfolder).exists()

    def delete_folder(self, subfolder: str) -> bool:
        folder = self.base_dir / subfolder
        if not folder.exists():
            print(f"[LOCAL] ℹ Carpeta no existe: {folder}")
            return False
        archivos = sum(1 for f in folder.rglob("*") if f.is_file())
        shutil.rmtree(folder)
        print(f"[LOCAL] ✓ Carpeta eliminada: {folder} ({archivos} archivos)")
        return True


class S3Storage:
    """
    Almacenamiento en AWS S3 bajo el prefijo 'experimentos/'
    """

    PREFIX = "experimentos"

    def __init__(self, bucket_name: str, region: str, access_key: str, secret_key: str):
        self.s3_manager = S3StorageManager(bucket_name, region, access_key, secret_key)
        self.bucket_name = bucket_name
        print(f"[S3] Bucket: {bucket_name} ({region})")

    def _key(self, filename: str, subfolder: str = "") -> str:
        return "/".join(part for part in (self.PREFIX, subfolder, filename) if part)

    def save_json(self, data: dict, filename: str, subfolder: str = "") -> bool:
        return self.s3_manager.upload_json(data, self._key(filename, subfolder))

    def save_dataframe(self, df: pd.DataFrame, filename: str, subfolder: str = "") -> bool:
        return self.s3_manager.upload_dataframe(df, self._key(filename, subfolder))

    def load_json(self, filename: str, subfolder: str = "") -> dict:
        return json.loads(self.s3_manager.download_bytes(self._key(filename, subfolder)).decode('utf-8'))

    def load_dataframe(self, filename: str, subfolder: str = "") -> pd.DataFrame:
        return pd.read_csv(io.BytesIO(self.s3_manager.download_bytes(self._key(filename, subfolder))))

    def list_files(self, subfolder: str = "", pattern: str = "*") -> List[str]:
        prefix = self._key("", subfolder) + "/"
        names = [key[len(prefix):] for key in self.s3_manager.list_objects(prefix)]
        names = [name for name in names if name and "/" not in name]
        if pattern != "*":
            extension = pattern.replace("*", "")
            names = [name for name in names if name.endswith(extension)]
        return sorted(names)

    def folder_exists(self, subfolder: str) -> bool:
        return bool(self.s3_manager.list_objects(self._key("", subfolder) + "/"))

    def delete_folder(self, subfolder: str) -> bool:
        objects = self.s3_manager.list_objects(self._key("", subfolder) + "/")
        if not objects:
            print(f"[S3] ℹ Carpeta no existe: {subfolder}")
            return False
        eliminados = sum(1 for key in objects if self.s3_manager.delete_object(key))
        print(f"[S3] ✓ Carpeta eliminada: {subfolder} ({eliminados}/{len(objects)} objetos)")
        return eliminados > 0


class StorageFactory:
    """
    Entrega una única instancia de almacenamiento según Config.PRODUCTION
    """

    _instance: Optional[Union[LocalStorage, S3Storage]] = None

    @classmethod
    def get_storage(cls) -> Union[LocalStorage, S3Storage]:
        if cls._instance is None:
            if Config.PRODUCTION:
                if not Config.S3_BUCKET_NAME:
                    raise Exception("S3_BUCKET_NAME no configurado en .env")
                if not Config.AWS_ACCESS_KEY_ID or not Config.AWS_SECRET_ACCESS_KEY:
                    raise Exception("Credenciales de AWS no configuradas en .env")
                cls._instance = S3Storage(
                    bucket_name=Config.S3_BUCKET_NAME,
                    region=Config.AWS_REGION,
                    access_key=Config.AWS_ACCESS_KEY_ID,
                    secret_key=Config.AWS_SECRET_ACCESS_KEY
                )
            else:
                cls._instance = LocalStorage(base_dir=Config.OUTPUT_DIR)
        return cls._instance

    @classmethod
    def reset(cls):
        """Olvida la instancia (usado por los tests)"""
        cls._instance = None
