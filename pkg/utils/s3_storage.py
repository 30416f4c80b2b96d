"""
S3 Storage Manager - Artefactos de experimentos en AWS S3
Sube reportes JSON y tablas CSV, y los recupera para la consolidación
"""

import io
import json
import time
from typing import List

import boto3
import pandas as pd
from botocore.exceptions import ClientError, NoCredentialsError


class S3StorageManager:
    """
    Gestor de objetos en un bucket S3, con reintentos y backoff exponencial
    """

    def __init__(self, bucket_name: str, region: str, access_key: str, secret_key: str):
        self.bucket_name = bucket_name
        self.region = region

        try:
            self.s3_client = boto3.client(
                's3',
                aws_access_key_id=access_key,
                aws_secret_access_key=secret_key,
                region_name=region
            )
            self._validate_bucket()
            print(f"[S3] Conectado al bucket: {bucket_name}")

        except NoCredentialsError:
            raise Exception("Credenciales de AWS no encontradas o inválidas")
        except ClientError as e:
            raise Exception(f"Error al inicializar el cliente S3: {e}")

    def _validate_bucket(self):
        try:
            self.s3_client.head_bucket(Bucket=self.bucket_name)
        except ClientError as e:
            code = e.response['Error']['Code']
            if code == '404':
                raise Exception(f"El bucket '{self.bucket_name}' no existe")
            if code == '403':
                raise Exception(f"Sin permisos sobre el bucket '{self.bucket_name}'")
            raise

    def upload_bytes(self, data: bytes, s3_key: str, max_retries: int = 3) -> bool:
        for attempt in range(max_retries):
            try:
                self.s3_client.put_object(Bucket=self.bucket_name, Key=s3_key, Body=data)
                print(f"[S3] Subido: {s3_key} ({len(data) / 1024:.1f} KB)")
                return True
            except ClientError as e:
                print(f"[S3] Error en intento {attempt + 1}/{max_retries}: {e}")
                if attempt < max_retries - 1:
                    time.sleep(2 ** attempt)
        print(f"[S3] FALLO: no se pudo subir {s3_key}")
        return False

    def upload_json(self, data: dict, s3_key: str) -> bool:
        return self.upload_bytes(json.dumps(data, indent=2, ensure_ascii=False).encode('utf-8'), s3_key)

    def upload_dataframe(self, df: pd.DataFrame, s3_key: str) -> bool:
        buffer = io.StringIO()
        df.to_csv(buffer, index=False)
        return self.upload_bytes(buffer.getvalue().encode('utf-8'), s3_key)

    def download_bytes(self, s3_key: str) -> bytes:
        try:
            response = self.s3_client.get_object(Bucket=self.bucket_name, Key=s3_key)
            return response['Body'].read()
        except ClientError as e:
            raise FileNotFoundError(f"No se pudo descargar {s3_key}: {e}")

    def list_objects(self, prefix: str = '') -> List[str]:
        """Claves bajo el prefijo (paginando más allá de 1000 objetos)"""
        keys = []
        try:
            paginator = self.s3_client.get_paginator('list_objects_v2')
            for page in paginator.paginate(Bucket=self.bucket_name, Prefix=prefix):
                keys.extend(obj['Key'] for obj in page.get('Contents', []))
        except ClientError as e:
            print(f"[S3] Error al listar {prefix}: {e}")
        return keys

    def delete_object(self, s3_key: str) -> bool:
        try:
            self.s3_client.delete_object(Bucket=self.bucket_name, Key=s3_key)
            return True
        except ClientError as e:
            print(f"[S3] Error al eliminar {s3_key}: {e}")
            return False
