"""
Utils Package - Utilidades del experimento EQ1
Contiene módulos para manejo de almacenamiento de reportes (local y S3)
"""
