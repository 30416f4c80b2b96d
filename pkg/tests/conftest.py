from pathlib import Path

import pytest

from equidad.valuations import Additive, Instance
from utils.storage_factory import LocalStorage, StorageFactory

FIXTURES = Path(__file__).parent.parent / "fixtures"


def additive(*rows, declared_class=None):
    """Instancia aditiva con una fila de valores por agente"""
    m = len(rows[0])
    kwargs = {} if declared_class is None else {"declared_class": declared_class}
    return Instance(m, tuple(Additive(tuple(row), **kwargs) for row in rows))


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def local_storage(tmp_path):
    return LocalStorage(base_dir=tmp_path / "outputs")


@pytest.fixture(autouse=True)
def _reset_storage_factory():
    yield
    StorageFactory.reset()
