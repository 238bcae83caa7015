import shutil
from pathlib import Path

import pytest

from methodgraph.datagen import fixture_records
from methodgraph.graphcore import build_graph


@pytest.fixture(scope="session")
def fixture_dataset() -> Path:
    return Path(__file__).resolve().parent.parent / "data" / "fixture.csv"


@pytest.fixture()
def records():
    return fixture_records()


@pytest.fixture()
def graph(records):
    g, report = build_graph(records)
    assert not report.issues
    return g


@pytest.fixture()
def datastore_dir(tmp_path, fixture_dataset) -> Path:
    """A scratch directory seeded with the fixture dataset."""
    shutil.copy(fixture_dataset, tmp_path / "fixture.csv")
    return tmp_path
