from pathlib import Path

import pytest

from trs.parsing import load_trs
from trs.term import reset_fresh

CORPUS = Path(__file__).parent / "corpus"


@pytest.fixture
def corpus():
    def load(name: str):
        return load_trs(CORPUS / f"{name}.trs")
    return load


@pytest.fixture(autouse=True)
def fresh_names():
    reset_fresh()
    yield
