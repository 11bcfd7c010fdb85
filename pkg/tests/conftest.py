from pathlib import Path

import numpy as np
import pytest

from crystalrep.crystal import catalog

DATA = Path(__file__).parent / "data"


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=["p1", "pm", "pg", "p4m"])
def any_group(request):
    return catalog(request.param)


@pytest.fixture
def pg():
    return catalog("pg")


@pytest.fixture
def p4m():
    return catalog("p4m")


@pytest.fixture
def data_dir():
    return DATA
