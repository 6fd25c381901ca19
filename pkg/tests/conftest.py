import pathlib

import numpy as np
import pytest

DATA_DIR = pathlib.Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def crop64():
    """64x64 natural-image crop (mixed edges and smooth areas)."""
    from kerneldenoise import load_pgm

    return load_pgm(DATA_DIR / "crop64.pgm")


@pytest.fixture
def rng():
    return np.random.default_rng(20260823)
