from pathlib import Path

import numpy as np
import pytest

from spectral_var.harness import gen_hermitian, gen_perturbation, sharp_pair


DATA_DIR = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture
def remark1_pair():
    return sharp_pair("remark1")


@pytest.fixture
def main1_pair():
    def make(b: float):
        return sharp_pair("main1_family", b)
    return make


@pytest.fixture
def random_instance():
    """GUE A plus a Ginibre K scaled to ‖K‖_p = norm, seeded."""
    def make(n: int, p: float, seed: int, norm: float = 1.0):
        a = gen_hermitian(n, [seed, 0])
        k = gen_perturbation(n, [seed, 1], p, norm)
        return a, a + k
    return make


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def ginibre(rng: np.random.Generator, n: int, m: int | None = None) -> np.ndarray:
    m = n if m is None else m
    return rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))
