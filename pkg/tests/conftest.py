import numpy as np
import pytest

from softmmse import build_model, by_name


def random_hpd(rng: np.random.Generator, m: int, scale: float = 1.0) -> np.ndarray:
    V = (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / np.sqrt(2 * m)
    return scale * (V @ V.conj().T + 0.1 * np.eye(m))


def random_h(rng: np.random.Generator, m: int, n: int) -> np.ndarray:
    return (rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))) / np.sqrt(2)


def random_model(rng: np.random.Generator, m: int, n: int, constellation="qpsk",
                 noise_scale=0.1):
    c = constellation if not isinstance(constellation, str) else by_name(constellation)
    return build_model(random_h(rng, m, n), c, random_hpd(rng, m, noise_scale))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
