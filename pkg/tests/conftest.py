import numpy as np
import pytest

from cloneforge import group_from_name

# every named group of order <= 8 the package can build
GROUP_NAMES = ["Z2", "Z3", "Z4", "Z5", "Z2xZ2", "Z6", "S3", "Z7", "Z8", "D4", "Q8"]
ALL_ORDER_LE8 = GROUP_NAMES + ["Z4xZ2", "Z2xZ2xZ2"]


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))[None, :]


def positive_weights(rng: np.random.Generator, size: int, floor: float = 0.01) -> np.ndarray:
    """Random probability vector with every component >= floor."""
    return floor + rng.dirichlet(np.ones(size)) * (1.0 - floor * size)


def spread_weights(rng: np.random.Generator, size: int, spread: float = 0.05,
                   floor: float = 0.005, tries: int = 200) -> np.ndarray:
    for _ in range(tries):
        w = positive_weights(rng, size, floor)
        if w.max() - w.min() >= spread:
            return w
    raise AssertionError("could not draw weights with the requested spread")


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)


def named_groups(names=GROUP_NAMES):
    return [(name, group_from_name(name)) for name in names]
