import numpy as np
import pytest

from l1line import DataMatrix

# Five points in four dimensions whose whole regularization path is known
# in closed form; most golden tests build on it.
TOY = np.array([
    [4.0, -2.0, 3.0, -6.0],
    [-3.0, 4.0, 2.0, -1.0],
    [2.0, 3.0, -3.0, -2.0],
    [-3.0, 4.0, 2.0, 3.0],
    [5.0, 3.0, 2.0, -1.0],
])


@pytest.fixture
def toy() -> DataMatrix:
    return DataMatrix(TOY.copy())


def random_instance(rng, n=None, m=None, zeros=False) -> DataMatrix:
    """Small uniform matrix; zeros=True sprinkles exact zero entries."""
    if n is None:
        n = int(rng.integers(2, 21))
    if m is None:
        m = int(rng.integers(2, 7))
    X = rng.uniform(-10.0, 10.0, size=(n, m))
    if zeros:
        X[rng.random(size=X.shape) < 0.25] = 0.0
        if not X.any():
            X[0, 0] = 1.0
    return DataMatrix(X)
