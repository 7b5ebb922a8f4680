"""Shared test helpers, chiefly the independent triple-loop oracle."""

import numpy as np
import pytest

from matmulkit import Matrix


def loop_matmul(a: Matrix, b: Matrix) -> Matrix:
    """Reference product computed by an explicit scalar triple loop.

    Deliberately independent of the library's kernels: plain Python loops
    over Python scalars, no numpy arithmetic.
    """
    m, n = a.rows, a.cols
    k = b.cols
    arows = a.arr.tolist()
    brows = b.arr.tolist()
    out = [[0] * k for _ in range(m)]
    for i in range(m):
        for j in range(k):
            total = arows[i][0] * brows[0][j]
            for p in range(1, n):
                total += arows[i][p] * brows[p][j]
            out[i][j] = total
    return Matrix(np.array(out, dtype=a.arr.dtype))


def int_matrix(rng, rows, cols) -> Matrix:
    return Matrix(rng.integers(-8, 9, size=(rows, cols), dtype=np.int64))


def real_matrix(rng, rows, cols) -> Matrix:
    return Matrix(rng.uniform(-1.0, 1.0, size=(rows, cols)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240901)
