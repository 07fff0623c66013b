import numpy as np
import pytest

from chebsvd import SparseMatrix


def diag_sparse(values):
    values = np.asarray(values, dtype=np.float64)
    n = len(values)
    return SparseMatrix.from_coo(n, n, np.arange(n), np.arange(n), values)


def random_sparse(m, n, density, seed):
    rng = np.random.default_rng(seed)
    nnz = int(density * m * n)
    i = rng.integers(0, m, nnz)
    j = rng.integers(0, n, nnz)
    v = rng.standard_normal(nnz)
    return SparseMatrix.from_coo(m, n, i, j, v)


def sin_angle(x, y):
    """Stable sine of the angle between unit vectors (no 1 - cos^2 floor)."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    x = x / np.linalg.norm(x)
    y = y / np.linalg.norm(y)
    return float(np.linalg.norm(x - y * (y @ x)))


def gap_window(S, k, skip=2):
    """Interval at gap midpoints containing exactly k of the descending S.

    Scans interior windows and keeps the one whose boundary gaps are widest,
    so the chosen singular values are well separated from the rest.
    """
    S = np.asarray(S)
    best = None
    for i0 in range(skip, len(S) - k - skip):
        score = min(S[i0 - 1] - S[i0], S[i0 + k - 1] - S[i0 + k])
        if best is None or score > best[0]:
            best = (score, i0)
    _, i0 = best
    a = 0.5 * (S[i0 + k - 1] + S[i0 + k])
    b = 0.5 * (S[i0 - 1] + S[i0])
    return float(a), float(b), i0


def diag_mtx_text(values):
    n = len(values)
    lines = ["%%MatrixMarket matrix coordinate real general", f"{n} {n} {n}"]
    lines += [f"{i + 1} {i + 1} {v}" for i, v in enumerate(values)]
    return "\n".join(lines) + "\n"


@pytest.fixture
def diag5():
    return diag_sparse([1.0, 2.0, 3.0, 4.0, 5.0])
