"""Small dense factorizations for the Rayleigh-Ritz extraction step."""

from __future__ import annotations

import numpy as np


class RankDeficiencyError(RuntimeError):
    """A QR input lost full column rank (subspace collapse for the solver)."""


def thin_qr(B):
    """Householder thin QR with a nonnegative R diagonal.

    Filtered blocks become ill-conditioned as their columns converge to the
    same dominant subspace, so unconditional orthogonality matters more than
    speed here.  Raises ``RankDeficiencyError`` when a reflected column norm
    falls below 1e-14 * ||B||.
    """
    R = np.array(B, dtype=np.float64)
    if R.ndim != 2:
        raise ValueError("expected a 2-d block")
    m, p = R.shape
    if m < p:
        raise ValueError(f"need rows >= cols, got {m}x{p}")
    norm_b = np.linalg.norm(R)
    reflectors = []
    for k in range(p):
        x = R[k:, k]
        nx = np.linalg.norm(x)
        if nx <= 1e-14 * norm_b:
            raise RankDeficiencyError(
                f"column {k} is numerically dependent on the previous ones")
        v = x.copy()
        v[0] += nx if x[0] >= 0 else -nx
        v /= np.linalg.norm(v)
        R[k:, k:] -= 2.0 * np.outer(v, v @ R[k:, k:])
        reflectors.append(v)
    Q = np.zeros((m, p))
    Q[:p, :p] = np.eye(p)
    for k in range(p - 1, -1, -1):
        v = reflectors[k]
        Q[k:, :] -= 2.0 * np.outer(v, v @ Q[k:, :])
    R = np.triu(R[:p, :])
    flip = np.diagonal(R) < 0
    R[flip, :] *= -1.0
    Q[:, flip] *= -1.0
    return Q, R


def svd_small(B):
    """Backward-stable full SVD of a small dense block.

    Singular values come out in descending order; for B = 0 the convention is
    S = 0 with identity factors.
    """
    B = np.asarray(B, dtype=np.float64)
    if B.ndim != 2 or B.shape[0] < 1 or B.shape[1] < 1:
        raise ValueError("expected a nonempty 2-d block")
    m, n = B.shape
    if not B.any():
        k = min(m, n)
        return np.eye(m, k), np.zeros(k), np.eye(n, k)
    U, s, Vt = np.linalg.svd(B, full_matrices=False)
    return U, s, Vt.T
