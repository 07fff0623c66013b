"""Brute-force ground truth for desk-scale validation.

The dense SVD here is a hand-rolled one-sided Jacobi iteration, deliberately
sharing no code with the LAPACK-backed factorizations in ``dense``, so the
two routes can check each other.  Everything is size-capped: this module
optimizes for independence and correctness, not speed.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .chebyshev import evaluate_scalar
from .sparse import SparseMatrix

MAX_ORACLE_COLS = 500


@dataclasses.dataclass(frozen=True)
class DenseSvd:
    """Full SVD with descending singular values (U: m x n, V: n x n)."""

    U: np.ndarray
    S: np.ndarray
    V: np.ndarray


def _round_robin_pairs(n):
    """All-pairs schedule in n-1 rounds of disjoint pairs (n padded to even)."""
    padded = n + (n % 2)
    idx = np.arange(padded)
    half = padded // 2
    rounds = []
    for _ in range(padded - 1):
        left = idx[:half]
        right = idx[half:][::-1]
        keep = (left < n) & (right < n)
        rounds.append((left[keep].copy(), right[keep].copy()))
        idx = np.concatenate(([idx[0]], idx[-1:], idx[1:-1]))
    return rounds


def dense_full_svd(A, max_sweeps=60):
    """Full SVD by one-sided Jacobi rotations on the columns.

    Accepts a ``SparseMatrix`` or array with rows >= cols and at most
    ``MAX_ORACLE_COLS`` columns.  Columns that end up numerically zero get
    their left vectors from a Gram-Schmidt completion of the canonical basis.
    """
    dense = A.to_dense() if isinstance(A, SparseMatrix) else np.array(A, dtype=np.float64)
    if dense.ndim != 2:
        raise ValueError("expected a matrix")
    m, n = dense.shape
    if m < n:
        raise ValueError(f"need rows >= cols, got {m}x{n}")
    if n > MAX_ORACLE_COLS:
        raise ValueError(f"oracle is capped at {MAX_ORACLE_COLS} columns, got {n}")

    M = dense.copy()
    V = np.eye(n)
    rounds = _round_robin_pairs(n)
    scale = np.linalg.norm(M)
    if scale > 0.0:
        for _ in range(max_sweeps):
            worst = 0.0
            for li, ri in rounds:
                pi = M[:, li]
                pj = M[:, ri]
                aa = np.einsum("ij,ij->j", pi, pi)
                bb = np.einsum("ij,ij->j", pj, pj)
                cc = np.einsum("ij,ij->j", pi, pj)
                live = (aa > 0) & (bb > 0)
                rel = np.zeros_like(cc)
                rel[live] = np.abs(cc[live]) / np.sqrt(aa[live] * bb[live])
                worst = max(worst, rel.max(initial=0.0))
                rot = rel > 1e-16
                if not np.any(rot):
                    continue
                i_r, j_r = li[rot], ri[rot]
                # inner rotation (|theta| <= pi/4): stable under this ordering
                tau = (bb[rot] - aa[rot]) / (2.0 * cc[rot])
                t = np.sign(tau) / (np.abs(tau) + np.sqrt(1.0 + tau * tau))
                t[tau == 0.0] = 1.0  # a == b: 45-degree rotation
                cs = 1.0 / np.sqrt(1.0 + t * t)
                sn = t * cs
                gi, gj = M[:, i_r], M[:, j_r]
                M[:, i_r] = cs * gi - sn * gj
                M[:, j_r] = sn * gi + cs * gj
                gi, gj = V[:, i_r], V[:, j_r]
                V[:, i_r] = cs * gi - sn * gj
                V[:, j_r] = sn * gi + cs * gj
            if worst < 1e-15:
                break

    svals = np.linalg.norm(M, axis=0) if n else np.zeros(0)
    order = np.argsort(-svals, kind="stable")
    svals = svals[order]
    V = V[:, order]
    U = np.zeros((m, n))
    floor = 1e-13 * max(svals[0] if n else 0.0, 1e-300)
    good = svals > floor
    U[:, good] = M[:, order[good]] / svals[good]
    if not np.all(good):
        U[:, ~good] = _complete_orthonormal(U[:, good], m, int(np.sum(~good)))
        svals = svals.copy()
        svals[~good] = 0.0
    return DenseSvd(U=U, S=svals, V=V)


def _complete_orthonormal(existing, m, need):
    """Canonical-basis vectors orthonormalized against ``existing`` columns."""
    cols = [existing[:, k] for k in range(existing.shape[1])]
    out = []
    for i in range(m):
        if len(out) == need:
            break
        w = np.zeros(m)
        w[i] = 1.0
        for _ in range(2):
            for q in cols:
                w -= (q @ w) * q
        nw = np.linalg.norm(w)
        if nw > 0.5:
            w /= nw
            cols.append(w)
            out.append(w)
    if len(out) != need:
        raise RuntimeError("orthonormal completion failed")
    return np.column_stack(out)


@dataclasses.dataclass(frozen=True)
class ProjectorSpectrum:
    """Exact and filtered projector eigenvalues, matched index by index."""

    gamma: np.ndarray
    f: np.ndarray
    error: float  # max |f_i - gamma_i| = ||P_S - P||


def exact_projector_spectrum(svd, filt):
    """Eigenvalues of the filtered projector next to the exact 0/1/2 targets.

    ``gamma[i]`` is the filter value at the mapped square of the i-th
    singular value; ``f[i]`` is 1 strictly inside the interval, 1/2 at an
    exact endpoint and 0 outside.
    """
    step = filt.step
    if step.bounds is None:
        raise ValueError("filter was built without spectrum bounds")
    s = svd.S
    gamma = np.asarray(evaluate_scalar(filt, step.bounds.map_gram(s * s)))
    f = np.where((step.a < s) & (s < step.b), 1.0, 0.0)
    f = np.where((s == step.a) | (s == step.b), 0.5, f)
    return ProjectorSpectrum(gamma=gamma, f=f,
                             error=float(np.max(np.abs(f - gamma))))


def count_in_interval(svd, a, b):
    """Number of singular values in [a, b], endpoints included."""
    return int(np.count_nonzero((svd.S >= a) & (svd.S <= b)))


def subspace_distance(X, Y):
    """Largest principal-angle sine between equal-dimension column spans.

    Computed as the norm of the component of X orthogonal to span(Y), which
    stays accurate near 0 (1 - cos^2 would floor at sqrt(eps)).
    """
    X = np.asarray(X, dtype=np.float64)
    Y = np.asarray(Y, dtype=np.float64)
    if X.shape != Y.shape:
        raise ValueError(f"column blocks differ in shape: {X.shape} vs {Y.shape}")
    residual = X - Y @ (Y.T @ X)
    sines = np.linalg.svd(residual, compute_uv=False)
    return float(min(sines.max(initial=0.0), 1.0))
