"""Stochastic estimation of the number of singular values in the interval.

The filtered projector is symmetric positive semi-definite with eigenvalues
in [0, 1], so its trace (approximately the count of wanted singular values)
can be estimated by averaging Rademacher quadratic forms without ever
assembling the projector.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .sparse import apply_mapped_gram


@dataclasses.dataclass(frozen=True)
class TraceEstimate:
    """Hutchinson estimate of the projector trace.

    ``quad_min``/``quad_max`` are the extreme per-probe quadratic forms.
    For a valid filter the projector is SPSD with eigenvalues in [0, 1], so
    every probe must land in [0, n]; values far outside certify that the
    spectrum bounds failed to cover the true spectrum.
    """

    value: float
    samples: int
    seed: int
    mv_cost: int
    quad_min: float = 0.0
    quad_max: float = 0.0

    def plausible(self, n):
        slack = 1e-6 * n
        return bool(np.isfinite(self.value)
                    and self.quad_min >= -slack
                    and self.quad_max <= n + slack)


def rademacher_block(n, M, seed):
    """An n x M block of +-1 entries from a seeded generator."""
    if n < 1 or M < 1:
        raise ValueError("need n >= 1 and M >= 1")
    rng = np.random.default_rng(seed)
    return rng.integers(0, 2, size=(n, M)).astype(np.float64) * 2.0 - 1.0


def estimate_trace(A, filt, M, seed):
    """Estimate tr(P) for the filtered projector P with M Rademacher probes.

    Runs the Chebyshev recurrence once per probe block and accumulates the
    quadratic forms z^T T_j z; never assembles P.  Costs exactly 2*M*degree
    MVs.  Fixed (matrix, filter, M, seed) gives a bitwise-identical result.
    """
    if M < 1:
        raise ValueError("need M >= 1")
    bounds = filt.step.bounds
    if bounds is None:
        raise ValueError("filter was built without spectrum bounds")
    Z = rademacher_block(A.cols, M, seed)
    c = filt.combined
    # z^T T_0 z = n exactly for +-1 probes
    quad = c[0] * np.einsum("ij,ij->j", Z, Z)
    if filt.degree >= 1:
        t_prev = Z
        t_cur = apply_mapped_gram(A, bounds, Z)
        quad += c[1] * np.einsum("ij,ij->j", Z, t_cur)
        for j in range(2, filt.degree + 1):
            t_prev, t_cur = t_cur, 2.0 * apply_mapped_gram(A, bounds, t_cur) - t_prev
            quad += c[j] * np.einsum("ij,ij->j", Z, t_cur)
    return TraceEstimate(value=float(np.mean(quad)), samples=M, seed=seed,
                         mv_cost=2 * M * filt.degree,
                         quad_min=float(np.min(quad)),
                         quad_max=float(np.max(quad)))


def select_subspace_dimension(estimate, mu):
    """Subspace dimension p = ceil(mu * H_M), floored at 1."""
    if mu < 1.0:
        raise ValueError("mu must be >= 1")
    v = mu * estimate.value
    f = math.floor(v)
    # fuzzy ceil: binary noise like 1.1 * 10.0 = 11.000000000000002 must not
    # push the dimension up a notch
    p = f if v - f <= 1e-9 * max(1.0, abs(v)) else f + 1
    return max(p, 1)


def min_sample_count(eps, delta, norm_over_trace):
    """Smallest M giving relative error <= eps with probability >= 1 - delta.

    ``norm_over_trace`` is (an upper estimate of) ||P|| / tr(P).  Exposed for
    planning; the solver itself uses a fixed modest M.
    """
    if not (0 < eps) or not (0 < delta < 1) or norm_over_trace <= 0:
        raise ValueError("need eps > 0, 0 < delta < 1, norm_over_trace > 0")
    return math.ceil(8.0 * (1.0 + eps) / eps ** 2
                     * math.log(2.0 / delta) * norm_over_trace)
