"""Filtered subspace iteration for singular triplets in a target interval.

One iteration applies the polynomial filter to the current block,
re-orthonormalizes, projects the matrix onto the resulting left and right
subspaces, and extracts Ritz triplets from the small projected SVD.  The
left residual block A v - sigma u is zero by construction, so convergence is
judged on ||A^T u - sigma v|| alone.
"""

from __future__ import annotations

import dataclasses
import io
import json

import numpy as np

from .chebyshev import FilterSpec, apply_filter, build_filter
from .dense import RankDeficiencyError, svd_small, thin_qr
from .sparse import SpectrumBounds, estimate_spectrum_bounds
from .trace import TraceEstimate, estimate_trace, select_subspace_dimension

DEFAULT_SEED = 1729


class IntervalError(ValueError):
    """Requested interval lies outside the estimated spectrum."""


class SubspaceCollapseError(RuntimeError):
    """The iterated block lost rank; the subspace dimension is unreachable."""


@dataclasses.dataclass
class SolverOptions:
    """Knobs for :func:`solve`; the defaults are the recommended strategy."""

    D: float = 2.0
    d_override: int | None = None
    mu: float = 1.2
    p_override: int | None = None
    M: int = 20
    tol: float = 1e-8
    max_iterations: int = 100
    seed: int = DEFAULT_SEED
    bidiag_steps: int = 30
    inflate: float = 0.05
    interval_margin: float = 0.0
    keep_iterates: bool = False  # store per-iteration blocks (diagnostics)

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.mu < 1.0:
            raise ValueError("mu must be >= 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


@dataclasses.dataclass(frozen=True)
class RitzTriplet:
    """One approximate singular triplet with its residual norm."""

    sigma: float
    u: np.ndarray
    v: np.ndarray
    residual_norm: float


@dataclasses.dataclass(frozen=True)
class IterationRecord:
    k: int
    ritz_values_in_interval: np.ndarray
    max_residual: float
    min_residual: float
    cumulative_mvs: int
    max_left_residual: float


@dataclasses.dataclass
class IterationState:
    """Mutable loop state; ``iterate_once`` maps one of these to the next."""

    matrix: object
    filter: FilterSpec
    lo: float
    hi: float
    V: np.ndarray
    k: int = 0
    sigma: np.ndarray | None = None
    U: np.ndarray | None = None
    Q1: np.ndarray | None = None
    residuals: np.ndarray | None = None
    in_interval: np.ndarray | None = None
    max_left_residual: float = float("nan")


@dataclasses.dataclass
class SolverReport:
    converged: bool
    triplets: list
    history: list
    filter: FilterSpec
    trace: TraceEstimate
    bounds: SpectrumBounds
    p: int
    interval: tuple
    options: SolverOptions
    warnings: list
    mv_bounds: int
    mv_trace: int
    mv_total: int
    matrix_shape: tuple
    transposed_input: bool
    iterates: list | None = None

    def to_json(self, emit_vectors=False, indent=2):
        cfg = dataclasses.asdict(self.options)
        doc = {
            "schema_version": 1,
            "config": dict(cfg, interval=list(self.interval)),
            "matrix": {"rows": self.matrix_shape[0],
                       "cols": self.matrix_shape[1],
                       "transposed_on_ingest": self.transposed_input},
            "bounds": {"sigma_max_est": self.bounds.sigma_max_est,
                       "sigma_min_est": self.bounds.sigma_min_est,
                       "raw_max": self.bounds.raw_max,
                       "raw_min": self.bounds.raw_min,
                       "steps": self.bounds.steps},
            "filter": {"a": self.filter.step.a, "b": self.filter.step.b,
                       "alpha": self.filter.step.alpha,
                       "beta": self.filter.step.beta,
                       "degree": self.filter.degree},
            "trace": {"H_M": self.trace.value, "M": self.trace.samples,
                      "seed": self.trace.seed, "mv_cost": self.trace.mv_cost},
            "p": self.p,
            "converged": self.converged,
            "warnings": list(self.warnings),
            "iterations": len(self.history),
            "mv": {"bounds": self.mv_bounds, "trace": self.mv_trace,
                   "total": self.mv_total},
            "triplets": [
                dict({"sigma": t.sigma, "residual_norm": t.residual_norm},
                     **({"u": t.u.tolist(), "v": t.v.tolist()}
                        if emit_vectors else {}))
                for t in self.triplets
            ],
        }
        return json.dumps(doc, indent=indent)

    def history_csv(self):
        buf = io.StringIO()
        buf.write("k,max_residual,min_residual,cumulative_mvs\n")
        for rec in self.history:
            buf.write(f"{rec.k},{rec.max_residual!r},{rec.min_residual!r},"
                      f"{rec.cumulative_mvs}\n")
        return buf.getvalue()


def residual_norm(A, sigma, u, v):
    """||A^T u - sigma v|| for a unit Ritz pair (one MV).

    The upper residual block A v - sigma u is zero by construction of the
    extraction and is not computed.
    """
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != (A.rows,) or v.shape != (A.cols,):
        raise ValueError("vector lengths do not match the matrix")
    return float(np.linalg.norm(A.apply_transpose(u) - sigma * v))


def iterate_once(state):
    """One filtered subspace iteration with Rayleigh-Ritz extraction.

    Costs exactly 2*(degree+1)*p MVs: 2*degree*p for the filter, p for the
    left-subspace build and p for the residual block.
    """
    A, filt = state.matrix, state.filter
    Y = apply_filter(A, filt, state.V)
    try:
        Q1, _ = thin_qr(Y)
        B = A.apply(Q1)
        Q2, Abar = thin_qr(B)
    except RankDeficiencyError as exc:
        raise SubspaceCollapseError(
            f"iterated block collapsed at iteration {state.k + 1}: {exc}"
        ) from exc
    Ubar, sigma, Vbar = svd_small(Abar)
    U = Q2 @ Ubar
    Vhat = Q1 @ Vbar
    ATU = A.apply_transpose(U)
    residuals = np.linalg.norm(ATU - Vhat * sigma, axis=0)
    left = np.linalg.norm(B @ Vbar - U * sigma, axis=0)
    in_interval = (sigma >= state.lo) & (sigma <= state.hi)
    return dataclasses.replace(
        state, V=Vhat, k=state.k + 1, sigma=sigma, U=U, Q1=Q1,
        residuals=residuals, in_interval=in_interval,
        max_left_residual=float(left.max()))


def _clip_and_filter(A, bounds, a, b, opts):
    lo = max(a, bounds.sigma_min_est)
    hi = min(b, bounds.sigma_max_est)
    if not lo < hi:
        raise IntervalError(
            f"interval [{a}, {b}] lies outside the estimated spectrum "
            f"[{bounds.sigma_min_est:.6g}, {bounds.sigma_max_est:.6g}]")
    if opts.d_override is not None:
        filt = build_filter(bounds, lo, hi, degree=opts.d_override)
    else:
        filt = build_filter(bounds, lo, hi, D=opts.D)
    return filt


def prepare_interval(A, a, b, opts):
    """Bounds, filter and trace estimate for an interval, with a safety net.

    A probe quadratic form outside [0, n] proves the spectrum bounds did not
    cover the true spectrum (the Chebyshev recurrence diverged outside
    [-1, 1]); in that case the mapping is rebuilt once with the lower bound
    dropped to zero and a doubled norm margin, which restores containment at
    a marginal cost in filter degree.

    Returns (bounds, filter, trace, warnings).
    """
    bounds = estimate_spectrum_bounds(A, opts.bidiag_steps, opts.seed,
                                      opts.inflate)
    filt = _clip_and_filter(A, bounds, a, b, opts)
    trace = estimate_trace(A, filt, opts.M, opts.seed)
    warn = []
    if not trace.plausible(A.cols):
        warn.append(
            "spectrum bounds rejected: a projector probe left [0, n], so the "
            "mapped spectrum escaped [-1, 1]; retried with sigma_min_est = 0 "
            "and a doubled norm margin")
        bounds = SpectrumBounds(
            sigma_max_est=bounds.raw_max * (1.0 + 2.0 * opts.inflate),
            sigma_min_est=0.0, raw_max=bounds.raw_max, raw_min=bounds.raw_min,
            steps=bounds.steps, mv_cost=bounds.mv_cost)
        filt = _clip_and_filter(A, bounds, a, b, opts)
        trace = estimate_trace(A, filt, opts.M, opts.seed)
        if not trace.plausible(A.cols):
            raise SubspaceCollapseError(
                "projector probes still leave [0, n] after widening the "
                "spectrum bounds; increase bidiag_steps or inflate")
    return bounds, filt, trace, warn


def solve(A, a, b, opts=None):
    """Compute all singular triplets of A with singular values in [a, b].

    Pipeline: estimate spectrum bounds, build the polynomial filter, size the
    subspace from a stochastic trace estimate, then iterate until every Ritz
    value in the interval passes the residual test and the in-interval count
    has stabilized.  Fixed inputs and seed give an identical report.
    """
    opts = opts if opts is not None else SolverOptions()
    if not a < b:
        raise ValueError(f"need a < b, got [{a}, {b}]")
    if A.rows < A.cols:
        raise ValueError("matrix must have rows >= cols; pass its transpose")
    if A.nnz == 0 or not np.any(A.values):
        raise ValueError("matrix is zero")

    mv_origin = A.mv_count
    bounds, filt, trace, warnings_list = prepare_interval(A, a, b, opts)
    mv_bounds = bounds.mv_cost
    mv_trace = A.mv_count - mv_origin - mv_bounds
    if opts.p_override is not None:
        p = opts.p_override
        if p < 1:
            raise ValueError("subspace dimension override must be >= 1")
    else:
        p = select_subspace_dimension(trace, opts.mu)
    if p > A.cols:
        warnings_list.append(f"subspace dimension clamped from {p} to {A.cols}")
        p = A.cols

    rng = np.random.default_rng(opts.seed + 1)  # distinct stream from probes
    V0, _ = thin_qr(rng.standard_normal((A.cols, p)))

    margin = opts.interval_margin * (b - a)
    state = IterationState(matrix=A, filter=filt, lo=a - margin, hi=b + margin,
                           V=V0)
    thresh = bounds.raw_max * opts.tol
    history = []
    iterates = [] if opts.keep_iterates else None
    prev_count = None
    converged = False
    for k in range(1, opts.max_iterations + 1):
        state = iterate_once(state)
        count = int(np.count_nonzero(state.in_interval))
        res_in = state.residuals[state.in_interval]
        history.append(IterationRecord(
            k=k,
            ritz_values_in_interval=np.sort(state.sigma[state.in_interval])[::-1],
            max_residual=float(res_in.max()) if count else float("nan"),
            min_residual=float(res_in.min()) if count else float("nan"),
            cumulative_mvs=A.mv_count - mv_origin,
            max_left_residual=state.max_left_residual))
        if opts.keep_iterates:
            iterates.append({"k": k, "Q1": state.Q1.copy(),
                             "V": state.V.copy(), "U": state.U.copy(),
                             "sigma": state.sigma.copy(),
                             "residuals": state.residuals.copy(),
                             "in_interval": state.in_interval.copy()})
        if prev_count == count and bool(np.all(res_in <= thresh)):
            converged = True
            break
        prev_count = count

    if not converged and len(history) >= 11:
        r_old = history[-11].max_residual
        r_new = history[-1].max_residual
        if np.isfinite(r_old) and np.isfinite(r_new) and r_new > 0 \
                and r_old / r_new < 10.0:
            warnings_list.append(
                "stagnation suspected: the maximum residual improved by less "
                f"than 10x over the final 10 iterations; the subspace "
                f"dimension p={p} may be below the number of singular values "
                "in the interval - retry with a larger mu")

    triplets = []
    for i in np.flatnonzero(state.in_interval):
        u = state.U[:, i].copy()
        v = state.V[:, i].copy()
        if A.transposed_on_ingest:
            u, v = v, u
        triplets.append(RitzTriplet(sigma=float(state.sigma[i]), u=u, v=v,
                                    residual_norm=float(state.residuals[i])))

    return SolverReport(
        converged=converged, triplets=triplets, history=history, filter=filt,
        trace=trace, bounds=bounds, p=p, interval=(float(a), float(b)),
        options=opts, warnings=warnings_list, mv_bounds=mv_bounds,
        mv_trace=mv_trace, mv_total=A.mv_count - mv_origin,
        matrix_shape=A.shape, transposed_input=A.transposed_on_ingest,
        iterates=iterates)
