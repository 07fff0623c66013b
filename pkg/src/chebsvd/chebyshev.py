"""Chebyshev-Jackson polynomial filters approximating a spectral projector.

The filter is the degree-d Jackson-damped Chebyshev expansion of the step
function that is 1 on the target interval, 1/2 at its ends and 0 elsewhere.
Its values always lie in [0, 1], so applying it to the mapped Gram operator
of a matrix yields a symmetric positive semi-definite approximate projector
whose dominant eigenvectors span the wanted singular subspace.
"""

from __future__ import annotations

import dataclasses
import math
import warnings

import numpy as np

from .sparse import SpectrumBounds, apply_mapped_gram


class OutsideDomainWarning(UserWarning):
    """Filter evaluated outside [-1, 1]; the value is untrusted."""


@dataclasses.dataclass(frozen=True)
class StepSpec:
    """Target interval together with its arccos-mapped angles.

    On the solver path ``a``/``b`` are in singular-value units and the angles
    come from the mapped Gram image of [a^2, b^2]; ``from_unit_interval``
    instead takes an interval directly on [-1, 1] (filter diagnostics and
    error-bound studies).
    """

    a: float
    b: float
    alpha: float
    beta: float
    bounds: SpectrumBounds | None = None

    def __post_init__(self):
        if not (0.0 <= self.beta < self.alpha <= np.pi):
            raise ValueError(f"need 0 <= beta < alpha <= pi, got "
                             f"alpha={self.alpha}, beta={self.beta}")

    @classmethod
    def from_bounds(cls, bounds, a, b):
        if not (a < b):
            raise ValueError(f"need a < b, got [{a}, {b}]")
        if not (bounds.sigma_min_est <= a and b <= bounds.sigma_max_est):
            raise ValueError(
                f"interval [{a}, {b}] is not inside the spectrum bounds "
                f"[{bounds.sigma_min_est}, {bounds.sigma_max_est}]")
        alpha = float(np.arccos(bounds.map_gram(a * a)))
        beta = float(np.arccos(bounds.map_gram(b * b)))
        return cls(a=float(a), b=float(b), alpha=alpha, beta=beta, bounds=bounds)

    @classmethod
    def from_unit_interval(cls, lo, hi):
        if not (-1.0 <= lo < hi <= 1.0):
            raise ValueError(f"need -1 <= lo < hi <= 1, got [{lo}, {hi}]")
        return cls(a=float(lo), b=float(hi),
                   alpha=float(np.arccos(lo)), beta=float(np.arccos(hi)),
                   bounds=None)


@dataclasses.dataclass(frozen=True, eq=False)
class FilterSpec:
    """Degree-d filter with its coefficient arrays.

    ``combined[j]`` multiplies T_j in every evaluation path: the damped
    product rho_j * c_j for j >= 1, and the already-halved constant term
    (alpha - beta) / pi at j = 0.  ``fourier`` keeps the unhalved Fourier
    coefficients for diagnostics.
    """

    step: StepSpec
    degree: int
    combined: np.ndarray
    fourier: np.ndarray
    damping: np.ndarray


def fourier_coefficients(alpha, beta, d):
    """Chebyshev-Fourier coefficients of the step function on [beta, alpha].

    Index 0 holds the already-halved constant term (alpha - beta) / pi.
    """
    if not (0.0 <= beta < alpha <= np.pi):
        raise ValueError("need 0 <= beta < alpha <= pi")
    if d < 0:
        raise ValueError("degree must be >= 0")
    c = np.empty(d + 1)
    c[0] = (alpha - beta) / np.pi
    j = np.arange(1, d + 1)
    c[1:] = (2.0 / np.pi) * (np.sin(j * alpha) - np.sin(j * beta)) / j
    return c


def jackson_factors(d):
    """Jackson damping factors rho_{j,d}, j = 0..d (rho_0 = 1 exactly)."""
    if d < 0:
        raise ValueError("degree must be >= 0")
    j = np.arange(d + 1, dtype=np.float64)
    z = np.pi / (d + 2)
    return ((d + 2 - j) * np.sin(z) * np.cos(j * z)
            + np.cos(z) * np.sin(j * z)) / ((d + 2) * np.sin(z))


def jackson_factors_autocorrelation(d):
    """Damping factors via the autocorrelation of the sine window.

    Mathematically identical to ``jackson_factors``; kept as an independent
    cross-check of the closed form.
    """
    i = np.arange(d + 1, dtype=np.float64)
    t = np.sin((i + 1) * np.pi / (d + 2))
    t /= np.sqrt(2.0 * np.sum(t * t))
    return np.array([2.0 * np.dot(t[:d + 1 - j], t[j:]) for j in range(d + 1)])


def select_degree(alpha, beta, D):
    """Degree from the width of the mapped interval: ceil(D pi^2 / w^{4/3}) - 2."""
    if not alpha > beta:
        raise ValueError("need alpha > beta")
    if D <= 0:
        raise ValueError("D must be positive")
    d = math.ceil(D * np.pi ** 2 / (alpha - beta) ** (4.0 / 3.0)) - 2
    return max(d, 1)


def _make_filter(step, degree):
    coeffs = fourier_coefficients(step.alpha, step.beta, degree)
    damping = jackson_factors(degree)
    combined = damping * coeffs
    combined[0] = coeffs[0]  # constant term carries no damping
    fourier = coeffs.copy()
    fourier[0] *= 2.0  # unhalved convention for the diagnostics array
    return FilterSpec(step=step, degree=int(degree), combined=combined,
                      fourier=fourier, damping=damping)


def build_filter(bounds, a, b, degree=None, D=None):
    """Build the filter for singular values in [a, b] given spectrum bounds.

    Exactly one of ``degree`` (explicit) or ``D`` (constant for
    ``select_degree``) must be given.
    """
    if (degree is None) == (D is None):
        raise ValueError("pass exactly one of degree= or D=")
    step = StepSpec.from_bounds(bounds, a, b)
    if degree is None:
        degree = select_degree(step.alpha, step.beta, D)
    if degree < 1:
        raise ValueError("degree must be >= 1")
    return _make_filter(step, degree)


def unit_interval_filter(lo, hi, degree):
    """Filter for a target interval given directly on [-1, 1]."""
    if degree < 1:
        raise ValueError("degree must be >= 1")
    return _make_filter(StepSpec.from_unit_interval(lo, hi), degree)


def evaluate_scalar(filt, x):
    """Evaluate the filter polynomial at x in [-1, 1] by Clenshaw summation.

    Values outside [-1, 1] are computed anyway (no clamping) but trigger an
    ``OutsideDomainWarning``: the recurrence grows geometrically out there.
    """
    arr = np.asarray(x, dtype=np.float64)
    # a few ulps of slack: exact-bound mappings land on +-1 up to rounding
    if np.any(np.abs(arr) > 1.0 + 1e-14):
        warnings.warn("filter evaluated outside [-1, 1]; value is untrusted",
                      OutsideDomainWarning, stacklevel=2)
    c = filt.combined
    b1 = np.zeros_like(arr)
    b2 = np.zeros_like(arr)
    two_x = 2.0 * arr
    for cj in c[:0:-1]:
        b1, b2 = cj + two_x * b1 - b2, b1
    out = c[0] + arr * b1 - b2
    return float(out) if np.isscalar(x) else out


def target_step(step, x):
    """The {0, 1/2, 1}-valued target the filter approximates, at x in [-1, 1].

    Endpoint detection happens in angle space so that x values bitwise equal
    to the interval ends map to exactly 1/2.
    """
    arr = np.asarray(x, dtype=np.float64)
    theta = np.arccos(arr)
    out = np.where((step.beta < theta) & (theta < step.alpha), 1.0, 0.0)
    out = np.where((theta == step.alpha) | (theta == step.beta), 0.5, out)
    return float(out) if np.isscalar(x) else out


def pointwise_error_bound(step, d, theta):
    """Upper bound on |psi_d(cos theta) - h(cos theta)|.

    Away from the interval angles the bound is pi^6 / (2 (d+2)^3 Delta^4)
    with Delta the angular distance to the nearer end; at an end the caller
    must pass ``step.alpha`` or ``step.beta`` verbatim to get the dedicated
    discontinuity constant.
    """
    if d < 2:
        raise ValueError("bound requires d >= 2")
    if not (0.0 <= theta <= np.pi):
        raise ValueError("theta must lie in [0, pi]")
    lead = np.pi ** 6 / (2.0 * (d + 2) ** 3)
    width = step.alpha - step.beta
    if theta == step.alpha:
        with np.errstate(divide="ignore"):
            return lead * max((2.0 * np.pi - 2.0 * step.alpha) ** -4.0,
                              width ** -4.0)
    if theta == step.beta:
        with np.errstate(divide="ignore"):
            return lead * max((2.0 * step.beta) ** -4.0, width ** -4.0)
    delta = min(abs(theta - step.alpha), abs(theta - step.beta))
    return lead / delta ** 4


def projector_error_bound(d, delta_min):
    """Bound on the projector error given the smallest angular separation.

    ``delta_min`` is the minimum angular distance between the interval ends
    and the nearest mapped singular values on either side; it needs knowledge
    of the true spectrum, so this is a validation-side quantity.
    """
    if delta_min <= 0:
        raise ValueError("delta_min must be positive")
    return np.pi ** 6 / (2.0 * (d + 2) ** 3 * delta_min ** 4)


def degree_for_projector_gap(delta_min):
    """Smallest degree whose projector error bound is below 1/4."""
    if delta_min <= 0:
        raise ValueError("delta_min must be positive")
    c = 2.0 ** (1.0 / 3.0) * np.pi ** 2 / delta_min ** (4.0 / 3.0)
    d = max(1, math.floor(c - 2.0) + 1)
    while projector_error_bound(d, delta_min) >= 0.25:
        d += 1
    return d


def apply_filter(A, filt, X):
    """Apply the filtered projector to a block of column vectors.

    Uses the blockwise three-term Chebyshev recurrence, retaining only two
    previous block iterates; costs exactly 2 * degree MVs per column.
    """
    step = filt.step
    if step.bounds is None:
        raise ValueError("filter was built without spectrum bounds; "
                         "it cannot be applied to a matrix")
    X = np.asarray(X, dtype=np.float64)
    if X.shape[0] != A.cols:
        raise ValueError(f"block has leading dimension {X.shape[0]}, "
                         f"expected {A.cols}")
    c = filt.combined
    acc = c[0] * X
    if filt.degree >= 1:
        t_prev = X
        t_cur = apply_mapped_gram(A, step.bounds, X)
        acc = acc + c[1] * t_cur
        for j in range(2, filt.degree + 1):
            t_prev, t_cur = t_cur, 2.0 * apply_mapped_gram(A, step.bounds, t_cur) - t_prev
            acc += c[j] * t_cur
    return acc
