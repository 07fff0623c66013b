"""CSR sparse matrices, Matrix Market I/O, and spectrum-bound estimation.

Everything downstream touches the matrix only through ``apply`` and
``apply_transpose``, so the per-matrix MV counter is an exact record of the
dominant cost of a run.
"""

from __future__ import annotations

import dataclasses
import os

import numpy as np
import scipy.sparse


class MatrixFormatError(ValueError):
    """Malformed Matrix Market input."""


class BidiagonalizationError(RuntimeError):
    """Bound estimation broke down before completing a single step."""


class SparseMatrix:
    """Immutable CSR matrix with an MV counter.

    ``row_offsets``, ``col_indices`` and ``values`` are the canonical CSR
    arrays (sorted column indices, duplicates summed).  The counter increments
    by one per vector for every product with the matrix or its transpose.
    """

    def __init__(self, rows, cols, row_offsets, col_indices, values,
                 transposed_on_ingest=False):
        values = np.ascontiguousarray(values, dtype=np.float64)
        col_indices = np.ascontiguousarray(col_indices, dtype=np.int64)
        row_offsets = np.ascontiguousarray(row_offsets, dtype=np.int64)
        if row_offsets.shape != (rows + 1,):
            raise ValueError("row_offsets must have length rows + 1")
        if np.any(np.diff(row_offsets) < 0):
            raise ValueError("row_offsets must be nondecreasing")
        if row_offsets[-1] != len(values) or len(values) != len(col_indices):
            raise ValueError("inconsistent nnz between offsets, indices and values")
        if len(col_indices) and (col_indices.min() < 0 or col_indices.max() >= cols):
            raise ValueError("column index out of range")
        csr = scipy.sparse.csr_matrix((values, col_indices, row_offsets),
                                      shape=(rows, cols))
        csr.sum_duplicates()
        csr.sort_indices()
        self.rows = int(rows)
        self.cols = int(cols)
        self.row_offsets = csr.indptr.astype(np.int64)
        self.col_indices = csr.indices.astype(np.int64)
        self.values = csr.data
        self.transposed_on_ingest = bool(transposed_on_ingest)
        self._csr = csr
        self._csr_t = csr.T.tocsr()
        self._mv_count = 0

    @classmethod
    def from_coo(cls, rows, cols, row_idx, col_idx, values,
                 transposed_on_ingest=False):
        """Build canonical CSR from triplets; duplicate entries are summed."""
        coo = scipy.sparse.coo_matrix(
            (np.asarray(values, dtype=np.float64),
             (np.asarray(row_idx, dtype=np.int64),
              np.asarray(col_idx, dtype=np.int64))),
            shape=(rows, cols))
        csr = coo.tocsr()
        return cls(rows, cols, csr.indptr, csr.indices, csr.data,
                   transposed_on_ingest=transposed_on_ingest)

    @classmethod
    def from_dense(cls, dense):
        dense = np.asarray(dense, dtype=np.float64)
        csr = scipy.sparse.csr_matrix(dense)
        return cls(dense.shape[0], dense.shape[1], csr.indptr, csr.indices, csr.data)

    @property
    def shape(self):
        return (self.rows, self.cols)

    @property
    def nnz(self):
        return len(self.values)

    @property
    def mv_count(self):
        """Matrix-vector products with A or A^T performed so far."""
        return self._mv_count

    def to_dense(self):
        return self._csr.toarray()

    def _count(self, x):
        self._mv_count += 1 if x.ndim == 1 else x.shape[1]

    def apply(self, x):
        """y = A x for a vector or a block of column vectors."""
        x = np.asarray(x, dtype=np.float64)
        if x.shape[0] != self.cols:
            raise ValueError(f"dimension mismatch: A is {self.rows}x{self.cols}, "
                             f"x has leading dimension {x.shape[0]}")
        self._count(x)
        return self._csr @ x

    def apply_transpose(self, y):
        """x = A^T y for a vector or a block of column vectors."""
        y = np.asarray(y, dtype=np.float64)
        if y.shape[0] != self.rows:
            raise ValueError(f"dimension mismatch: A is {self.rows}x{self.cols}, "
                             f"y has leading dimension {y.shape[0]}")
        self._count(y)
        return self._csr_t @ y


@dataclasses.dataclass(frozen=True)
class SpectrumBounds:
    """Safety-margined estimates of the extreme singular values.

    ``raw_max`` and ``raw_min`` come straight out of the bidiagonalization;
    the ``*_est`` values are widened outward so that the mapped Gram spectrum
    stays inside [-1, 1], where the Chebyshev recurrence is stable.
    """

    sigma_max_est: float
    sigma_min_est: float
    raw_max: float
    raw_min: float
    steps: int = 0
    mv_cost: int = 0

    def __post_init__(self):
        if not (0.0 <= self.sigma_min_est <= self.raw_min
                <= self.raw_max <= self.sigma_max_est):
            raise ValueError("bounds must satisfy 0 <= min_est <= raw_min "
                             "<= raw_max <= max_est")
        if self.sigma_max_est <= self.sigma_min_est:
            raise ValueError("degenerate mapping interval")

    @classmethod
    def exact(cls, sigma_max, sigma_min=0.0):
        """Bounds with no safety margin (test and diagnostic use)."""
        return cls(sigma_max, sigma_min, sigma_max, sigma_min)

    def map_gram(self, x):
        """Affine map sending [sigma_min_est^2, sigma_max_est^2] to [-1, 1]."""
        hi = self.sigma_max_est ** 2
        lo = self.sigma_min_est ** 2
        return (2.0 * np.asarray(x, dtype=np.float64) - hi - lo) / (hi - lo)


def estimate_spectrum_bounds(A, steps, seed, inflate=0.05):
    """Estimate ||A|| and sigma_min(A) by Golub-Kahan bidiagonalization.

    Runs ``steps`` iterations from a seeded random start vector with full
    reorthogonalization (cheap at these step counts, and it keeps the small
    bidiagonal matrix trustworthy).  The extreme singular values of that
    matrix are widened by ``inflate`` to give the mapping interval.
    """
    if steps < 2:
        raise ValueError("steps must be >= 2")
    m, n = A.shape
    mv_start = A.mv_count
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)

    U = np.zeros((m, steps))
    V = np.zeros((n, steps))
    alphas: list[float] = []
    betas: list[float] = []

    V[:, 0] = v
    u = A.apply(v)
    a0 = np.linalg.norm(u)
    if a0 == 0.0:
        raise BidiagonalizationError("start vector annihilated at the first step")
    U[:, 0] = u / a0
    alphas.append(a0)

    for k in range(1, steps):
        scale = max(max(alphas), max(betas, default=0.0))
        tiny = 1e-12 * scale
        w = A.apply_transpose(U[:, k - 1]) - alphas[-1] * V[:, k - 1]
        for _ in range(2):  # two reorthogonalization passes
            w -= V[:, :k] @ (V[:, :k].T @ w)
        b = np.linalg.norm(w)
        if b <= tiny:
            break
        V[:, k] = w / b
        u = A.apply(V[:, k]) - b * U[:, k - 1]
        for _ in range(2):
            u -= U[:, :k] @ (U[:, :k].T @ u)
        a = np.linalg.norm(u)
        if a <= tiny:
            break
        betas.append(b)
        alphas.append(a)
        U[:, k] = u / a

    B = np.diag(alphas)
    if betas:
        B += np.diag(betas, 1)
    svals = np.linalg.svd(B, compute_uv=False)
    raw_max = float(svals[0])
    raw_min = float(svals[-1])
    return SpectrumBounds(
        sigma_max_est=raw_max * (1.0 + inflate),
        sigma_min_est=max(0.0, raw_min * (1.0 - inflate)),
        raw_max=raw_max,
        raw_min=raw_min,
        steps=len(alphas),
        mv_cost=A.mv_count - mv_start,
    )


def apply_mapped_gram(A, bounds, X):
    """Apply the mapped Gram operator (2 A^T A - hi - lo) / (hi - lo) to X.

    Costs exactly two MVs per column of X.
    """
    hi = bounds.sigma_max_est ** 2
    lo = bounds.sigma_min_est ** 2
    X = np.asarray(X, dtype=np.float64)
    return (2.0 * A.apply_transpose(A.apply(X)) - (hi + lo) * X) / (hi - lo)


_FIELDS = ("real", "integer")
_SYMMETRIES = ("general", "symmetric")


def parse_matrix_market(data):
    """Parse Matrix Market coordinate text into a canonical ``SparseMatrix``.

    Accepts ``real`` or ``integer`` fields with ``general`` or ``symmetric``
    symmetry.  Symmetric storage is expanded, duplicates are summed, and
    1-based indices become 0-based.  Inputs with more columns than rows are
    transposed (``transposed_on_ingest`` records this) so that internally
    rows >= cols always holds.
    """
    if isinstance(data, bytes):
        data = data.decode("ascii", errors="replace")
    lines = data.splitlines()
    if not lines:
        raise MatrixFormatError("empty input")

    header = lines[0].split()
    if len(header) != 5 or header[0].lower() != "%%matrixmarket":
        raise MatrixFormatError(f"line 1: not a Matrix Market header: {lines[0]!r}")
    _, obj, fmt, field, symmetry = (tok.lower() for tok in header)
    if obj != "matrix" or fmt != "coordinate":
        raise MatrixFormatError(
            f"line 1: only 'matrix coordinate' inputs are supported, got "
            f"'{obj} {fmt}'")
    if field not in _FIELDS:
        raise MatrixFormatError(f"line 1: unsupported field '{field}' "
                                f"(expected one of {_FIELDS})")
    if symmetry not in _SYMMETRIES:
        raise MatrixFormatError(f"line 1: unsupported symmetry '{symmetry}' "
                                f"(expected one of {_SYMMETRIES})")

    lineno = 1
    size_line = None
    for lineno, raw in enumerate(lines[1:], start=2):
        stripped = raw.strip()
        if not stripped or stripped.startswith("%"):
            continue
        size_line = stripped
        break
    if size_line is None:
        raise MatrixFormatError("missing size line")
    parts = size_line.split()
    if len(parts) != 3:
        raise MatrixFormatError(f"line {lineno}: size line must be 'rows cols nnz'")
    try:
        m, n, nnz = (int(p) for p in parts)
    except ValueError:
        raise MatrixFormatError(f"line {lineno}: non-integer size entry") from None
    if m <= 0 or n <= 0 or nnz < 0:
        raise MatrixFormatError(f"line {lineno}: invalid dimensions {m} {n} {nnz}")
    if symmetry == "symmetric" and m != n:
        raise MatrixFormatError(f"line {lineno}: symmetric matrix must be square")

    rows = np.empty(nnz, dtype=np.int64)
    cols = np.empty(nnz, dtype=np.int64)
    vals = np.empty(nnz, dtype=np.float64)
    count = 0
    for lineno, raw in enumerate(lines[lineno:], start=lineno + 1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("%"):
            continue
        if count >= nnz:
            raise MatrixFormatError(
                f"line {lineno}: more than the declared {nnz} entries")
        parts = stripped.split()
        if len(parts) != 3:
            raise MatrixFormatError(
                f"line {lineno}: expected 'row col value', got {stripped!r}")
        try:
            i = int(parts[0])
            j = int(parts[1])
            v = float(parts[2])
        except ValueError:
            raise MatrixFormatError(f"line {lineno}: malformed entry "
                                    f"{stripped!r}") from None
        if not (1 <= i <= m) or not (1 <= j <= n):
            raise MatrixFormatError(
                f"line {lineno}: index ({i}, {j}) outside declared "
                f"{m}x{n} bounds")
        rows[count] = i - 1
        cols[count] = j - 1
        vals[count] = v
        count += 1
    if count != nnz:
        raise MatrixFormatError(
            f"declared {nnz} entries but found {count}")

    if symmetry == "symmetric":
        off = rows != cols
        rows, cols = (np.concatenate([rows, cols[off]]),
                      np.concatenate([cols, rows[off]]))
        vals = np.concatenate([vals, vals[off]])

    transposed = m < n
    if transposed:
        rows, cols = cols, rows
        m, n = n, m
    return SparseMatrix.from_coo(m, n, rows, cols, vals,
                                 transposed_on_ingest=transposed)


def read_matrix_market(path):
    """Parse a Matrix Market file from disk."""
    with open(os.fspath(path), "rb") as fh:
        return parse_matrix_market(fh.read())


def write_matrix_market(A):
    """Serialize to Matrix Market coordinate text (general, 1-based)."""
    out = ["%%MatrixMarket matrix coordinate real general",
           f"{A.rows} {A.cols} {A.nnz}"]
    for i in range(A.rows):
        start, stop = A.row_offsets[i], A.row_offsets[i + 1]
        for k in range(start, stop):
            out.append(f"{i + 1} {A.col_indices[k] + 1} {A.values[k]:.17g}")
    return "\n".join(out) + "\n"
