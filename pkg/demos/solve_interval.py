"""End-to-end interval solve with oracle verification and cost accounting.

Generates a sparse matrix, asks the solver for every singular triplet in a
mid-spectrum interval, and checks the answer against an independent dense
SVD.  Also shows the exact matrix-vector product breakdown that dominates
the runtime at scale.
"""

import numpy as np

from chebsvd import (SolverOptions, SparseMatrix, dense_full_svd, solve)

rng = np.random.default_rng(11)
m, n, nnz = 400, 200, 8000
A = SparseMatrix.from_coo(m, n, rng.integers(0, m, nnz),
                          rng.integers(0, n, nnz), rng.standard_normal(nnz))

svd = dense_full_svd(A)
S = svd.S
# an interior window of five singular values, cut at gap midpoints
i0 = 40
a = 0.5 * (S[i0 + 4] + S[i0 + 5])
b = 0.5 * (S[i0 - 1] + S[i0])
print(f"matrix: {m}x{n}, {A.nnz} nonzeros; target interval [{a:.4f}, {b:.4f}]")
print(f"exact count in interval: {np.sum((S >= a) & (S <= b))}\n")

report = solve(A, a, b, SolverOptions(tol=1e-10, mu=1.5))

print(f"{'computed sigma':>16} {'exact sigma':>16} {'residual':>10} {'angle':>9}")
for t in sorted(report.triplets, key=lambda t: -t.sigma):
    i = int(np.argmin(np.abs(S - t.sigma)))
    v = t.v / np.linalg.norm(t.v)
    sin_v = np.linalg.norm(v - svd.V[:, i] * (svd.V[:, i] @ v))
    print(f"{t.sigma:16.10f} {S[i]:16.10f} {t.residual_norm:10.2e} {sin_v:9.1e}")

d, p = report.filter.degree, report.p
k = len(report.history)
print(f"\nconverged: {report.converged} after {k} iterations")
print(f"filter degree d = {d} (selected from the interval width), "
      f"subspace dimension p = {p} (from H_M = {report.trace.value:.2f})")
for w in report.warnings:
    # this instance trips the built-in safety net: the 30-step bound sweep
    # overestimates the smallest singular value, a probe quadratic form
    # leaves [0, n], and the mapping is rebuilt with a zero lower bound
    print(f"note: {w}")
print("matrix-vector products:")
print(f"  bound estimation : {report.mv_bounds}")
print(f"  trace estimates  : {report.mv_trace}")
print(f"  iterations       : {k} x 2*(d+1)*p = {k * 2 * (d + 1) * p}")
print(f"  total            : {report.mv_total}")
