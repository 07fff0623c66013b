"""Estimating how many singular values fall in an interval, matrix-free.

The filtered projector has one eigenvalue near 1 per wanted singular value
and near 0 elsewhere, so its trace counts them.  Hutchinson probes estimate
that trace from matrix-vector products alone.  This script compares the
estimates (a handful of probe sets) against exact counts from a dense SVD.
"""

import numpy as np

from chebsvd import (SpectrumBounds, build_filter, count_in_interval,
                     dense_full_svd, estimate_trace, SparseMatrix,
                     select_subspace_dimension)

rng = np.random.default_rng(7)
m, n, nnz = 300, 150, 4500
A = SparseMatrix.from_coo(m, n, rng.integers(0, m, nnz),
                          rng.integers(0, n, nnz), rng.standard_normal(nnz))

svd = dense_full_svd(A)
S = svd.S
bounds = SpectrumBounds.exact(float(S[0]), float(S[-1]))
print(f"{m}x{n} sparse matrix, {A.nnz} nonzeros, "
      f"singular values in [{S[-1]:.3f}, {S[0]:.3f}]\n")

print("interval            exact   H_M (M=20, three seeds)   p = ceil(1.1 H)")
for frac_lo, frac_hi in [(0.75, 0.95), (0.45, 0.60), (0.10, 0.30)]:
    a = float(S[-1] + frac_lo * (S[0] - S[-1]))
    b = float(S[-1] + frac_hi * (S[0] - S[-1]))
    exact = count_in_interval(svd, a, b)
    filt = build_filter(bounds, a, b, D=2.0)
    ests = [estimate_trace(A, filt, M=20, seed=s) for s in (1, 2, 3)]
    hs = "  ".join(f"{e.value:6.2f}" for e in ests)
    ps = select_subspace_dimension(ests[0], 1.1)
    print(f"[{a:6.3f}, {b:6.3f}]   {exact:5d}   {hs}          {ps:4d}")

print("\neach estimate costs 2*M*d matrix-vector products and never forms "
      "the projector")
