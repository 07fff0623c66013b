"""A tour of the command-line interface on a generated test matrix.

Writes a small Matrix Market file and drives the count, filter-dump and
solve subcommands through the same entry point the installed ``chebsvd``
script uses.  A nonzero exit code classifies the failure: 2 not converged,
3 stagnation suspected, 64 usage, 65 bad data.
"""

import json
import os
import tempfile

import numpy as np

from chebsvd import SparseMatrix, write_matrix_market
from chebsvd.cli import main

rng = np.random.default_rng(3)
m, n, nnz = 120, 60, 1800
A = SparseMatrix.from_coo(m, n, rng.integers(0, m, nnz),
                          rng.integers(0, n, nnz), rng.standard_normal(nnz))
s = np.linalg.svd(A.to_dense(), compute_uv=False)
a, b = 0.5 * (s[12] + s[13]), 0.5 * (s[7] + s[8])  # eight values inside

workdir = tempfile.mkdtemp(prefix="chebsvd-demo-")
mtx = os.path.join(workdir, "demo.mtx")
with open(mtx, "w") as fh:
    fh.write(write_matrix_market(A))
interval = f"{a},{b}"
print(f"wrote {mtx}; target interval [{a:.4f}, {b:.4f}]\n")

print("$ chebsvd count demo.mtx --interval", interval)
main(["count", mtx, "--interval", interval])

print("\n$ chebsvd filter-dump demo.mtx --interval ... --degree 6")
main(["filter-dump", mtx, "--interval", interval, "--degree", "6"])

out = os.path.join(workdir, "run.json")
print("\n$ chebsvd solve demo.mtx --interval ... --verify --output run.json")
code = main(["solve", mtx, "--interval", interval, "--tol", "1e-10",
             "--verify", "--output", out])
print(f"exit code: {code}")

with open(out) as fh:
    report = json.load(fh)
print(f"\nreport fields: {sorted(report)}")
print(f"resolved config echo (reproducibility): seed={report['config']['seed']},"
      f" d={report['filter']['degree']}, p={report['p']}")
