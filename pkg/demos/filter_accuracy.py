"""How well the damped polynomial filter tracks its step-function target.

Builds filters for the interval [-0.3, 0.5] taken directly on [-1, 1] and
tabulates the true error against the closed-form bound at a few probe
points, doubling the degree each row.  The error falls like 1/(d+2)^3 and
never exceeds the bound; the filter itself never leaves [0, 1].
"""

import numpy as np

from chebsvd import (StepSpec, evaluate_scalar, pointwise_error_bound,
                     target_step, unit_interval_filter)

lo, hi = -0.3, 0.5
step = StepSpec.from_unit_interval(lo, hi)
probes = [-0.4, 0.1, 0.5]  # outside, inside, and exactly on an end

print(f"filter target: 1 on ({lo}, {hi}), 1/2 at the ends, 0 elsewhere\n")
header = "      d " + "".join(f" | err(x={x:+.1f})     bound   " for x in probes)
print(header)
print("-" * len(header))

d = 10
while d <= 2560:
    filt = unit_interval_filter(lo, hi, d)
    row = f"{d:7d} "
    for x in probes:
        err = abs(evaluate_scalar(filt, x) - target_step(step, x))
        bound = pointwise_error_bound(step, d, np.arccos(x))
        row += f" | {err:10.3e} {bound:10.3e}"
    print(row)
    d *= 2

grid = np.linspace(-1.0, 1.0, 20_001)
vals = evaluate_scalar(unit_interval_filter(lo, hi, 320), grid)
print(f"\nrange of psi_320 over [-1, 1]: [{vals.min():.3e}, {vals.max():.6f}]"
      " (always inside [0, 1])")
