"""
The optimal range in the plane
==============================

Grid search over r with common random numbers: every radius reuses the same
random streams, so differences between neighbouring radii are not drowned
by independent noise.  The banks are built once and shared by all
intensities.
"""

import numpy as np

from unicov import build_banks, r_opt_2d, r_opt_smallmu

grid = [k / 90 for k in range(18, 73)]
banks = build_banks(grid, 2, n=4000, seed=4)

ropt = {}
for mu in range(0, 11):
    res = r_opt_2d(float(mu), grid, banks=banks)
    ropt[mu] = res.r_opt
    print(f"mu={mu:>2}  r_opt={res.r_opt:.3f}  p={res.estimate.p_hat:.4f}  "
          f"(small-mu formula {r_opt_smallmu(max(mu, 1e-9)):.3f})")

# With only 4000 trials per radius the argmax wanders by a few grid steps;
# the acceptance tests use 1e5.
print(f"\nmean over mu = 0..10: {np.mean(list(ropt.values())):.3f}   (4/9 = {4 / 9:.3f})")
