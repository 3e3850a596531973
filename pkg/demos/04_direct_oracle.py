"""
Cross-checking the estimator with a direct simulation
=====================================================

The sample-bank estimator relies on a reduction to a single user.  A
brute-force simulation on a torus makes no such reduction, so the two must
agree.
"""

import math

from unicov import ModelParams, TorusConfig, build_bank, p_unique, simulate_direct

for mu, r in [(1.0, 0.5), (5.0, 4 / 9), (0.5, 1.0)]:
    est = p_unique(mu, build_bank(r, 2, n=10_000, seed=2))
    sim = simulate_direct(ModelParams(mu, r, 2), TorusConfig(100.0, 2, seed=3), replicates=10)
    z = (est.p_hat - sim.p_hat) / math.hypot(est.std_err, sim.std_err)
    print(f"mu={mu:<4} r={r:.3f}  bank {est.p_hat:.4f}+-{est.std_err:.4f}  "
          f"torus {sim.p_hat:.4f}+-{sim.std_err:.4f}  z={z:+.2f}")
