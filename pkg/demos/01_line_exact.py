"""
Unique coverage on the line
===========================

On the line everything is closed form.  We evaluate the coverage proportion,
find the optimal range with Lambert W, and check both against a direct
simulation on a long circle.
"""

import numpy as np

from unicov import ModelParams, TorusConfig, p1_exact, r_opt_1d, simulate_direct

# Coverage as a function of range, for a few base-station intensities.
rs = np.linspace(0.05, 1.5, 30)
for mu in (0.5, 1.0, 5.0):
    p = p1_exact(mu, rs)
    print(f"mu={mu:<4} best grid r={rs[np.argmax(p)]:.3f}  p={p.max():.4f}")

# The exact optimum.  It starts at 1/2 for sparse stations and shrinks as
# stations get denser.
for mu in (0.0, 0.5, 1.0, 5.0, 10.0):
    r = r_opt_1d(mu)
    print(f"r_opt({mu:g}) = {r:.4f}   p1 there = {p1_exact(mu, r):.4f}")

# A direct simulation should land within a few standard errors.
res = simulate_direct(ModelParams(1.0, 0.5, 1), TorusConfig(1000.0, 1, seed=0), replicates=20)
print(f"\ndirect: {res.p_hat:.4f} +- {res.std_err:.4f}   exact: {p1_exact(1.0, 0.5):.4f}")
