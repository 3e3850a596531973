"""
Coverage in the plane, with its bound and approximations
========================================================

One sample bank per range gives the coverage proportion for every
intensity at once.  Next to each estimate we print the lower bound, the
large-r asymptote and the uniform approximation.
"""

from unicov import sweep_r

sweep = sweep_r([0.05, 1.0, 5.0], [0.2, 4 / 9, 0.7, 1.0, 1.5], d=2, n=10_000, seed=1)
print(sweep.table().to_csv())

# The lower bound is tight for sparse stations and loose for dense ones;
# the asymptote only becomes useful well beyond r = 1.
m = sweep.mu == 0.05
print("mu=0.05: p_hat / bound =", (sweep.p_hat[m] / sweep.bound[m]).round(3))
