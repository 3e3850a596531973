"""
How much of a user's disk is free?
==================================

The uncovered fraction X of a user's disk drives everything else.  At
r = 4/9 its law is close to a uniform density plus two atoms, which is what
the closed-form approximation assumes.
"""

from unicov import histogram, sample_distribution, uniform_approx_density, vacancy

R = 4 / 9
bank = sample_distribution(R, d=2, n=20_000, darts=4096, seed=0)

mean, se = bank.mean()
print(f"E[X] = {mean:.4f} +- {se:.4f}   (vacancy e^(-pi r^2) = {vacancy(R, 2):.4f})")

ua = uniform_approx_density(R)
print(f"atom at 1: sampled {bank.mass_at_one:.4f}  approx {ua.mass_at_one:.4f}")
print(f"atom at 0: sampled {bank.mass_at_zero:.4f}  approx {ua.mass_at_zero:.4f}")

# A coarse histogram of the interior.  The approximation puts a flat level
# of `ua.level` on (0, 1).
h = histogram(bank, bins=10)
print(f"\n{'bin':>11}  density  (flat level {ua.level:.3f})")
for lo, hi, dens in zip(h.edges[:-1], h.edges[1:], h.density):
    print(f"[{lo:.1f}, {hi:.1f})  {dens:7.3f}  {'#' * int(round(20 * dens))}")

# Banks can be saved and reused without resampling.
bank.to_csv("bank_r049.csv")
print("\nsaved the sample bank to bank_r049.csv")
