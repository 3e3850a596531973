"""Closed-form results for unique coverage.

One dimension is solved exactly: the uncovered-length law, the coverage
probability ``p1_exact`` and its maximiser ``r_opt_1d``.  In two dimensions
only bounds and approximations are available; they live here too.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import integrate

from .geometry import ball_volume, check_dimension

R_FOUR_NINTHS = 4.0 / 9.0


class LambertWConvergenceError(ArithmeticError):
    pass


class LambertWResult(NamedTuple):
    w: float
    residual: float
    iterations: int


def lambert_w0(x: float, max_iter: int = 50) -> LambertWResult:
    """Principal branch of the Lambert W function for ``x >= 0``.

    Halley iteration from ``log(1 + x)``.  The update is written for
    ``w - x e^{-w}`` so that large ``x`` never overflows ``e^w``.
    """
    x = float(x)
    if not (x >= 0 and math.isfinite(x)):
        raise ValueError(f"lambert_w0 needs finite x >= 0, got {x!r}")
    if x == 0.0:
        return LambertWResult(0.0, 0.0, 0)
    tol = 1e-10 * max(1.0, x)
    w = math.log1p(x)
    for it in range(1, max_iter + 1):
        g = w - x * math.exp(-w)
        step = g / ((w + 1.0) - (w + 2.0) * g / (2.0 * w + 2.0))
        w -= step
        if abs(step) <= 4 * np.finfo(float).eps * max(1.0, abs(w)):
            residual = abs(w * math.exp(w) - x)
            if residual <= tol:
                return LambertWResult(w, residual, it)
    residual = abs(w * math.exp(w) - x)
    if residual <= tol:
        return LambertWResult(w, residual, max_iter)
    raise LambertWConvergenceError(f"no convergence for x={x!r} after {max_iter} iterations")


# --- one dimension -----------------------------------------------------------


@dataclass(frozen=True)
class Density1D:
    """Law of the uncovered length ``s`` of ``(-r, r)``.

    Point masses at ``s = 0`` and ``s = 2r`` plus a continuous part on the open
    interval between them.
    """

    r: float

    @property
    def mass_at_zero(self) -> float:
        return 1.0 - math.exp(-2 * self.r) * (1 + 2 * self.r)

    @property
    def mass_at_max(self) -> float:
        return math.exp(-4 * self.r)

    def continuous_part(self, s):
        s = np.asarray(s, dtype=float)
        val = (2 + 2 * self.r - s) * np.exp(-(2 * self.r + s))
        return float(val) if val.ndim == 0 else val

    def cdf_interior(self, s):
        """Mass of the continuous part on ``(0, s]``, in closed form."""
        s = np.asarray(s, dtype=float)
        r = self.r
        # antiderivative of (a - s) e^{-s} is (s - a + 1) e^{-s}
        a = 2 + 2 * r
        val = math.exp(-2 * r) * ((s - a + 1) * np.exp(-s) - (1 - a))
        return float(val) if val.ndim == 0 else val

    def total_mass(self) -> float:
        interior, _ = integrate.quad(self.continuous_part, 0.0, 2 * self.r, epsabs=1e-13, epsrel=1e-13)
        return self.mass_at_zero + interior + self.mass_at_max


class GValue(NamedTuple):
    mass: float
    density: float


def g_density(s: float, r: float) -> GValue:
    """Uncovered-length law evaluated at ``s``.

    ``mass`` is the point mass sitting exactly at ``s`` (non-zero only at the
    endpoints 0 and ``2r``); ``density`` is the continuous part, taken as its
    one-sided limit at the endpoints.
    """
    if r <= 0:
        raise ValueError(f"r must be > 0, got {r!r}")
    if not 0.0 <= s <= 2 * r:
        raise ValueError(f"s must lie in [0, 2r] = [0, {2 * r}], got {s!r}")
    law = Density1D(r)
    mass = law.mass_at_zero if s == 0 else law.mass_at_max if s == 2 * r else 0.0
    return GValue(mass, law.continuous_part(s))


def p1_exact(mu, r):
    """Fraction of users uniquely covered on the line.  Broadcasts."""
    mu = np.asarray(mu, dtype=float)
    r = np.asarray(r, dtype=float)
    if np.any(mu < 0) or np.any(r <= 0):
        raise ValueError("need mu >= 0 and r > 0")
    num = mu * np.exp(-2 * r) * (mu + 2 * r + 2 * r * mu) - mu**2 * np.exp(-2 * r * (2 + mu))
    val = num / (1 + mu) ** 2
    return float(val) if val.ndim == 0 else val


def p1_by_quadrature(mu: float, r: float) -> float:
    """Integrate ``1 - exp(-mu s)`` against the uncovered-length law.

    Independent route to :func:`p1_exact`.
    """
    law = Density1D(r)
    interior, _ = integrate.quad(
        lambda s: law.continuous_part(s) * -math.expm1(-mu * s),
        0.0,
        2 * r,
        epsabs=1e-13,
        epsrel=1e-13,
    )
    return interior + law.mass_at_max * -math.expm1(-2 * r * mu)


def r_opt_1d(mu: float) -> float:
    """Range maximising :func:`p1_exact` at base-station intensity ``mu``."""
    if mu < 0:
        raise ValueError(f"mu must be >= 0, got {mu!r}")
    w = lambert_w0(mu * (mu + 2) / math.e).w
    return (1 + w) / (2 * mu + 2)


# --- two dimensions ----------------------------------------------------------


def p2_lower_bound(mu, r, d: int = 2):
    """``e^{-V r^d} (1 - e^{-mu V r^d})``: one station in range, alone.

    For ``d != 2`` this is the natural analogue with the unit-ball volume ``V``.
    """
    check_dimension(d)
    mu = np.asarray(mu, dtype=float)
    r = np.asarray(r, dtype=float)
    if np.any(mu < 0) or np.any(r <= 0):
        raise ValueError("need mu >= 0 and r > 0")
    a = ball_volume(d) * r**d
    val = np.exp(-a) * -np.expm1(-mu * a)
    return float(val) if val.ndim == 0 else val


def p2_asymptote(mu, r):
    """Large-``r`` asymptote ``mu pi r^2 e^{-pi r^2}``.

    Not a probability: for small ``r`` it can exceed 1.
    """
    mu = np.asarray(mu, dtype=float)
    r = np.asarray(r, dtype=float)
    if np.any(mu <= 0) or np.any(r <= 0):
        raise ValueError("need mu > 0 and r > 0")
    a = math.pi * r**2
    val = mu * a * np.exp(-a)
    return float(val) if val.ndim == 0 else val


@dataclass(frozen=True)
class UniformApprox:
    """Flat approximation of the uncovered-fraction law in the plane.

    Only calibrated at ``r = 4/9``; ``extrapolated`` flags any other radius.
    """

    r: float
    v: float
    mass_at_zero: float
    level: float
    mass_at_one: float
    extrapolated: bool


def uniform_approx_density(r: float = R_FOUR_NINTHS) -> UniformApprox:
    if r <= 0:
        raise ValueError(f"r must be > 0, got {r!r}")
    v = math.exp(-math.pi * r * r)
    v4 = v**4
    return UniformApprox(
        r=r,
        v=v,
        mass_at_zero=1 + v4 - 2 * v,
        level=2 * (v - v4),
        mass_at_one=v4,
        extrapolated=not math.isclose(r, R_FOUR_NINTHS, rel_tol=0, abs_tol=1e-3),
    )


def _one_minus_exp_over(c):
    # (1 - e^{-c}) / c with the removable singularity at 0
    c = np.asarray(c, dtype=float)
    small = c < 1e-6
    safe = np.where(small, 1.0, c)
    return np.where(small, 1 - c / 2 + c * c / 6, -np.expm1(-safe) / safe)


def p2_uniform_approx(mu, r: float = R_FOUR_NINTHS):
    """Coverage probability under :func:`uniform_approx_density`."""
    mu = np.asarray(mu, dtype=float)
    if np.any(mu < 0):
        raise ValueError("need mu >= 0")
    ua = uniform_approx_density(r)
    c = mu * math.pi * r * r
    val = ua.level * (1 - _one_minus_exp_over(c)) + ua.mass_at_one * -np.expm1(-c)
    return float(val) if val.ndim == 0 else val


def r_opt_smallmu(mu):
    """Maximiser of :func:`p2_lower_bound` over ``r``; tends to ``pi^{-1/2}``."""
    mu = np.asarray(mu, dtype=float)
    if np.any(mu <= 0):
        raise ValueError("need mu > 0")
    val = np.sqrt(np.log1p(mu) / (mu * math.pi))
    return float(val) if val.ndim == 0 else val
