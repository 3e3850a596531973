"""Unique-coverage probability from a sample bank of uncovered fractions.

Given the uncovered fraction ``X`` of a user's ball, a base station lands in
the uncovered part with probability ``1 - exp(-mu V r^d X)``; averaging over
the bank gives ``p^d(mu, r)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import analytic
from ._table import Table
from .distribution import (
    DEFAULT_DARTS,
    DEFAULT_TRIALS,
    EmpiricalUncoveredDistribution,
    sample_distribution,
    sample_distribution_1d,
)
from .geometry import ModelParams, ball_volume

ROPT_GRID_MAX_STEP = 1.0 / 90.0
ROPT_GRID_SPAN = (0.2, 0.8)


@dataclass(frozen=True)
class CoverageEstimate:
    p_hat: float
    std_err: float
    n: int
    params: ModelParams


def _values(mu: float, dist: EmpiricalUncoveredDistribution) -> np.ndarray:
    c = mu * ball_volume(dist.d) * dist.r**dist.d
    return -np.expm1(-c * dist.t)


def p_unique(mu: float, dist: EmpiricalUncoveredDistribution) -> CoverageEstimate:
    """Monte Carlo mean of ``1 - exp(-mu V r^d X)`` over the bank."""
    if mu < 0:
        raise ValueError(f"mu must be >= 0, got {mu!r}")
    if dist.n == 0:
        raise ValueError("empty sample bank")
    vals = _values(mu, dist)
    p = float(vals.mean())
    se = float(vals.std(ddof=1) / math.sqrt(dist.n)) if dist.n > 1 else 0.0
    return CoverageEstimate(p, se, dist.n, ModelParams(mu, dist.r, dist.d))


def p_unique_slope(dist: EmpiricalUncoveredDistribution) -> CoverageEstimate:
    """``d p / d mu`` at ``mu = 0``, i.e. ``V r^d E[X]``.

    Used as the objective for the optimal range in the ``mu -> 0`` limit, where
    ``p`` itself vanishes identically.
    """
    vals = ball_volume(dist.d) * dist.r**dist.d * dist.t
    se = float(vals.std(ddof=1) / math.sqrt(dist.n)) if dist.n > 1 else 0.0
    return CoverageEstimate(float(vals.mean()), se, dist.n, ModelParams(0.0, dist.r, dist.d))


def build_bank(
    r: float,
    d: int = 2,
    n: int = DEFAULT_TRIALS,
    darts: int = DEFAULT_DARTS,
    seed: int = 0,
    threads: int = 1,
) -> EmpiricalUncoveredDistribution:
    if d == 1:
        return sample_distribution_1d(r, n, seed)
    return sample_distribution(r, d, n, darts, seed, threads)


def build_banks(r_values: Sequence[float], d: int = 2, n: int = DEFAULT_TRIALS, darts: int = DEFAULT_DARTS,
                seed: int = 0, threads: int = 1) -> list[EmpiricalUncoveredDistribution]:
    """One bank per radius, all driven by the same seed."""
    return [build_bank(float(r), d, n, darts, seed, threads) for r in r_values]


@dataclass
class SweepResult:
    """Estimates over a ``(mu, r)`` grid with the closed-form companions.

    Companion columns are NaN where a formula does not apply (the asymptote
    outside 2-D or at ``mu = 0``).
    """

    mu: np.ndarray
    r: np.ndarray
    estimates: list[CoverageEstimate]
    bound: np.ndarray
    asymptote: np.ndarray
    approximation: np.ndarray
    d: int = 2

    COLUMNS = ("mu", "r", "p_hat", "std_err", "bound", "asymptote", "uniform_approx")

    def __post_init__(self) -> None:
        if not (len(self.mu) == len(self.r) == len(self.estimates)):
            raise ValueError("axis and estimate lists must have equal length")

    @property
    def p_hat(self) -> np.ndarray:
        return np.array([e.p_hat for e in self.estimates])

    @property
    def std_err(self) -> np.ndarray:
        return np.array([e.std_err for e in self.estimates])

    def table(self) -> Table:
        rows = [
            (m, r, e.p_hat, e.std_err, b, a, u)
            for m, r, e, b, a, u in zip(self.mu, self.r, self.estimates, self.bound, self.asymptote,
                                        self.approximation)
        ]
        return Table(self.COLUMNS, rows)


def companions(mu: float, r: float, d: int) -> tuple[float, float, float]:
    bound = analytic.p2_lower_bound(mu, r, d)
    if d == 2:
        asym = analytic.p2_asymptote(mu, r) if mu > 0 else math.nan
        approx = analytic.p2_uniform_approx(mu, r)
    else:
        asym = approx = math.nan
    return bound, asym, approx


def sweep_from_banks(mus: Sequence[float], banks: Sequence[EmpiricalUncoveredDistribution]) -> SweepResult:
    """Evaluate every ``mu`` against every bank (row order: r outer, mu inner)."""
    if not banks:
        raise ValueError("need at least one bank")
    d = banks[0].d
    mu_col, r_col, est, bnd, asy, app = [], [], [], [], [], []
    for bank in banks:
        for mu in mus:
            mu_col.append(float(mu))
            r_col.append(bank.r)
            est.append(p_unique(float(mu), bank))
            b, a, u = companions(float(mu), bank.r, d)
            bnd.append(b)
            asy.append(a)
            app.append(u)
    return SweepResult(np.array(mu_col), np.array(r_col), est, np.array(bnd), np.array(asy), np.array(app), d)


def sweep_r(
    mu: float | Sequence[float],
    r_values: Sequence[float],
    d: int = 2,
    n: int = DEFAULT_TRIALS,
    darts: int = DEFAULT_DARTS,
    seed: int = 0,
    threads: int = 1,
) -> SweepResult:
    """Estimate ``p^d(mu, r)`` over ``r_values`` (one bank per ``r``).

    ``mu`` may be a list; each bank is then reused for every intensity.
    """
    if len(r_values) == 0:
        raise ValueError("r_values must be non-empty")
    if any(r <= 0 for r in r_values):
        raise ValueError("r_values must be positive")
    mus = [mu] if np.ndim(mu) == 0 else list(mu)
    return sweep_from_banks(mus, build_banks(r_values, d, n, darts, seed, threads))


class ROptResult(NamedTuple):
    r_opt: float
    estimate: CoverageEstimate
    warning: str | None = None


def check_ropt_grid(r_grid: Sequence[float]) -> str | None:
    g = np.sort(np.asarray(r_grid, dtype=float))
    problems = []
    if g[0] > ROPT_GRID_SPAN[0] or g[-1] < ROPT_GRID_SPAN[1]:
        problems.append(f"grid runs {g[0]:.4g} to {g[-1]:.4g} but must span {ROPT_GRID_SPAN[0]} to {ROPT_GRID_SPAN[1]}")
    if len(g) > 1 and np.max(np.diff(g)) > ROPT_GRID_MAX_STEP + 1e-12:
        problems.append(f"grid step {np.max(np.diff(g)):.4g} exceeds 1/90")
    if len(g) == 1:
        problems.append("grid has a single point")
    return "; ".join(problems) or None


def ropt_from_banks(mu: float, banks: Sequence[EmpiricalUncoveredDistribution]) -> ROptResult:
    """Grid argmax of the estimate; ties go to the smaller ``r``.

    At ``mu = 0`` every estimate is 0, so the slope at ``mu = 0`` is maximised
    instead (the small-intensity limit of the optimum).
    """
    order = sorted(range(len(banks)), key=lambda i: banks[i].r)
    best = None
    for i in order:
        est = p_unique(mu, banks[i]) if mu > 0 else p_unique_slope(banks[i])
        if best is None or est.p_hat > best[1].p_hat:
            best = (banks[i].r, est)
    r_best, est = best
    if mu == 0:
        est = p_unique(0.0, [b for b in banks if b.r == r_best][0])
    warning = check_ropt_grid([b.r for b in banks])
    return ROptResult(r_best, est, warning)


def r_opt_2d(
    mu: float,
    r_grid: Sequence[float],
    n: int = DEFAULT_TRIALS,
    darts: int = DEFAULT_DARTS,
    seed: int = 0,
    threads: int = 1,
    banks: Sequence[EmpiricalUncoveredDistribution] | None = None,
) -> ROptResult:
    """Optimal range in the plane by grid search with common random numbers.

    Pass prebuilt ``banks`` (one per grid radius) to share them across
    several intensities.
    """
    if mu < 0:
        raise ValueError(f"mu must be >= 0, got {mu!r}")
    if banks is None:
        banks = build_banks(r_grid, 2, n, darts, seed, threads)
    result = ropt_from_banks(mu, banks)
    if result.warning:
        warnings.warn(f"r_opt_2d: {result.warning}", RuntimeWarning, stacklevel=2)
    return result
