"""Sample banks for the uncovered fraction of the reference ball.

A bank stores the raw per-trial values so one simulation can be reused for
any number of base-station intensities.
"""

from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from . import _rng
from .geometry import (
    DimensionError,
    UncoveredSample,
    ball_volume,
    check_dimension,
    sample_poisson_ball,
    uncovered_fraction,
    uncovered_length_1d,
)

DEFAULT_TRIALS = 100_000
DEFAULT_DARTS = 4096
CHUNK_1D = 1 << 16


@dataclass(frozen=True, eq=False)
class EmpiricalUncoveredDistribution:
    """Monte Carlo sample bank of the uncovered fraction ``X_r``.

    ``t``, ``exact_one`` and ``all_darts_covered`` are parallel arrays with one
    entry per trial.  ``darts_per_trial`` is 0 for the exact 1-D sampler.
    """

    r: float
    d: int
    seed: int
    darts_per_trial: int
    t: np.ndarray = field(repr=False)
    exact_one: np.ndarray = field(repr=False)
    all_darts_covered: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        for name in ("t", "exact_one", "all_darts_covered"):
            arr = getattr(self, name)
            arr.setflags(write=False)
        if not (len(self.t) == len(self.exact_one) == len(self.all_darts_covered)):
            raise ValueError("sample arrays must have equal length")
        if len(self.t) and (self.t.min() < 0 or self.t.max() > 1):
            raise ValueError("sample values must lie in [0, 1]")

    @property
    def n(self) -> int:
        return len(self.t)

    @property
    def exact(self) -> bool:
        """Whether the zero mass is exact (1-D) rather than dart-limited."""
        return self.darts_per_trial == 0

    @property
    def mass_at_one(self) -> float:
        return float(self.exact_one.mean()) if self.n else math.nan

    @property
    def mass_at_zero(self) -> float:
        return float(self.all_darts_covered.mean()) if self.n else math.nan

    @property
    def interior_fraction(self) -> float:
        return 1.0 - self.mass_at_one - self.mass_at_zero

    def mean(self) -> tuple[float, float]:
        """Sample mean of ``t`` and its standard error."""
        return _mean_se(self.t)

    def samples(self) -> Iterator[UncoveredSample]:
        for t, one, zero in zip(self.t, self.exact_one, self.all_darts_covered):
            yield UncoveredSample(float(t), bool(one), bool(zero))

    def to_csv(self, path: str | os.PathLike) -> None:
        """Write the bank: one ``# key=value`` metadata line, a header, rows."""
        buf = io.StringIO()
        buf.write(f"# r={self.r!r},d={self.d},n={self.n},seed={self.seed},darts={self.darts_per_trial}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "exact_one", "all_darts_covered"])
        for t, one, zero in zip(self.t.tolist(), self.exact_one.tolist(), self.all_darts_covered.tolist()):
            w.writerow([repr(t), int(one), int(zero)])
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())

    @classmethod
    def from_csv(cls, path: str | os.PathLike) -> "EmpiricalUncoveredDistribution":
        with open(path, encoding="utf-8", newline="") as fh:
            meta_line = fh.readline()
            if not meta_line.startswith("#"):
                raise ValueError(f"{path}: missing bank metadata line")
            meta = dict(item.split("=", 1) for item in meta_line[1:].strip().split(","))
            rows = list(csv.DictReader(fh))
        n = int(meta["n"])
        if len(rows) != n:
            raise ValueError(f"{path}: header says n={n} but found {len(rows)} rows")
        return cls(
            r=float(meta["r"]),
            d=int(meta["d"]),
            seed=int(meta["seed"]),
            darts_per_trial=int(meta["darts"]),
            t=np.array([float(row["t"]) for row in rows]),
            exact_one=np.array([row["exact_one"] == "1" for row in rows], dtype=bool),
            all_darts_covered=np.array([row["all_darts_covered"] == "1" for row in rows], dtype=bool),
        )


def _mean_se(x: np.ndarray) -> tuple[float, float]:
    n = len(x)
    if n == 0:
        raise ValueError("empty sample")
    m = float(x.mean())
    se = float(x.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return m, se


def _run_trials(r: float, d: int, darts: int, seed: int, lo: int, hi: int, out: np.ndarray) -> None:
    for i in range(lo, hi):
        rng = _rng.trial_rng(seed, i)
        users = sample_poisson_ball(1.0, 2.0 * r, d, rng)
        s = uncovered_fraction(users, r, d, darts, rng)
        out[i] = (s.t, s.exact_one, s.all_darts_covered)


def sample_distribution(
    r: float,
    d: int = 2,
    n: int = DEFAULT_TRIALS,
    darts: int = DEFAULT_DARTS,
    seed: int = 0,
    threads: int = 1,
) -> EmpiricalUncoveredDistribution:
    """Simulate ``n`` independent uncovered fractions of ``D(O, r)``.

    Trial ``i`` draws its users (unit intensity, ball of radius ``2r``) and its
    darts from the stream ``(seed, i)``, so the bank does not depend on
    ``threads`` and banks at different ``r`` share random numbers trial by trial.
    """
    if d == 1:
        raise DimensionError("use sample_distribution_1d for d=1 (exact sampler)")
    check_dimension(d, (2, 3))
    if r <= 0:
        raise ValueError(f"r must be > 0, got {r!r}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n!r}")
    if darts < 1:
        raise ValueError(f"darts must be >= 1, got {darts!r}")
    out = np.zeros(n, dtype=[("t", float), ("one", bool), ("zero", bool)])
    threads = max(1, int(threads))
    if threads == 1:
        _run_trials(r, d, darts, seed, 0, n, out)
    else:
        size = max(1, -(-n // (threads * 8)))
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(_run_trials, r, d, darts, seed, lo, hi, out) for lo, hi in _rng.chunks(n, size)]
            for f in futures:
                f.result()
    return EmpiricalUncoveredDistribution(
        r=float(r),
        d=d,
        seed=int(seed),
        darts_per_trial=int(darts),
        t=out["t"].copy(),
        exact_one=out["one"].copy(),
        all_darts_covered=out["zero"].copy(),
    )


def sample_distribution_1d(r: float, n: int = DEFAULT_TRIALS, seed: int = 0) -> EmpiricalUncoveredDistribution:
    """Exact sampler on the line.

    The distances to the nearest users on either side are independent unit
    exponentials, and they alone fix the uncovered length.  Drawn in fixed
    chunks of ``2**16`` trials, each from its own stream.
    """
    if r <= 0:
        raise ValueError(f"r must be > 0, got {r!r}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n!r}")
    two_r = 2.0 * r
    parts = []
    for k, (lo, hi) in enumerate(_rng.chunks(n, CHUNK_1D)):
        rng = _rng.trial_rng(seed, k, stream=_rng.EXACT_1D)
        xy = rng.exponential(1.0, size=(hi - lo, 2))
        parts.append(uncovered_length_1d(xy[:, 0], xy[:, 1], r))
    u = np.concatenate(parts)
    return EmpiricalUncoveredDistribution(
        r=float(r),
        d=1,
        seed=int(seed),
        darts_per_trial=0,
        t=u / two_r,
        exact_one=u == two_r,
        all_darts_covered=u == 0.0,
    )


@dataclass(frozen=True)
class Histogram:
    """Binned interior density plus the two point masses.

    ``density`` integrates (times the bin width) to the interior fraction, so
    ``mass_at_zero + sum(density * width) + mass_at_one == 1``.
    """

    edges: np.ndarray
    density: np.ndarray
    mass_at_zero: float
    mass_at_one: float

    @property
    def width(self) -> float:
        return float(self.edges[1] - self.edges[0])

    def total(self) -> float:
        return self.mass_at_zero + float(self.density.sum()) * self.width + self.mass_at_one


def histogram(dist: EmpiricalUncoveredDistribution, bins: int = 50) -> Histogram:
    if bins < 1:
        raise ValueError(f"bins must be >= 1, got {bins!r}")
    if dist.n == 0:
        raise ValueError("cannot histogram an empty distribution")
    interior = dist.t[~(dist.exact_one | dist.all_darts_covered)]
    edges = np.linspace(0.0, 1.0, bins + 1)
    counts, _ = np.histogram(interior, bins=edges)
    width = 1.0 / bins
    return Histogram(
        edges=edges,
        density=counts / (dist.n * width),
        mass_at_zero=dist.mass_at_zero,
        mass_at_one=dist.mass_at_one,
    )


def vacancy(r: float, d: int) -> float:
    """Probability that a fixed point is uncovered: ``exp(-V_d r^d)``."""
    return math.exp(-ball_volume(d) * r**d)
