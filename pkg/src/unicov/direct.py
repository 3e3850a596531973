"""End-to-end simulation of the two Poisson processes on a torus.

Counts uniquely covered users straight from the definition: user ``u`` counts
when some station ``b`` has ``u`` as its only user within distance ``r``.
Nothing here relies on the uncovered-fraction representation, so it serves as
an oracle for :mod:`unicov.estimator`.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from . import _rng
from .geometry import ModelParams, as_points, check_dimension, sample_poisson_box, torus_distance


@dataclass(frozen=True)
class TorusConfig:
    side: float
    d: int = 2
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.side > 0:
            raise ValueError(f"side must be > 0, got {self.side!r}")
        check_dimension(self.d)


@dataclass(frozen=True)
class DirectResult:
    users_total: int
    users_uniquely_covered: int
    p_hat: float
    std_err: float
    replicate_users: np.ndarray = field(repr=False)
    replicate_covered: np.ndarray = field(repr=False)

    @property
    def replicates(self) -> int:
        return len(self.replicate_users)


def count_unique_assignments(users, stations, r: float, side: float | None = None, method: str = "tree") -> int:
    """Number of users that have a station whose only user in range is them.

    ``side`` switches from the Euclidean metric to the torus ``[0, side)^d``.
    ``method="naive"`` is the plain triple loop, kept for cross-checking.
    """
    users = np.asarray(users, dtype=float)
    stations = np.asarray(stations, dtype=float)
    if users.size == 0 or stations.size == 0:
        return 0
    d = users.shape[1] if users.ndim == 2 else 1
    users = as_points(users, d)
    stations = as_points(stations, d)
    if method == "naive":
        return _count_naive(users, stations, r, side)
    if method != "tree":
        raise ValueError(f"unknown method {method!r}")
    if side is not None:
        if r >= side / 2:
            raise ValueError("torus metric needs r < side/2")
        users = np.mod(users, side)
        stations = np.mod(stations, side)
    tree = cKDTree(users, boxsize=side)
    # ball queries are closed; shrink by one ulp to get the strict "< r"
    r_open = np.nextafter(r, 0.0)
    counts = tree.query_ball_point(stations, r_open, return_length=True)
    lonely = stations[counts == 1]
    if len(lonely) == 0:
        return 0
    _, idx = tree.query(lonely, k=1)
    return int(np.unique(idx).size)


def _count_naive(users, stations, r, side) -> int:
    def dist(a, b):
        return torus_distance(a, b, side) if side is not None else float(np.linalg.norm(a - b))

    covered = 0
    for i, u in enumerate(users):
        for b in stations:
            if dist(b, u) >= r:
                continue
            if all(dist(b, w) >= r for j, w in enumerate(users) if j != i):
                covered += 1
                break
    return covered


def _replicate(params: ModelParams, cfg: TorusConfig, k: int) -> tuple[int, int]:
    rng = _rng.trial_rng(cfg.seed, k, stream=_rng.DIRECT)
    users = sample_poisson_box(1.0, cfg.side, cfg.d, rng)
    stations = sample_poisson_box(params.mu, cfg.side, cfg.d, rng)
    return len(users), count_unique_assignments(users, stations, params.r, cfg.side)


def simulate_direct(params: ModelParams, cfg: TorusConfig, replicates: int = 20, threads: int = 1) -> DirectResult:
    """Pooled fraction of uniquely covered users over independent replicates.

    ``std_err`` is the ratio-estimator standard error across replicates.
    Replicates that happen to contain no users add nothing and are not
    counted towards the degrees of freedom.
    """
    if params.d != cfg.d:
        raise ValueError(f"dimension mismatch: params.d={params.d}, cfg.d={cfg.d}")
    if cfg.side < 10 * params.r:
        raise ValueError(f"torus side {cfg.side} must be at least 10 r = {10 * params.r}")
    if replicates < 1:
        raise ValueError(f"replicates must be >= 1, got {replicates!r}")
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda k: _replicate(params, cfg, k), range(replicates)))
    else:
        results = [_replicate(params, cfg, k) for k in range(replicates)]
    n_users = np.array([a for a, _ in results], dtype=np.int64)
    n_cov = np.array([b for _, b in results], dtype=np.int64)
    total = int(n_users.sum())
    covered = int(n_cov.sum())
    p = covered / total if total else 0.0
    live = n_users > 0
    m = int(live.sum())
    if m > 1:
        resid = n_cov[live] - p * n_users[live]
        se = math.sqrt(float(np.sum(resid**2)) / (m * (m - 1))) / float(n_users[live].mean())
    else:
        se = 0.0
    return DirectResult(total, covered, p, se, n_users, n_cov)
