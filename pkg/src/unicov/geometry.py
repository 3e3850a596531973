"""Point-process sampling and uncovered-fraction geometry.

Points are stored as ``(n, d)`` float arrays; a single point is any length-``d``
sequence.  Users are a unit-intensity Poisson process, so all lengths are in
units where one user occupies unit volume on average.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numba as nb
import numpy as np

DIMENSIONS = (1, 2, 3)

Point = Sequence[float]


class DimensionError(ValueError):
    """Raised for an unsupported or mismatched dimension."""


def check_dimension(d: int, allowed: Sequence[int] = DIMENSIONS) -> int:
    if d not in allowed:
        raise DimensionError(f"dimension must be one of {tuple(allowed)}, got {d!r}")
    return int(d)


def ball_volume(d: int) -> float:
    """Volume of the unit ball in ``d`` dimensions (2, pi, 4*pi/3)."""
    check_dimension(d)
    return math.pi ** (d / 2) / math.gamma(d / 2 + 1)


@dataclass(frozen=True)
class ModelParams:
    """Base-station intensity ``mu``, range ``r`` and dimension ``d``."""

    mu: float
    r: float
    d: int = 2

    def __post_init__(self) -> None:
        if not (self.mu >= 0 and math.isfinite(self.mu)):
            raise ValueError(f"mu must be finite and >= 0, got {self.mu!r}")
        if not (self.r > 0 and math.isfinite(self.r)):
            raise ValueError(f"r must be finite and > 0, got {self.r!r}")
        check_dimension(self.d)


@dataclass(frozen=True)
class UncoveredSample:
    """One realisation of the uncovered fraction of the reference ball.

    ``exact_one`` is set when no user lies within ``2r`` of the origin, so the
    value 1 is exact.  ``all_darts_covered`` means every dart was covered; the
    reported 0 is then only as good as the dart resolution.
    """

    t: float
    exact_one: bool = False
    all_darts_covered: bool = False

    def __post_init__(self) -> None:
        if not 0.0 <= self.t <= 1.0:
            raise ValueError(f"t must lie in [0, 1], got {self.t!r}")
        if self.exact_one and self.t != 1.0:
            raise ValueError("exact_one requires t == 1")
        if self.all_darts_covered and self.t != 0.0:
            raise ValueError("all_darts_covered requires t == 0")


def as_points(points, d: int) -> np.ndarray:
    arr = np.asarray(points, dtype=float)
    if arr.size == 0:
        return np.empty((0, d))
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1) if d == 1 else arr.reshape(1, -1)
    if arr.ndim != 2 or arr.shape[1] != d:
        raise DimensionError(f"expected points of dimension {d}, got shape {arr.shape}")
    return arr


def sample_uniform_ball(rng: np.random.Generator, count: int, radius: float, d: int) -> np.ndarray:
    """``count`` i.i.d. uniform points in the centred ball, by cube rejection."""
    out = np.empty((count, d))
    filled = 0
    accept = ball_volume(d) / 2.0**d
    r2 = radius * radius
    while filled < count:
        need = count - filled
        batch = int(need / accept * 1.1) + 16
        cand = radius * (2.0 * rng.random((batch, d)) - 1.0)
        cand = cand[np.einsum("ij,ij->i", cand, cand) < r2][:need]
        out[filled : filled + len(cand)] = cand
        filled += len(cand)
    return out


def sample_poisson_ball(intensity: float, radius: float, d: int, rng: np.random.Generator) -> np.ndarray:
    """Homogeneous Poisson process of ``intensity`` in the centred ball of ``radius``."""
    check_dimension(d)
    if intensity < 0:
        raise ValueError(f"intensity must be >= 0, got {intensity!r}")
    if radius <= 0:
        raise ValueError(f"radius must be > 0, got {radius!r}")
    count = rng.poisson(intensity * ball_volume(d) * radius**d)
    return sample_uniform_ball(rng, int(count), radius, d)


def sample_poisson_box(intensity: float, side: float, d: int, rng: np.random.Generator) -> np.ndarray:
    """Homogeneous Poisson process of ``intensity`` in ``[0, side)^d``."""
    count = rng.poisson(intensity * side**d)
    return rng.uniform(0.0, side, size=(int(count), d))


# Dart kernels: map cube candidates ``unit`` (uniform on [0,1)^d) into
# [-r, r)^d, keep the first ``need`` inside the ball, and count those outside
# every user ball.  Return (accepted, uncovered).  Users should be sorted by
# distance to the origin so the common case breaks out early.


@nb.njit(cache=True, nogil=True)
def _dart_pass_2d(unit, users, r, need):
    r2 = r * r
    ux = users[:, 0].copy()
    uy = users[:, 1].copy()
    k = ux.shape[0]
    accepted = 0
    uncovered = 0
    for i in range(unit.shape[0]):
        if accepted == need:
            break
        x = r * (2.0 * unit[i, 0] - 1.0)
        y = r * (2.0 * unit[i, 1] - 1.0)
        if x * x + y * y >= r2:
            continue
        accepted += 1
        covered = False
        for j in range(k):
            dx = x - ux[j]
            dy = y - uy[j]
            if dx * dx + dy * dy < r2:
                covered = True
                break
        if not covered:
            uncovered += 1
    return accepted, uncovered


@nb.njit(cache=True, nogil=True)
def _dart_pass_3d(unit, users, r, need):
    r2 = r * r
    ux = users[:, 0].copy()
    uy = users[:, 1].copy()
    uz = users[:, 2].copy()
    k = ux.shape[0]
    accepted = 0
    uncovered = 0
    for i in range(unit.shape[0]):
        if accepted == need:
            break
        x = r * (2.0 * unit[i, 0] - 1.0)
        y = r * (2.0 * unit[i, 1] - 1.0)
        z = r * (2.0 * unit[i, 2] - 1.0)
        if x * x + y * y + z * z >= r2:
            continue
        accepted += 1
        covered = False
        for j in range(k):
            dx = x - ux[j]
            dy = y - uy[j]
            dz = z - uz[j]
            if dx * dx + dy * dy + dz * dz < r2:
                covered = True
                break
        if not covered:
            uncovered += 1
    return accepted, uncovered


def uncovered_fraction(users, r: float, d: int, darts: int, rng: np.random.Generator) -> UncoveredSample:
    """Fraction of ``D(O, r)`` outside every ball ``D(u, r)``.

    Users farther than ``2r`` from the origin are ignored (they cannot reach
    the reference ball).  If none remain the answer is exactly 1; otherwise it
    is the uncovered fraction of ``darts`` uniform points in ``D(O, r)``.
    """
    check_dimension(d, (2, 3))
    if darts < 1:
        raise ValueError(f"darts must be >= 1, got {darts!r}")
    if r <= 0:
        raise ValueError(f"r must be > 0, got {r!r}")
    pts = as_points(users, d)
    norm2 = np.einsum("ij,ij->i", pts, pts)
    keep = norm2 < 4.0 * r * r
    if not keep.any():
        return UncoveredSample(1.0, exact_one=True)
    near = pts[keep][np.argsort(norm2[keep], kind="stable")]
    kernel = _dart_pass_2d if d == 2 else _dart_pass_3d
    accept = ball_volume(d) / 2.0**d
    done = n_unc = 0
    while done < darts:
        need = darts - done
        unit = rng.random((int(need / accept * 1.1) + 16, d))
        got, unc = kernel(unit, near, r, need)
        done += got
        n_unc += unc
    return UncoveredSample(n_unc / darts, all_darts_covered=n_unc == 0)


def uncovered_length_1d(x, y, r: float):
    """Uncovered length of ``(-r, r)`` given nearest users at ``-x`` and ``y``.

    Works elementwise on arrays.  Equivalent to the five-case table
    ``0 / x+y-2r / x / y / 2r`` split on ``x+y`` and on ``x, y`` versus ``2r``.
    """
    if r <= 0:
        raise ValueError(f"r must be > 0, got {r!r}")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(x < 0) or np.any(y < 0):
        raise ValueError("distances to the nearest users must be >= 0")
    two_r = 2.0 * r
    u = np.maximum(np.minimum(x, two_r) + np.minimum(y, two_r) - two_r, 0.0)
    return float(u) if u.ndim == 0 else u


def torus_distance(a: Point, b: Point, side: float) -> float:
    """Euclidean distance on the flat torus ``[0, side)^d``."""
    if side <= 0:
        raise ValueError(f"side must be > 0, got {side!r}")
    delta = np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float))
    if np.shape(delta) == ():
        delta = delta.reshape(1)
    delta = np.minimum(delta, side - delta)
    return float(math.sqrt(float(np.dot(delta, delta))))
