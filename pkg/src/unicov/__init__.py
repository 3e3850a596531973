"""Unique coverage in Poisson Boolean models.

Users form a unit-intensity Poisson process, base stations an independent one
of intensity ``mu``.  A user is uniquely covered when some station within range
``r`` has no other user within ``r``.  This package computes that probability
exactly on the line and by Monte Carlo in two and three dimensions.
"""

from .analytic import (
    Density1D,
    LambertWResult,
    UniformApprox,
    g_density,
    lambert_w0,
    p1_by_quadrature,
    p1_exact,
    p2_asymptote,
    p2_lower_bound,
    p2_uniform_approx,
    r_opt_1d,
    r_opt_smallmu,
    uniform_approx_density,
)
from .direct import DirectResult, TorusConfig, count_unique_assignments, simulate_direct
from .distribution import (
    EmpiricalUncoveredDistribution,
    Histogram,
    histogram,
    sample_distribution,
    sample_distribution_1d,
    vacancy,
)
from .estimator import (
    CoverageEstimate,
    ROptResult,
    SweepResult,
    build_bank,
    build_banks,
    p_unique,
    r_opt_2d,
    sweep_r,
)
from .geometry import (
    DimensionError,
    ModelParams,
    UncoveredSample,
    ball_volume,
    sample_poisson_ball,
    torus_distance,
    uncovered_fraction,
    uncovered_length_1d,
)

__version__ = "0.1.0"
