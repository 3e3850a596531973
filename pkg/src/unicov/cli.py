"""Command-line entry point: ``unicov {p1,fdist,p2,direct,ropt}``.

Every command is deterministic given its flags (the seed defaults to 0) and
writes one CSV or JSON table to ``--out`` or stdout.
"""

from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import analytic
from ._table import Table
from .direct import TorusConfig, simulate_direct
from .distribution import (
    DEFAULT_DARTS,
    DEFAULT_TRIALS,
    EmpiricalUncoveredDistribution,
    histogram,
)
from .estimator import build_bank, build_banks, companions, ropt_from_banks, sweep_from_banks
from .geometry import ModelParams, check_dimension

DEFAULT_ROPT_GRID = "18/90:72/90:1/90"


class UsageError(ValueError):
    pass


def _number(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a number: {text!r}") from None


def parse_values(spec: str) -> list[float]:
    """Parse ``"1,2,5"``, ``"0.05:1:0.05"`` or a mix of both.

    Ranges are ``start:stop:step`` and include ``stop`` when it lies on the
    grid (to within 1e-12).  Numbers may be fractions such as ``4/9``.
    """
    out: list[float] = []
    for item in spec.split(","):
        if not item.strip():
            raise UsageError(f"empty item in {spec!r}")
        parts = item.split(":")
        if len(parts) == 1:
            out.append(float(_number(parts[0])))
            continue
        if len(parts) != 3:
            raise UsageError(f"range must be start:stop:step, got {item!r}")
        start, stop, step = (_number(p) for p in parts)
        if step <= 0 or stop < start:
            raise UsageError(f"bad range {item!r}")
        count = math.floor((stop - start) / step + Fraction(1, 10**12))
        out.extend(float(start + k * step) for k in range(count + 1))
    return out


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None


def _float(text: str) -> float:
    try:
        return float(_number(text))
    except UsageError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _check_params(mus: Sequence[float], rs: Sequence[float], d: int) -> None:
    for mu in mus:
        for r in rs:
            ModelParams(mu, r, d)


def _r_values(args) -> list[float]:
    if args.r is not None and args.r_grid is not None:
        raise UsageError("give either --r or --r-grid, not both")
    spec = args.r if args.r is not None else args.r_grid
    if spec is None:
        raise UsageError("one of --r or --r-grid is required")
    return parse_values(spec)


# --- commands ---------------------------------------------------------------


def cmd_p1(args) -> Table:
    mus = parse_values(args.mu)
    rs = _r_values(args)
    _check_params(mus, rs, 1)
    rows = []
    for mu in mus:
        vals = [analytic.p1_exact(mu, r) for r in rs]
        best = int(np.argmax(vals))
        r_star = analytic.r_opt_1d(mu)
        p_star = analytic.p1_exact(mu, r_star)
        for i, (r, v) in enumerate(zip(rs, vals)):
            rows.append((mu, r, v, r_star, p_star, i == best))
    return Table(("mu", "r", "p1", "r_opt", "p1_at_r_opt", "is_grid_max"), rows)


def cmd_fdist(args) -> Table:
    check_dimension(args.d)
    if args.bins < 1:
        raise UsageError("--bins must be >= 1")
    if args.bank:
        dist = EmpiricalUncoveredDistribution.from_csv(args.bank)
    else:
        ModelParams(0.0, args.r, args.d)
        dist = build_bank(args.r, args.d, args.n, args.darts, args.seed, args.threads)
    if args.save_bank:
        dist.to_csv(args.save_bank)
    hist = histogram(dist, args.bins)
    mean, se = dist.mean()
    if dist.d == 1:
        law = analytic.Density1D(dist.r)
        ref = (law.mass_at_zero, math.nan, law.mass_at_max, "exact_1d")
    elif dist.d == 2:
        ua = analytic.uniform_approx_density(dist.r)
        source = "uniform_approx_extrapolated" if ua.extrapolated else "uniform_approx"
        ref = (ua.mass_at_zero, ua.level, ua.mass_at_one, source)
    else:
        ref = (math.nan, math.nan, math.nan, "")
    rows = []
    for lo, hi, dens in zip(hist.edges[:-1], hist.edges[1:], hist.density):
        rows.append(
            (dist.r, dist.d, dist.n, lo, hi, dens, hist.mass_at_zero, hist.mass_at_one, int(dist.exact),
             mean, se, *ref)
        )
    cols = ("r", "d", "n", "t_lo", "t_hi", "density", "mass_at_zero", "mass_at_one", "mass_at_zero_exact",
            "mean", "mean_se", "ref_mass_at_zero", "ref_level", "ref_mass_at_one", "ref_source")
    return Table(cols, rows)


def cmd_p2(args) -> Table:
    mus = parse_values(args.mu)
    rs = _r_values(args)
    _check_params(mus, rs, args.d)
    banks = build_banks(rs, args.d, args.n, args.darts, args.seed, args.threads)
    return sweep_from_banks(mus, banks).table()


def cmd_direct(args) -> Table:
    params = ModelParams(args.mu, args.r, args.d)
    cfg = TorusConfig(args.side, args.d, args.seed)
    if cfg.side < 10 * params.r:
        raise UsageError(f"--side must be at least 10*r = {10 * params.r:g}")
    res = simulate_direct(params, cfg, args.reps, threads=args.threads)
    bound, asym, approx = companions(params.mu, params.r, params.d)
    cols = ("replicate", "mu", "r", "d", "side", "users_total", "users_covered", "p_hat", "std_err",
            "bound", "asymptote", "uniform_approx")
    rows = []
    for k, (nu, nc) in enumerate(zip(res.replicate_users, res.replicate_covered)):
        p = nc / nu if nu else math.nan
        rows.append((k, params.mu, params.r, params.d, cfg.side, int(nu), int(nc), p, math.nan,
                     math.nan, math.nan, math.nan))
    rows.append(("all", params.mu, params.r, params.d, cfg.side, res.users_total, res.users_uniquely_covered,
                 res.p_hat, res.std_err, bound, asym, approx))
    return Table(cols, rows)


def cmd_ropt(args) -> Table:
    mus = parse_values(args.mu)
    rs = parse_values(args.r_grid)
    if args.d not in (1, 2):
        raise UsageError("ropt supports --d 1 or --d 2")
    _check_params(mus, rs, args.d)
    cols = ("mu", "r_opt", "p_hat", "std_err", "r_opt_reference", "reference", "warning")
    rows = []
    if args.d == 1:
        for mu in mus:
            vals = analytic.p1_exact(mu, np.array(rs))
            i = int(np.argmax(vals))
            rows.append((mu, rs[i], float(vals[i]), 0.0, analytic.r_opt_1d(mu), "r_opt_1d", ""))
        return Table(cols, rows)
    banks = build_banks(rs, 2, args.n, args.darts, args.seed, args.threads)
    for mu in mus:
        res = ropt_from_banks(mu, banks)
        ref = analytic.r_opt_smallmu(mu) if mu > 0 else 1 / math.sqrt(math.pi)
        rows.append((mu, res.r_opt, res.estimate.p_hat, res.estimate.std_err, ref, "r_opt_smallmu",
                     res.warning or ""))
    return Table(cols, rows)


# --- wiring -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="unicov", description="Unique coverage in Poisson Boolean models.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, mc: bool):
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        if mc:
            p.add_argument("--seed", type=_int, default=0)
            p.add_argument("--threads", type=_positive_int, default=1)

    p = sub.add_parser("p1", help="closed-form coverage on the line")
    p.add_argument("--mu", required=True)
    p.add_argument("--r")
    p.add_argument("--r-grid")
    common(p, mc=False)
    p.set_defaults(func=cmd_p1)

    p = sub.add_parser("fdist", help="histogram of the uncovered fraction")
    p.add_argument("--r", type=_float, default=4 / 9)
    p.add_argument("--d", type=_int, default=2)
    p.add_argument("--n", type=_positive_int, default=DEFAULT_TRIALS)
    p.add_argument("--darts", type=_positive_int, default=DEFAULT_DARTS)
    p.add_argument("--bins", type=_int, default=50)
    p.add_argument("--bank", help="reuse a saved sample bank instead of simulating")
    p.add_argument("--save-bank", help="also write the sample bank to this path")
    common(p, mc=True)
    p.set_defaults(func=cmd_fdist)

    p = sub.add_parser("p2", help="Monte Carlo coverage sweep with bound/asymptote/approximation")
    p.add_argument("--mu", required=True)
    p.add_argument("--r")
    p.add_argument("--r-grid")
    p.add_argument("--d", type=_int, default=2)
    p.add_argument("--n", type=_positive_int, default=DEFAULT_TRIALS)
    p.add_argument("--darts", type=_positive_int, default=DEFAULT_DARTS)
    common(p, mc=True)
    p.set_defaults(func=cmd_p2)

    p = sub.add_parser("direct", help="direct simulation on a torus")
    p.add_argument("--mu", type=_float, required=True)
    p.add_argument("--r", type=_float, required=True)
    p.add_argument("--d", type=_int, default=2)
    p.add_argument("--side", type=_float, default=100.0)
    p.add_argument("--reps", type=_positive_int, default=20)
    common(p, mc=True)
    p.set_defaults(func=cmd_direct)

    p = sub.add_parser("ropt", help="optimal range by grid search")
    p.add_argument("--mu", required=True)
    p.add_argument("--r-grid", default=DEFAULT_ROPT_GRID)
    p.add_argument("--d", type=_int, default=2)
    p.add_argument("--n", type=_positive_int, default=DEFAULT_TRIALS)
    p.add_argument("--darts", type=_positive_int, default=DEFAULT_DARTS)
    common(p, mc=True)
    p.set_defaults(func=cmd_ropt)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        table = args.func(args)
        if args.out:
            table.write(args.out, args.format)
        else:
            sys.stdout.write(table.render(args.format))
    except (ValueError, OSError) as exc:
        print(f"unicov {args.command}: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
