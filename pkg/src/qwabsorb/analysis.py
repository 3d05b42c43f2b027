"""
Finite-N convergence studies and parameter sweeps.

``Delta(N) = P_L(asymptotic) - P_L(N)`` is computed by simulation and fitted
as ``|Delta(N)| ~ exp(mu + nu N)`` by ordinary least squares on the log.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .asymptotics import pl_pr_asymptotic
from .core import HALF_PI, initial_amplitudes
from .errors import InsufficientPointsError, QWAbsorbError
from .simulator import TerminationSpec, WalkConfig, simulate_absorption

__all__ = [
    "ConvergenceSeries",
    "FitResult",
    "SlopePoint",
    "SweepRow",
    "ANALYSIS_TERMINATION",
    "convergence_series",
    "fit_exponential",
    "slope_sweep",
    "parameter_sweep",
    "default_grid",
]

# Delta(N) reaches ~1e-13 at N = 10 for large theta, so the survival
# threshold has to sit well below that.
ANALYSIS_TERMINATION = TerminationSpec(eps=1e-16, max_steps=10**7)
MIN_ABS_DELTA = 1e-14


@dataclass
class ConvergenceSeries:
    theta: float
    rho: float
    beta: float
    n_values: list[int]
    p_l_values: list[float]
    deltas: list[float]
    asymptote: float

    @property
    def signs(self) -> list[int]:
        return [int(np.sign(d)) for d in self.deltas]


@dataclass
class FitResult:
    mu: float
    nu: float
    rms_residual: float
    points_used: int
    points_excluded: int = 0

    def to_dict(self) -> dict:
        return {"mu": self.mu, "nu": self.nu, "rms": self.rms_residual, "points_used": self.points_used}


@dataclass
class SlopePoint:
    theta: float
    nu: float | None
    mu: float | None
    error: str | None = None


@dataclass
class SweepRow:
    grid_value: float
    p_left_sim: float
    p_right_sim: float
    p_left_asym: float

    @property
    def deviation(self) -> float:
        return self.p_left_sim - self.p_left_asym


def convergence_series(
    theta: float,
    rho: float,
    beta: float = 0.0,
    n_min: int = 2,
    n_max: int = 10,
    term: TerminationSpec | None = None,
) -> ConvergenceSeries:
    """Simulated P_L(N) for N = n_min..n_max against the large-N value."""
    if not 2 <= n_min <= n_max:
        raise ValueError(f"need 2 <= n_min <= n_max, got {n_min}, {n_max}")
    if not 0.0 < theta < HALF_PI:
        raise ValueError("theta must lie in (0, pi/2)")
    term = ANALYSIS_TERMINATION if term is None else term
    psi = initial_amplitudes(theta, rho, beta)
    asym = pl_pr_asymptotic(theta, rho).p_left
    ns = list(range(n_min, n_max + 1))
    pls = [simulate_absorption(WalkConfig(n, theta, psi), term)[0] for n in ns]
    return ConvergenceSeries(
        theta=theta, rho=rho, beta=beta,
        n_values=ns, p_l_values=pls,
        deltas=[asym - p for p in pls],
        asymptote=asym,
    )


def fit_exponential(series: ConvergenceSeries, *, min_abs: float = MIN_ABS_DELTA) -> FitResult:
    """Least-squares line through (N, ln|Delta(N)|).

    Points with |Delta| < ``min_abs`` are dropped (they sit at the rounding
    floor of the simulation) and counted in ``points_excluded``.
    """
    n = np.asarray(series.n_values, dtype=float)
    d = np.abs(np.asarray(series.deltas, dtype=float))
    keep = d >= min_abs
    if keep.sum() < 3:
        raise InsufficientPointsError(
            f"only {int(keep.sum())} points with |Delta| >= {min_abs:g}; need 3"
        )
    x, y = n[keep], np.log(d[keep])
    nu, mu = np.polyfit(x, y, 1)
    resid = y - (mu + nu * x)
    return FitResult(
        mu=float(mu), nu=float(nu),
        rms_residual=float(np.sqrt(np.mean(resid**2))),
        points_used=int(keep.sum()),
        points_excluded=int((~keep).sum()),
    )


def _slope_point(args) -> SlopePoint:
    theta, rho, beta, n_min, n_max, term = args
    try:
        fit = fit_exponential(convergence_series(theta, rho, beta, n_min, n_max, term))
    except QWAbsorbError as exc:
        return SlopePoint(theta, None, None, str(exc))
    return SlopePoint(theta, fit.nu, fit.mu)


def slope_sweep(
    theta_grid,
    rho: float = 1.0 / math.sqrt(2.0),
    n_min: int = 2,
    n_max: int = 10,
    *,
    beta: float = 0.0,
    term: TerminationSpec | None = None,
    workers: int = 1,
) -> list[SlopePoint]:
    """Fitted decay slope nu for each theta; failures are reported per point."""
    for t in theta_grid:
        if not 0.0 < t < HALF_PI:
            raise ValueError(f"theta grid must lie in (0, pi/2), got {t!r}")
    jobs = [(float(t), rho, beta, n_min, n_max, term) for t in theta_grid]
    return _map(_slope_point, jobs, workers)


def _sweep_row(args) -> SweepRow:
    kind, value, fixed, n, term = args
    params = dict(fixed)
    params[kind] = value
    theta, rho, beta = params["theta"], params["rho"], params["beta"]
    psi = initial_amplitudes(theta, rho, beta)
    pl, pr = simulate_absorption(WalkConfig(n, theta, psi), term)
    return SweepRow(value, pl, pr, pl_pr_asymptotic(theta, rho).p_left)


def default_grid(kind: str) -> list[float]:
    """51-point grids: rho = j/50, beta = 2 pi j/50, theta = (pi/2) j/50 (j < 50)."""
    if kind == "rho":
        return [j / 50 for j in range(51)]
    if kind == "beta":
        return [2.0 * math.pi * j / 50 for j in range(51)]
    if kind == "theta":
        return [HALF_PI * j / 50 for j in range(50)]
    raise ValueError(f"unknown sweep kind {kind!r}")


def parameter_sweep(
    kind: str,
    fixed: dict,
    grid=None,
    n: int = 2,
    *,
    term: TerminationSpec | None = None,
    workers: int = 1,
) -> list[SweepRow]:
    """Simulated P_L across a grid of one parameter, others held at ``fixed``.

    ``kind`` is ``"rho"``, ``"beta"`` or ``"theta"``; ``fixed`` supplies the
    other two of ``theta``, ``rho``, ``beta`` (``beta`` defaults to 0).
    Rows come back in grid order.
    """
    if kind not in ("rho", "beta", "theta"):
        raise ValueError(f"unknown sweep kind {kind!r}")
    grid = default_grid(kind) if grid is None else list(grid)
    fixed = {"beta": 0.0, **fixed}
    missing = {"theta", "rho", "beta"} - {kind} - set(fixed)
    if missing:
        raise ValueError(f"missing fixed parameters: {sorted(missing)}")
    if kind == "theta" and any(not 0.0 <= g < HALF_PI for g in grid):
        raise ValueError("theta grid must lie in [0, pi/2)")
    if kind == "rho" and any(not 0.0 <= g <= 1.0 for g in grid):
        raise ValueError("rho grid must lie in [0, 1]")
    term = TerminationSpec() if term is None else term
    jobs = [(kind, float(g), fixed, n, term) for g in grid]
    return _map(_sweep_row, jobs, workers)


def _map(fn, jobs, workers):
    if workers <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs))
