"""
Data tables for the eight standard plots, one builder per figure name.

Each builder returns one or more :class:`Table` objects.  Plotting is left to
the caller; these only fix the parameters and grids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analysis import (
    convergence_series,
    default_grid,
    fit_exponential,
    parameter_sweep,
    slope_sweep,
)
from .asymptotics import integral_I_integrand, pl_pr_asymptotic
from .core import HALF_PI
from .export import CONVERGENCE_HEADER, FIT_HEADER, convergence_rows, fit_rows

__all__ = ["Table", "FIGURES", "figure_tables"]

HADAMARD = math.pi / 4
BALANCED_RHO = 1.0 / math.sqrt(2.0)


@dataclass
class Table:
    name: str
    header: tuple[str, ...]
    rows: list[tuple]

    def records(self) -> list[dict]:
        return [dict(zip(self.header, r)) for r in self.rows]


def _fig1(workers: int) -> list[Table]:
    # integrand of the intermediate integral at theta = pi/4, N = 5; the grid
    # avoids the four points where c(phi) changes branch
    theta, n = HADAMARD, 5
    phi = (np.arange(400) + 0.5) * (2.0 * math.pi / 400)
    vals = integral_I_integrand(phi, theta, n)
    return [Table("integrand", ("phi", "integrand"), [(float(p), float(v)) for p, v in zip(phi, vals)])]


def _fig2(workers: int) -> list[Table]:
    rows = []
    for theta in (HALF_PI * j / 50 for j in range(50)):
        for p in (j / 50 for j in range(51)):
            rows.append((theta, p, pl_pr_asymptotic(theta, math.sqrt(p)).p_left))
    return [Table("pl_grid", ("theta", "p", "p_left"), rows)]


def _convergence(theta: float) -> list[Table]:
    series = convergence_series(theta, BALANCED_RHO, 0.0, 2, 10)
    fit = fit_exponential(series)
    return [
        Table("convergence", CONVERGENCE_HEADER, list(convergence_rows(series))),
        Table("fit", FIT_HEADER, list(fit_rows(fit))),
    ]


def _sweep_over_n(kind: str, fixed: dict, grid, workers: int) -> list[Table]:
    rows = []
    for n in (2, 3, 4):
        for r in parameter_sweep(kind, fixed, grid, n, workers=workers):
            rows.append((n, r.grid_value, r.p_left_sim, r.p_left_asym, r.deviation))
    header = ("n", "grid_value", "p_left_sim", "p_left_asym", "deviation")
    return [Table(f"{kind}_sweep", header, rows)]


def _fig3(workers: int) -> list[Table]:
    return _convergence(HADAMARD)


def _fig4(workers: int) -> list[Table]:
    return _sweep_over_n("rho", {"theta": HADAMARD}, default_grid("rho"), workers)


def _fig5(workers: int) -> list[Table]:
    grid = [2.0 * math.pi * j / 50 for j in range(1, 51)]
    return _sweep_over_n("beta", {"theta": HADAMARD, "rho": BALANCED_RHO}, grid, workers)


def _fig6(workers: int) -> list[Table]:
    return _convergence(0.4)


def _fig7(workers: int) -> list[Table]:
    rows = parameter_sweep("theta", {"rho": BALANCED_RHO}, default_grid("theta"), 2, workers=workers)
    return [Table("theta_sweep", ("n", "grid_value", "p_left_sim", "p_left_asym", "deviation"),
                  [(2, r.grid_value, r.p_left_sim, r.p_left_asym, r.deviation) for r in rows])]


def _fig8(workers: int) -> list[Table]:
    grid = np.round(np.arange(0.10, 1.4001, 0.05), 10)
    points = slope_sweep(grid, BALANCED_RHO, 2, 10, workers=workers)
    rows = [(p.theta, p.nu, p.mu, p.error or "") for p in points]
    return [Table("slopes", ("theta", "nu", "mu", "error"), rows)]


FIGURES = {
    "fig1": _fig1,
    "fig2": _fig2,
    "fig3": _fig3,
    "fig4": _fig4,
    "fig5": _fig5,
    "fig6": _fig6,
    "fig7": _fig7,
    "fig8": _fig8,
}


def figure_tables(name: str, *, workers: int = 1) -> list[Table]:
    """Tables for figure ``name`` (``"fig1"`` .. ``"fig8"``)."""
    try:
        builder = FIGURES[name]
    except KeyError:
        raise ValueError(f"unknown figure {name!r}; choose from {', '.join(FIGURES)}") from None
    return builder(workers)
