"""CSV/JSON rendering with locale-free, shortest round-trip float formatting."""

from __future__ import annotations

import csv
import io
import json
import math

from .analysis import ConvergenceSeries, FitResult, SweepRow
from .simulator import AbsorptionTrace

TRACE_HEADER = ("t", "p_left_cum", "p_right_cum", "survival")
CONVERGENCE_HEADER = ("n", "p_left", "delta", "sign")
FIT_HEADER = ("mu", "nu", "rms", "points_used")
SWEEP_HEADER = ("grid_value", "p_left_sim", "p_left_asym", "deviation")


def fmt(value) -> str:
    """repr() for floats (shortest round-trip), str() for everything else."""
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value) if math.isfinite(value) else str(value)
    return str(value)


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def json_text(doc) -> str:
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def trace_rows(trace: AbsorptionTrace):
    for t, (pl, pr, s) in enumerate(zip(trace.pl, trace.pr, trace.survival)):
        yield t, float(pl), float(pr), float(s)


def convergence_rows(series: ConvergenceSeries):
    for n, p, d, s in zip(series.n_values, series.p_l_values, series.deltas, series.signs):
        yield n, float(p), float(d), s


def fit_rows(fit: FitResult):
    yield fit.mu, fit.nu, fit.rms_residual, fit.points_used


def sweep_rows(rows: list[SweepRow]):
    for r in rows:
        yield r.grid_value, r.p_left_sim, r.p_left_asym, r.deviation


def series_dict(series: ConvergenceSeries) -> dict:
    return {
        "theta": series.theta,
        "rho": series.rho,
        "beta": series.beta,
        "asymptote": series.asymptote,
        "rows": [dict(zip(CONVERGENCE_HEADER, row)) for row in convergence_rows(series)],
    }
