"""
Adaptive composite Gauss-Legendre quadrature on a periodic interval.

The coefficient integrands are smooth but have Lorentzian-like peaks whose
width shrinks roughly like N^-3 (they come from decay modes of the finite
line that are close to the unit circle).  A fixed panel grid therefore stops
resolving them once N grows, so panels are bisected until the 16-point rule
on a panel agrees with the sum over its two halves.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.typing import NDArray

__all__ = ["QuadratureSpec", "QuadratureResult", "integrate", "default_spec"]


@dataclass(frozen=True)
class QuadratureSpec:
    """Composite Gauss-Legendre settings.

    ``panels`` is the initial panel count over the whole period; it is
    distributed over the break-point segments in proportion to their length.
    ``tol`` is the absolute error target for the integral normalized by the
    period (i.e. for mean values such as C_j).
    """

    panels: int = 64
    nodes_per_panel: int = 16
    tol: float = 1e-13
    max_depth: int = 40

    def __post_init__(self):
        if self.panels < 2:
            raise ValueError("need at least 2 panels")
        if self.nodes_per_panel < 8:
            raise ValueError("need at least 8 nodes per panel")
        if not self.tol > 0:
            raise ValueError("tol must be positive")


def default_spec(n: int) -> QuadratureSpec:
    """Starting grid: max(64, 8N) panels of 16 nodes."""
    return QuadratureSpec(panels=max(64, 8 * n))


@dataclass
class QuadratureResult:
    values: NDArray          # mean value of each integrand component over the period
    panels: int              # panels in the final (refined) partition
    nodes_per_panel: int
    error_estimate: float


_NOISE = 1e3 * np.finfo(float).eps
_STALL = 1e-8
# refinement that keeps doubling this many panels is chasing noise
_MAX_ACTIVE = 1 << 18


@lru_cache(maxsize=None)
def _legendre(k: int):
    x, w = np.polynomial.legendre.leggauss(k)
    return x, w


def _initial_edges(breaks: Sequence[float], start: float, period: float, panels: int) -> NDArray:
    pts = sorted({start, start + period, *(b for b in breaks if start < b < start + period)})
    edges = [pts[0]]
    for lo, hi in zip(pts[:-1], pts[1:]):
        count = max(1, int(round(panels * (hi - lo) / period)))
        edges.extend(np.linspace(lo, hi, count + 1)[1:])
    return np.array(edges)


def _panel_sums(f, lo: NDArray, hi: NDArray, x: NDArray, w: NDArray) -> tuple[NDArray, NDArray]:
    """Gauss-Legendre sums on each panel and the matching sums of |f|.

    Both have shape (panels, components).
    """
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    nodes = mid[:, None] + half[:, None] * x[None, :]
    vals = np.asarray(f(nodes.ravel()))
    if vals.ndim == 1:
        vals = vals[:, None]
    vals = vals.reshape(lo.size, x.size, -1)
    sums = np.einsum("pnc,n->pc", vals, w) * half[:, None]
    mags = np.einsum("pnc,n->pc", np.abs(vals), w) * half[:, None]
    return sums, mags


def integrate(
    f: Callable[[NDArray], NDArray],
    spec: QuadratureSpec,
    *,
    breaks: Sequence[float] = (),
    start: float = 0.0,
    period: float = 2.0 * math.pi,
) -> QuadratureResult:
    """Mean value of ``f`` over ``[start, start + period]``.

    ``f`` maps a 1-D array of abscissae to an array of shape ``(len(phi),)``
    or ``(len(phi), components)``.  ``breaks`` are always panel edges, so the
    Gauss nodes never land on them.
    """
    x, w = _legendre(spec.nodes_per_panel)
    edges = _initial_edges(breaks, start, period, spec.panels)
    lo, hi = edges[:-1], edges[1:]
    whole, _ = _panel_sums(f, lo, hi, x, w)

    done_lo, done_sums, done_err = [], [], []
    parent_err = np.full(lo.size, np.inf)
    depth = 0
    while lo.size:
        mid = 0.5 * (lo + hi)
        halves, mags = _panel_sums(f, np.concatenate([lo, mid]), np.concatenate([mid, hi]), x, w)
        left, right = halves[: lo.size], halves[lo.size:]
        refined = left + right
        err = np.max(np.abs(refined - whole), axis=1)
        # rounding floor: differences below this are noise, not truncation
        mag = np.max(mags[: lo.size] + mags[lo.size:], axis=1)
        ok = err <= spec.tol * (hi - lo) + _NOISE * mag
        # near-pole evaluations lose ~eps/distance; once bisection stops
        # reducing a small error estimate, it is measuring that noise
        ok |= (err > 0.25 * parent_err) & (err <= _STALL * mag)
        done_lo.append(lo[ok])
        done_sums.append(refined[ok])
        done_err.append(err[ok])
        if ok.all():
            break
        depth += 1
        unresolved = int((~ok).sum())
        if depth > spec.max_depth or 2 * unresolved > _MAX_ACTIVE:
            raise RuntimeError(
                f"adaptive quadrature did not converge after {depth} bisections "
                f"({unresolved} panels unresolved)"
            )
        bad = ~ok
        lo, hi = np.concatenate([lo[bad], mid[bad]]), np.concatenate([mid[bad], hi[bad]])
        whole = np.concatenate([left[bad], right[bad]])
        parent_err = np.concatenate([err[bad], err[bad]])

    order = np.argsort(np.concatenate(done_lo), kind="stable")
    sums = np.concatenate(done_sums)[order]
    # accepted panels were each split once, so count both halves
    n_panels = 2 * sums.shape[0]
    total = np.sum(sums, axis=0) / period
    err = float(np.sum(np.concatenate(done_err))) / period
    return QuadratureResult(total, n_panels, spec.nodes_per_panel, err)
