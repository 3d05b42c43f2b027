import math

import numpy as np
import pytest

from qwabsorb.quadrature import QuadratureSpec, default_spec, integrate


def poisson_kernel(r):
    # mean value over the circle is exactly 1; peak width ~ 1 - r.  The
    # denominator 1 - 2 r cos + r^2 is rewritten to avoid cancellation.
    return lambda phi: (1 - r * r) / ((1 - r) ** 2 + 4 * r * np.sin(0.5 * (phi - 0.3)) ** 2)


# r = 1 - 2^-k keeps 1 - r exact, so the computed kernel still has mean 1
@pytest.mark.parametrize("r", [1 - 2.0**-k for k in (1, 7, 14, 20)])
def test_resolves_narrow_peaks(r):
    res = integrate(poisson_kernel(r), QuadratureSpec(panels=16))
    assert res.values[0] == pytest.approx(1.0, abs=1e-12)


def test_fixed_grid_would_miss_the_peak():
    # one pass of the base rule is far off, which is why refinement exists
    f = poisson_kernel(0.99999)
    x, w = np.polynomial.legendre.leggauss(16)
    edges = np.linspace(0, 2 * math.pi, 65)
    total = sum(
        0.5 * (hi - lo) * np.dot(w, f(0.5 * (hi + lo) + 0.5 * (hi - lo) * x))
        for lo, hi in zip(edges[:-1], edges[1:])
    )
    assert abs(total / (2 * math.pi) - 1.0) > 1e-3


def test_vector_valued_and_break_points():
    f = lambda phi: np.stack([np.abs(np.sin(phi)), np.cos(phi) ** 2], axis=-1)
    res = integrate(f, QuadratureSpec(panels=8), breaks=(math.pi,))
    np.testing.assert_allclose(res.values, [2 / math.pi, 0.5], atol=1e-14)
    assert res.nodes_per_panel == 16
    assert res.panels >= 8


def test_break_points_are_panel_edges():
    seen = []

    def f(phi):
        seen.append(phi.copy())
        return np.ones_like(phi)

    brk = 1.2345
    integrate(f, QuadratureSpec(panels=4), breaks=(brk,))
    nodes = np.concatenate(seen)
    assert np.min(np.abs(nodes - brk)) > 1e-6


def test_deterministic():
    f = poisson_kernel(0.999)
    a = integrate(f, QuadratureSpec(panels=12))
    b = integrate(f, QuadratureSpec(panels=12))
    assert a.values[0] == b.values[0]
    assert a.panels == b.panels


def test_depth_limit():
    # a discontinuity that is not declared as a break point never converges
    f = lambda phi: np.where(phi < 1.0, 0.0, 1.0)
    with pytest.raises(RuntimeError):
        integrate(f, QuadratureSpec(panels=4, tol=1e-30, max_depth=5))


def test_noisy_integrand_fails_fast():
    # relative noise far above the acceptance thresholds: refinement must
    # stop with an error instead of growing without bound
    rng = np.random.default_rng(0)
    f = lambda phi: 1.0 + 1e-4 * rng.standard_normal(phi.shape)
    with pytest.raises(RuntimeError):
        integrate(f, QuadratureSpec(panels=8))


def test_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(panels=1)
    with pytest.raises(ValueError):
        QuadratureSpec(nodes_per_panel=4)
    with pytest.raises(ValueError):
        QuadratureSpec(tol=0.0)
    assert default_spec(4).panels == 64
    assert default_spec(20).panels == 160
