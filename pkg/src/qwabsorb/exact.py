"""
Exact (finite N) absorption coefficients.

The limiting left absorption probability is the bilinear form

    P_L = C1 |a|^2 + C2 |b|^2 + 2 Re(C3 conj(a) b)

with C1, C2, C3 given by integrals over the unit circle of the generating
functions p(z) = p_N^(2N)(z) and r(z) = r_N^(2N)(z) of the path-counting
solution (left sink at 0, right sink at 2N, walker starting at N).
Everything is expressed through the roots

    lambda_pm = (z^2 - 1 +- sqrt(1 + z^4 + 2 cos(2 theta) z^2)) / (2 cos(theta) z)

and the power sums x_n = lambda_+^n + lambda_-^n, y_n = lambda_+^n - lambda_-^n.
On |z| = 1 the even combinations reduce to Chebyshev polynomials T_n(c(phi)),
which gives a second, independent way of writing every integrand.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .core import CoinAmplitudes, check_theta
from .errors import SingularDenominatorError, ToleranceNotMetError
from .quadrature import QuadratureSpec, default_spec, integrate

__all__ = [
    "LambdaPair",
    "CoefficientTriple",
    "lambda_pm",
    "xy_sequences",
    "cz_ez",
    "p_r_functions",
    "c_phi",
    "chebyshev_t",
    "break_points",
    "integrand_direct",
    "integrand_chebyshev",
    "reformulation_integrands",
    "calibrate_reformulation_prefactor",
    "reformulation_prefactor",
    "coefficients_exact",
    "coefficients_reformulated",
    "absorption_from_coefficients",
]

_DEN_GUARD = 1e-300
_NODE_GUARD = 1e-13


@dataclass(frozen=True)
class LambdaPair:
    lambda_plus: NDArray[np.complex128]
    lambda_minus: NDArray[np.complex128]


@dataclass(frozen=True)
class CoefficientTriple:
    """Absorption coefficients plus diagnostics.

    ``residual_sum`` is |C1 + C2 - 1| and ``residual_im_c3`` the magnitude of
    the (analytically vanishing) imaginary part of the C3 integral.
    """

    c1: float
    c2: float
    c3: float
    residual_im_c3: float = 0.0
    residual_sum: float = 0.0
    theta: float | None = None
    n: int | None = None
    panels: int | None = None
    nodes_per_panel: int | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        keys = ("theta", "n", "c1", "c2", "c3", "residual_sum", "residual_im_c3",
                "panels", "nodes_per_panel")
        return {k: d[k] for k in keys}


def _require_cos(theta: float) -> float:
    theta = check_theta(theta, allow_half_pi=False)
    return theta


def _check_unit(z: NDArray) -> None:
    if np.any(np.abs(np.abs(z) - 1.0) > 1e-12):
        raise ValueError("z must lie on the unit circle (|z| = 1 within 1e-12)")


def lambda_pm(z: ArrayLike, theta: float) -> LambdaPair:
    """Roots of cos(theta) z lambda^2 - (z^2 - 1) lambda - cos(theta) z = 0.

    The principal square root selects lambda_+.  Their product is -1.
    """
    theta = _require_cos(theta)
    z = np.asarray(z, dtype=np.complex128)
    _check_unit(z)
    c = math.cos(theta)
    root = np.sqrt(1.0 + z**4 + 2.0 * math.cos(2.0 * theta) * z**2)
    den = 2.0 * c * z
    return LambdaPair((z**2 - 1.0 + root) / den, (z**2 - 1.0 - root) / den)


def xy_sequences(z: ArrayLike, theta: float, n_max: int) -> tuple[NDArray, NDArray]:
    """Return arrays x[n], y[n] for n = 0..n_max (leading axis is n)."""
    lam = lambda_pm(z, theta)
    n = np.arange(n_max + 1).reshape((-1,) + (1,) * np.ndim(lam.lambda_plus))
    lp = lam.lambda_plus[None, ...] ** n
    lm = lam.lambda_minus[None, ...] ** n
    return lp + lm, lp - lm


def cz_ez(z: ArrayLike, theta: float, n: int) -> tuple[NDArray, NDArray]:
    """Closed-form solution (C_z, E_z) of the boundary-matching linear system."""
    theta = _require_cos(theta)
    z = np.asarray(z, dtype=np.complex128)
    x, y = xy_sequences(z, theta, 2 * n - 1)
    c, s = math.cos(theta), math.sin(theta)
    den = y[2 * n - 1] - z * c * y[2 * n - 2]
    _guard(den, z)
    cz = z**2 * s / den
    ez = 0.5 * z * (z * c * x[2 * n - 2] - x[2 * n - 1]) / den
    return cz, ez


def _guard(den: NDArray, z: NDArray) -> None:
    bad = np.abs(den) < _DEN_GUARD
    if np.any(bad):
        where = np.asarray(z)[bad] if np.ndim(z) else z
        raise SingularDenominatorError(f"singular denominator at z = {where!r}", z=where)


def _u_terms(z: NDArray, theta: float, orders: list[int]) -> list[NDArray]:
    """u_k = y_k / y_1 for each requested k, via u_(k+1) = x_1 u_k + u_(k-1).

    x_1 = (z - 1/z) / cos(theta) needs no square root, so this is free of the
    branch choice and of the lambda_+ ~ lambda_- cancellation at the branch
    points.  All returned values share one common rescaling factor (to avoid
    overflow at large k), which cancels in the ratios used by the callers.
    """
    x1 = (z - 1.0 / z) / math.cos(theta)
    top = max(orders)
    wanted = set(orders)
    found: dict[int, NDArray] = {}
    prev = np.zeros_like(z)
    cur = np.ones_like(z)
    if 0 in wanted:
        found[0] = prev.copy()
    if 1 in wanted:
        found[1] = cur.copy()
    for k in range(2, top + 1):
        prev, cur = cur, x1 * cur + prev
        big = np.abs(cur) > 1e150
        if np.any(big):
            scale = np.where(big, 1e-150, 1.0)
            prev = prev * scale
            cur = cur * scale
            for key in found:
                found[key] = found[key] * scale
        if k in wanted:
            found[k] = cur.copy()
    return [found[k] for k in orders]


def p_r_functions(z: ArrayLike, theta: float, n: int, *, form: str = "simplified") -> tuple[NDArray, NDArray]:
    """Generating functions p(z), r(z) for sinks at 0 and 2N, start at N.

    ``form="simplified"`` evaluates the rational forms in y_n, computed as
    y_n / y_1 by a three-term recurrence; ``form="original"`` builds them
    from C_z, E_z and powers lambda^(N-1) as an independent cross-check.
    """
    theta = _require_cos(theta)
    z = np.asarray(z, dtype=np.complex128)
    c, s = math.cos(theta), math.sin(theta)
    sign = -1.0 if n % 2 else 1.0
    if form == "simplified":
        k = 2 * n - 1
        u_nm1, u_n, u_k, u_km1 = _u_terms(z, theta, [n - 1, n, k, k - 1])
        den = u_k - z * c * u_km1
        _guard(den, z)
        p = sign * z * (z * c * u_nm1 - u_n) / den
        r = sign * z**2 * s * u_nm1 / den
        return p, r
    if form == "original":
        lam = lambda_pm(z, theta)
        cz, ez = cz_ez(z, theta, n)
        lp, lm = lam.lambda_plus ** (n - 1), lam.lambda_minus ** (n - 1)
        p = (0.5 * z + ez) * lp + (0.5 * z - ez) * lm
        # r carries y_(N-1) and the parity sign; a bare (lambda_+ - lambda_-)
        # only agrees for N = 2
        r = sign * cz * (lp - lm)
        return p, r
    raise ValueError(f"unknown form {form!r}")


def c_phi(phi: ArrayLike, theta: float) -> NDArray[np.complex128]:
    """c(phi) = c_1(e^{i phi}): real outside the windows around pi/2 and 3pi/2
    of half-width theta, purely imaginary inside them."""
    theta = _require_cos(theta)
    phi = np.asarray(phi, dtype=float)
    radicand = np.cos(2.0 * phi) + math.cos(2.0 * theta)
    sgn = np.sign(np.cos(phi - theta))
    scale = math.sqrt(2.0) * math.cos(theta)
    real_part = sgn * np.sqrt(np.clip(radicand, 0.0, None)) / scale
    imag_part = -sgn * np.sqrt(np.clip(-radicand, 0.0, None)) / scale
    return np.where(radicand >= 0.0, real_part + 0j, 1j * imag_part)


def chebyshev_t(k: int, x: ArrayLike) -> NDArray:
    """T_k(x) for real or complex ``x``."""
    coef = np.zeros(k + 1)
    coef[k] = 1.0
    return np.polynomial.chebyshev.chebval(x, coef)


def break_points(theta: float) -> tuple[float, float, float, float]:
    """The four angles where c(phi) = 0 (branch points of c, removable
    singularities of the Chebyshev integrands)."""
    h = 0.5 * math.pi
    return (h - theta, h + theta, 3 * h - theta, 3 * h + theta)


def integrand_direct(phi: ArrayLike, theta: float, n: int) -> tuple[NDArray, NDArray, NDArray]:
    """(i1, i2, i3) = (|A|^2, |B|^2, conj(A) B) with A = cos p + sin r, B = sin p - cos r."""
    theta = _require_cos(theta)
    z = np.exp(1j * np.asarray(phi, dtype=float))
    p, r = p_r_functions(z, theta, n)
    c, s = math.cos(theta), math.sin(theta)
    a = c * p + s * r
    b = s * p - c * r
    return np.abs(a) ** 2, np.abs(b) ** 2, np.conj(a) * b


def _cheb_pieces(phi: NDArray, theta: float, n: int):
    phi = np.asarray(phi, dtype=float)
    dist = np.abs(((phi[..., None] - np.array(break_points(theta)) + math.pi) % (2 * math.pi)) - math.pi)
    if np.any(dist < _NODE_GUARD):
        raise SingularDenominatorError("node coincides with a removable singularity of the Chebyshev form")
    cc = c_phi(phi, theta)
    c2, s2 = math.cos(theta) ** 2, math.sin(theta) ** 2
    t_odd = chebyshev_t(2 * n - 1, cc)
    den = (c2 * cc**2 + s2 * t_odd**2).real
    _guard(den, phi)
    return cc, t_odd, den


def integrand_chebyshev(phi: ArrayLike, theta: float, n: int) -> tuple[NDArray, NDArray, NDArray]:
    """(i1, i2, Re i3) as rational functions of c = c(phi) and T_k(c).

    All three are even in c, so the sign convention of c(phi) drops out.
    """
    theta = _require_cos(theta)
    cc, t_odd, den = _cheb_pieces(phi, theta, n)
    c2, s2 = math.cos(theta) ** 2, math.sin(theta) ** 2
    sc = math.sin(theta) * math.cos(theta)
    sign = -1.0 if n % 2 else 1.0
    i1 = (2.0 * c2 * cc**2 + s2 * (1.0 + sign * chebyshev_t(2 * n - 2, cc))).real / (2.0 * den)
    i2 = (s2 * (1.0 - sign * chebyshev_t(2 * n, cc))).real / (2.0 * den)
    re_i3 = (sc * cc * (cc - sign * t_odd)).real / (2.0 * den)
    return i1, i2, re_i3


def reformulation_integrands(phi: ArrayLike, theta: float, n: int) -> tuple[NDArray, NDArray]:
    """Integrands g1, g3 with C1 = 1/2 + K * int g1 and C3 = K * int g3 over [0, 2 pi].

    The constant K is fixed by :func:`calibrate_reformulation_prefactor`.
    """
    theta = _require_cos(theta)
    cc, t_odd, den = _cheb_pieces(phi, theta, n)
    c2, s2 = math.cos(theta) ** 2, math.sin(theta) ** 2
    sc = math.sin(theta) * math.cos(theta)
    sign = -1.0 if n % 2 else 1.0
    g1 = (cc * (c2 * cc + sign * s2 * t_odd)).real / den
    g3 = (sc * cc * (cc - sign * t_odd)).real / den
    return g1, g3


def _cheb_eval(theta, n, fn, quad):
    def f(phi):
        return np.stack(fn(phi, theta, n), axis=-1)
    return integrate(f, quad, breaks=break_points(theta))


@lru_cache(maxsize=None)
def calibrate_reformulation_prefactor(theta: float = math.pi / 4, n: int = 4) -> tuple[float, float]:
    """Fix the constant in front of the reformulated C1 integral.

    Computes ``ratio = (C1_direct - 1/2) / ((1 / 8 pi) * int g1)`` and
    requires it to be a power of two.  Returns ``(ratio, ratio / (8 pi))``.
    """
    exact = coefficients_exact(theta, n)
    res = _cheb_eval(theta, n, reformulation_integrands, default_spec(n))
    integral = res.values[0] * 2.0 * math.pi
    ratio = (exact.c1 - 0.5) / (integral / (8.0 * math.pi))
    k = round(math.log2(ratio))
    if abs(ratio - 2.0**k) > 1e-8:
        raise AssertionError(f"prefactor calibration ratio {ratio!r} is not a power of two")
    return float(2.0**k), float(2.0**k) / (8.0 * math.pi)


def reformulation_prefactor() -> float:
    return calibrate_reformulation_prefactor()[1]


def _check_open_theta(theta: float) -> float:
    theta = check_theta(theta, allow_half_pi=False)
    if theta == 0.0:
        raise ValueError("theta = 0 is a trivial boundary case; coefficients need theta in (0, pi/2)")
    return theta


def coefficients_exact(
    theta: float,
    n: int,
    quad: QuadratureSpec | None = None,
    *,
    form: str = "direct",
    tol: float = 1e-9,
) -> CoefficientTriple:
    """Quadrature of the coefficient integrals at finite N.

    ``form="direct"`` integrates |A|^2, |B|^2 and conj(A) B built from p and r;
    ``form="chebyshev"`` integrates the Chebyshev-rational forms (C3 is then
    real by construction and ``residual_im_c3`` is reported as 0).

    Raises
    ------
    ToleranceNotMetError
        If |C1 + C2 - 1| or |Im C3| exceeds ``tol``.
    """
    theta = _check_open_theta(theta)
    if int(n) != n or n < 2:
        raise ValueError(f"N must be an integer >= 2, got {n!r}")
    n = int(n)
    quad = default_spec(n) if quad is None else quad

    if form == "direct":
        def f(phi):
            i1, i2, i3 = integrand_direct(phi, theta, n)
            return np.stack([i1, i2, i3.real, i3.imag], axis=-1)
        res = integrate(f, quad, breaks=break_points(theta))
        c1, c2, c3, im3 = (float(v) for v in res.values)
    elif form == "chebyshev":
        res = _cheb_eval(theta, n, integrand_chebyshev, quad)
        c1, c2, c3 = (float(v) for v in res.values)
        im3 = 0.0
    else:
        raise ValueError(f"unknown form {form!r}")

    triple = CoefficientTriple(
        c1=c1, c2=c2, c3=c3,
        residual_im_c3=abs(im3),
        residual_sum=abs(c1 + c2 - 1.0),
        theta=theta, n=n,
        panels=res.panels, nodes_per_panel=res.nodes_per_panel,
    )
    if triple.residual_sum > tol or triple.residual_im_c3 > tol:
        raise ToleranceNotMetError(
            f"coefficient residuals above tol={tol:g}: |C1+C2-1|={triple.residual_sum:.3g}, "
            f"|Im C3|={triple.residual_im_c3:.3g}",
            residual_sum=triple.residual_sum,
            residual_im_c3=triple.residual_im_c3,
        )
    return triple


def coefficients_reformulated(theta: float, n: int, quad: QuadratureSpec | None = None) -> CoefficientTriple:
    """C1 = 1/2 + K int g1, C2 = 1 - C1, C3 = K int g3 with the calibrated K."""
    theta = _check_open_theta(theta)
    quad = default_spec(n) if quad is None else quad
    k = reformulation_prefactor()
    res = _cheb_eval(theta, n, reformulation_integrands, quad)
    g1, g3 = (float(v) * 2.0 * math.pi for v in res.values)
    c1 = 0.5 + k * g1
    return CoefficientTriple(c1=c1, c2=1.0 - c1, c3=k * g3, theta=theta, n=n,
                             panels=res.panels, nodes_per_panel=res.nodes_per_panel)


def absorption_from_coefficients(c: CoefficientTriple, psi: CoinAmplitudes) -> tuple[float, float]:
    """(P_L, P_R) from the bilinear forms; P_R uses the parity image (-i b, i a)."""
    a, b = psi.a, psi.b
    pl = c.c1 * abs(a) ** 2 + c.c2 * abs(b) ** 2 + 2.0 * (c.c3 * a.conjugate() * b).real
    pr = c.c1 * abs(b) ** 2 + c.c2 * abs(a) ** 2 - 2.0 * (c.c3 * b.conjugate() * a).real
    return float(pl), float(pr)
