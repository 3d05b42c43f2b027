"""
Large-N closed forms.

For N -> infinity the coefficients become

    C1 = 1 - sin(theta)/2,  C2 = sin(theta)/2,
    C3 = sin(theta) (1 - sin(theta)) / (2 cos(theta)),

and in coin-eigenbasis coordinates the left absorption probability depends
only on theta and rho^2:

    P_L = 1 / (1 + tan(theta/2)) - rho^2 (1 - sin(theta)) / cos(theta).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .core import check_theta
from .exact import (
    CoefficientTriple,
    _cheb_pieces,
    break_points,
    reformulation_prefactor,
)
from .quadrature import QuadratureSpec, default_spec, integrate

__all__ = [
    "AsymptoticResult",
    "integral_I_closed",
    "integral_I_integrand",
    "integral_I_numeric",
    "coefficients_asymptotic",
    "pl_pr_asymptotic",
]


@dataclass(frozen=True)
class AsymptoticResult:
    c1: float
    c2: float
    c3: float
    p_left: float
    p_right: float
    theta: float
    rho: float

    def to_dict(self) -> dict:
        return asdict(self)


def integral_I_closed(theta: float) -> float:
    """cos(theta) / (2 (1 + sin(theta)))."""
    theta = check_theta(theta, allow_half_pi=False)
    return math.cos(theta) / (2.0 * (1.0 + math.sin(theta)))


def integral_I_integrand(phi, theta: float, n: int):
    """cos(theta) c^2 / (cos^2(theta) c^2 + sin^2(theta) T_(2N-1)(c)^2).

    Essentially zero inside the windows |phi - pi/2| < theta and
    |phi - 3 pi/2| < theta, where c is imaginary and T_(2N-1) grows like
    sinh((2N - 1) alpha).
    """
    theta = check_theta(theta, allow_half_pi=False)
    cc, _, den = _cheb_pieces(np.asarray(phi, dtype=float), theta, n)
    return math.cos(theta) * (cc**2).real / den


def integral_I_numeric(theta: float, n: int, quad: QuadratureSpec | None = None) -> float:
    """Quadrature of the intermediate integral at finite N.

    Only used to check the large-N approximation chain against
    :func:`integral_I_closed`; production values come from the closed forms.
    """
    theta = check_theta(theta, allow_half_pi=False)
    if theta == 0.0:
        raise ValueError("theta must lie in (0, pi/2)")
    quad = default_spec(n) if quad is None else quad
    res = integrate(lambda phi: integral_I_integrand(phi, theta, n), quad, breaks=break_points(theta))
    return float(res.values[0]) * 2.0 * math.pi * reformulation_prefactor()


def coefficients_asymptotic(theta: float) -> CoefficientTriple:
    theta = check_theta(theta, allow_half_pi=False)
    s, c = math.sin(theta), math.cos(theta)
    return CoefficientTriple(
        c1=1.0 - 0.5 * s,
        c2=0.5 * s,
        c3=s * (1.0 - s) / (2.0 * c),
        theta=theta,
    )


def pl_pr_asymptotic(theta: float, rho: float) -> AsymptoticResult:
    """Large-N (P_L, P_R) for an initial state with weight rho^2 on |theta->.

    The relative phase beta does not enter.  theta = 0 is allowed; pi/2 is
    rejected because the expressions do not apply there.
    """
    theta = check_theta(theta, allow_half_pi=False)
    rho = float(rho)
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"rho must lie in [0, 1], got {rho!r}")
    coeffs = coefficients_asymptotic(theta)
    slope = (1.0 - math.sin(theta)) / math.cos(theta)
    p_left = 1.0 / (1.0 + math.tan(0.5 * theta)) - slope * rho * rho
    p_right = 1.0 - p_left
    return AsymptoticResult(
        c1=coeffs.c1, c2=coeffs.c2, c3=coeffs.c3,
        p_left=p_left, p_right=p_right, theta=theta, rho=rho,
    )
