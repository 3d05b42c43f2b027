"""
Coin algebra for the two-state walk.

The coin family is the real reflection

    C(theta) = [[cos theta,  sin theta],
                [sin theta, -cos theta]]

acting on the chirality basis ordered (|L>, |R>).  Helpers here convert
between standard amplitudes (a, b) and the coin eigenbasis coordinates
(rho, beta), and reduce a general U(2) coin to this family.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

__all__ = [
    "HALF_PI",
    "check_theta",
    "CoinAmplitudes",
    "EigenbasisCoords",
    "U2CoinParams",
    "coin_cos_sin",
    "coin_matrix",
    "reduce_u2_coin",
    "coin_eigenvectors",
    "eigen_to_standard",
    "standard_to_eigen",
    "bilinear_forms",
    "initial_amplitudes",
]

HALF_PI = 0.5 * math.pi

# Inputs such as 1.5707963268 overshoot pi/2 by a few ulp-scale digits.
_THETA_SLACK = 1e-9
_NORM_TOL = 1e-12


def check_theta(theta: float, *, allow_half_pi: bool = True) -> float:
    """Validate a coin angle and return it as a float in [0, pi/2].

    Values within 1e-9 outside the interval are snapped onto the end point.
    With ``allow_half_pi=False`` the right end point is rejected, as required
    by the closed-form expressions.
    """
    theta = float(theta)
    if not math.isfinite(theta):
        raise ValueError(f"coin angle must be finite, got {theta!r}")
    if -_THETA_SLACK <= theta < 0.0:
        theta = 0.0
    if HALF_PI < theta <= HALF_PI + _THETA_SLACK:
        theta = HALF_PI
    if not 0.0 <= theta <= HALF_PI:
        raise ValueError(f"coin angle must lie in [0, pi/2], got {theta!r}")
    if not allow_half_pi and abs(theta - HALF_PI) <= _THETA_SLACK:
        raise ValueError("theta = pi/2 is not allowed here (sigma_x coin, cos(theta) = 0)")
    return theta


@dataclass(frozen=True)
class CoinAmplitudes:
    """Coin state a|L> + b|R>; normalized to 1e-12 on construction."""

    a: complex
    b: complex

    def __post_init__(self):
        a, b = complex(self.a), complex(self.b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        norm = abs(a) ** 2 + abs(b) ** 2
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValueError(f"|a|^2 + |b|^2 = {norm!r}, expected 1")

    @classmethod
    def normalized(cls, a: complex, b: complex) -> "CoinAmplitudes":
        norm = math.sqrt(abs(a) ** 2 + abs(b) ** 2)
        if norm == 0.0:
            raise ValueError("zero vector cannot be normalized")
        return cls(a / norm, b / norm)

    def as_array(self) -> NDArray[np.complex128]:
        return np.array([self.a, self.b], dtype=np.complex128)

    def parity_image(self) -> "CoinAmplitudes":
        """Return sigma_y (a, b) = (-i b, i a), the mirror-walk initial state."""
        return CoinAmplitudes(-1j * self.b, 1j * self.a)


@dataclass(frozen=True)
class EigenbasisCoords:
    """Coordinates of rho|theta-> + e^{i beta} sqrt(1 - rho^2)|theta+>.

    ``beta`` is reduced modulo 2 pi on construction.
    """

    rho: float
    beta: float = 0.0

    def __post_init__(self):
        rho = float(self.rho)
        if -1e-12 <= rho < 0.0:
            rho = 0.0
        if 1.0 < rho <= 1.0 + 1e-12:
            rho = 1.0
        if not 0.0 <= rho <= 1.0:
            raise ValueError(f"rho must lie in [0, 1], got {self.rho!r}")
        beta = float(self.beta)
        if not math.isfinite(beta):
            raise ValueError(f"beta must be finite, got {beta!r}")
        beta = math.fmod(beta, 2.0 * math.pi)
        if beta < 0.0:
            beta += 2.0 * math.pi
        if beta >= 2.0 * math.pi:
            beta = 0.0
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "beta", beta)


@dataclass(frozen=True)
class U2CoinParams:
    """General U(2) coin diag(e^{i alpha}, e^{i beta_phase}) C(theta) exp(i gamma sigma_z)."""

    theta: float
    alpha: float = 0.0
    beta_phase: float = 0.0
    gamma: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "theta", check_theta(self.theta))
        for name in ("alpha", "beta_phase", "gamma"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)

    def matrix(self) -> NDArray[np.complex128]:
        left = np.diag([cmath.exp(1j * self.alpha), cmath.exp(1j * self.beta_phase)])
        right = np.diag([cmath.exp(1j * self.gamma), cmath.exp(-1j * self.gamma)])
        return left @ coin_matrix(self.theta) @ right


def coin_cos_sin(theta: float) -> tuple[float, float]:
    """(cos theta, sin theta), exact at theta = pi/2 where math.cos leaves 6e-17."""
    if theta == HALF_PI:
        return 0.0, 1.0
    return math.cos(theta), math.sin(theta)


def coin_matrix(theta: float) -> NDArray[np.float64]:
    """Return the real 2x2 coin C(theta) in the (|L>, |R>) basis."""
    c, s = coin_cos_sin(theta)
    return np.array([[c, s], [s, -c]])


def reduce_u2_coin(params: U2CoinParams, psi: CoinAmplitudes) -> tuple[float, CoinAmplitudes]:
    """Map a general U(2) coin walk onto the one-parameter family.

    The outer diagonal phases commute with the shift and only attach a phase
    that depends on the path end point.  The inner ``exp(i gamma sigma_z)``
    acts before the first coin toss on the initial state, and afterwards again
    only contributes end-point phases.  Hence the walk with coin
    ``params.matrix()`` from ``psi`` has the same position distribution at
    every step as the walk with ``C(theta)`` from ``exp(i gamma sigma_z) psi``.
    """
    g = params.gamma
    reduced = CoinAmplitudes(cmath.exp(1j * g) * psi.a, cmath.exp(-1j * g) * psi.b)
    return params.theta, reduced


def coin_eigenvectors(theta: float) -> tuple[CoinAmplitudes, CoinAmplitudes]:
    """Return (|theta->, |theta+>) with C|theta+-> = +-|theta+->."""
    h = 0.5 * theta
    minus = CoinAmplitudes(-math.sin(h), math.cos(h))
    plus = CoinAmplitudes(math.cos(h), math.sin(h))
    return minus, plus


def eigen_to_standard(coords: EigenbasisCoords, theta: float) -> CoinAmplitudes:
    h = 0.5 * theta
    rho = coords.rho
    w = math.sqrt(max(0.0, 1.0 - rho * rho)) * cmath.exp(1j * coords.beta)
    a = -rho * math.sin(h) + w * math.cos(h)
    b = rho * math.cos(h) + w * math.sin(h)
    return CoinAmplitudes.normalized(a, b)


def standard_to_eigen(psi: CoinAmplitudes, theta: float) -> tuple[EigenbasisCoords, float]:
    """Decompose ``psi`` in the coin eigenbasis.

    Returns the coordinates together with the global phase ``chi`` such that
    ``psi = e^{i chi} * eigen_to_standard(coords, theta)``.  ``rho`` is the
    magnitude of the overlap with |theta->.
    """
    minus, plus = coin_eigenvectors(theta)
    # eigenvectors are real, so the overlap is a plain dot product
    u = minus.a.real * psi.a + minus.b.real * psi.b
    v = plus.a.real * psi.a + plus.b.real * psi.b
    rho = min(1.0, abs(u))
    if abs(u) > 1e-15:
        chi = cmath.phase(u)
        beta = cmath.phase(v) - chi if abs(v) > 1e-15 else 0.0
    else:
        chi = cmath.phase(v)
        beta = 0.0
    return EigenbasisCoords(rho, beta), chi


def bilinear_forms(coords: EigenbasisCoords, theta: float) -> tuple[float, float, float]:
    """Return (|a|^2, |b|^2, 2 Re(conj(a) b)) directly from (rho, beta, theta)."""
    rho, beta = coords.rho, coords.beta
    c, s = math.cos(theta), math.sin(theta)
    cross = rho * math.sqrt(max(0.0, 1.0 - rho * rho)) * math.cos(beta)
    abs_a2 = 0.5 * (1.0 + c) - rho * rho * c - cross * s
    abs_b2 = 0.5 * (1.0 - c) + rho * rho * c + cross * s
    two_re = (1.0 - 2.0 * rho * rho) * s + 2.0 * cross * c
    return abs_a2, abs_b2, two_re


def initial_amplitudes(theta: float, rho: float, beta: float = 0.0) -> CoinAmplitudes:
    """Shorthand for ``eigen_to_standard(EigenbasisCoords(rho, beta), theta)``."""
    return eigen_to_standard(EigenbasisCoords(rho, beta), theta)
