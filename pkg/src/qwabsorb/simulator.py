"""
Dense simulation of the walk on [-N, N] with sinks at both ends.

One step applies the coin at every site, shifts |L> one site left and |R> one
site right, then removes whatever arrived at -N or +N.  The removed squared
amplitude is the absorption probability for that step.

States are arrays of shape ``(2N + 1, 2)``; row ``m + N`` holds the (L, R)
amplitudes at position ``m``.  The sink rows are kept (always zero) so that
indices line up with positions.

Two evolution paths are provided:

* :func:`step` / :func:`iter_walk` advance one step at a time and are the
  reference definition;
* :func:`run_walk` and :func:`simulate_absorption` propagate the interior
  sites in blocks of steps using precomputed powers of the interior
  transfer matrix, which is much faster for the long runs needed near
  theta = pi/2.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterator
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from .core import CoinAmplitudes, check_theta, coin_cos_sin, coin_matrix
from .errors import NonConvergenceError

__all__ = [
    "WalkConfig",
    "WalkState",
    "TerminationSpec",
    "AbsorptionTrace",
    "OracleSeries",
    "initial_state",
    "step",
    "iter_walk",
    "run_walk",
    "simulate_absorption",
    "enumerate_paths_oracle",
    "MAX_ORACLE_STEPS",
]

L, R = 0, 1
MAX_ORACLE_STEPS = 20


@dataclass(frozen=True)
class WalkConfig:
    n: int
    theta: float
    initial: CoinAmplitudes

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"half-length N must be an integer >= 2, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "theta", check_theta(self.theta))
        if not isinstance(self.initial, CoinAmplitudes):
            raise TypeError("initial must be a CoinAmplitudes instance")


@dataclass(frozen=True)
class TerminationSpec:
    eps: float = 1e-12
    max_steps: int = 10**7

    def __post_init__(self):
        if not self.eps > 0.0:
            raise ValueError(f"eps must be positive, got {self.eps!r}")
        if int(self.max_steps) != self.max_steps or self.max_steps < 1:
            raise ValueError(f"max_steps must be an integer >= 1, got {self.max_steps!r}")
        object.__setattr__(self, "max_steps", int(self.max_steps))


@dataclass
class WalkState:
    amplitudes: NDArray[np.complex128]
    step: int = 0

    @property
    def n(self) -> int:
        return (self.amplitudes.shape[0] - 1) // 2

    def norm2(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def position_distribution(self) -> NDArray[np.float64]:
        return np.sum(np.abs(self.amplitudes) ** 2, axis=1)


@dataclass
class AbsorptionTrace:
    """Per-step cumulative absorption; index t is the value after t steps."""

    pl: NDArray[np.float64]
    pr: NDArray[np.float64]
    survival: NDArray[np.float64]
    terminated: str
    states: NDArray[np.complex128] | None = field(default=None, repr=False)

    @property
    def steps(self) -> int:
        return len(self.pl) - 1

    @property
    def converged(self) -> bool:
        return self.terminated == "converged"

    @property
    def p_left(self) -> float:
        return float(self.pl[-1])

    @property
    def p_right(self) -> float:
        return float(self.pr[-1])


@dataclass
class OracleSeries:
    """Path-sum amplitudes after t = 0..t_max steps and the per-step absorption."""

    states: list[WalkState]
    absorbed_left: NDArray[np.float64]
    absorbed_right: NDArray[np.float64]


def initial_state(config: WalkConfig) -> WalkState:
    amps = np.zeros((2 * config.n + 1, 2), dtype=np.complex128)
    amps[config.n] = config.initial.as_array()
    return WalkState(amps, 0)


def step(
    state: WalkState,
    theta: float,
    *,
    coin: NDArray | None = None,
    project: bool = True,
) -> tuple[WalkState, float, float]:
    """Advance one step: coin, shift, then absorb at the sinks.

    Parameters
    ----------
    state : WalkState
        Current state; the sink rows are expected to be zero.
    theta : float
        Coin angle; ignored when ``coin`` is given.
    coin : array, optional
        Arbitrary 2x2 coin overriding ``C(theta)``.
    project : bool
        If False the amplitude arriving at the sinks is left in place
        (no absorption), exposing the unitary part of the step.

    Returns
    -------
    (WalkState, absorbed_left, absorbed_right)
    """
    cm = coin_matrix(theta) if coin is None else np.asarray(coin)
    psi = state.amplitudes
    tossed = psi @ cm.T
    out = np.zeros_like(psi, dtype=np.result_type(psi, cm))
    out[:-1, L] = tossed[1:, L]
    out[1:, R] = tossed[:-1, R]
    absorbed_left = float(np.sum(np.abs(out[0]) ** 2))
    absorbed_right = float(np.sum(np.abs(out[-1]) ** 2))
    if project:
        out[0] = 0.0
        out[-1] = 0.0
    return WalkState(out, state.step + 1), absorbed_left, absorbed_right


def iter_walk(config: WalkConfig, *, coin: NDArray | None = None) -> Iterator[tuple[WalkState, float, float]]:
    """Yield ``(state, absorbed_left, absorbed_right)`` for t = 1, 2, ... forever."""
    state = initial_state(config)
    while True:
        state, al, ar = step(state, config.theta, coin=coin)
        yield state, al, ar


class _Propagator:
    """Block propagator on the 2(2N - 1) interior amplitudes.

    ``blocks[k]`` maps the interior state at time t to time t + k + 1, and
    ``leak_left[k]``/``leak_right[k]`` give the amplitude reaching (-N, L)
    and (+N, R) at step t + k + 1.
    """

    def __init__(self, n: int, theta: float, block: int | None = None):
        self.n = n
        d = 2 * (2 * n - 1)
        if block is None:
            block = int(max(1, min(256, 4_000_000 // (d * d))))
        self.block = block
        c, s = coin_cos_sin(theta)
        # interior index of (position m, chirality k): 2 * (m + n - 1) + k
        M = np.zeros((d, d))
        left = np.zeros(d)
        right = np.zeros(d)
        for j in range(2 * n - 1):
            m = j - (n - 1)
            for k, (to_l, to_r) in enumerate(((c, s), (s, -c))):
                col = 2 * j + k
                if m - 1 > -n:
                    M[2 * (j - 1) + L, col] += to_l
                else:
                    left[col] += to_l
                if m + 1 < n:
                    M[2 * (j + 1) + R, col] += to_r
                else:
                    right[col] += to_r
        blocks = np.empty((block, d, d))
        power = np.eye(d)
        leak_l = np.empty((block, d))
        leak_r = np.empty((block, d))
        for k in range(block):
            leak_l[k] = left @ power
            leak_r[k] = right @ power
            power = M @ power
            blocks[k] = power
        self.blocks = blocks
        self.leak_left = leak_l
        self.leak_right = leak_r
        self.dim = d

    def to_interior(self, amps: NDArray) -> NDArray[np.complex128]:
        return np.ascontiguousarray(amps[1:-1]).reshape(-1)

    def to_full(self, interior: NDArray) -> NDArray[np.complex128]:
        k = interior.shape[0]
        full = np.zeros((k, 2 * self.n + 1, 2), dtype=np.complex128)
        full[:, 1:-1, :] = interior.reshape(k, 2 * self.n - 1, 2)
        return full

    def advance(self, psi: NDArray, count: int):
        """Return (states, absorbed_left, absorbed_right) for the next ``count`` steps."""
        states = self.blocks[:count] @ psi
        al = np.abs(self.leak_left[:count] @ psi) ** 2
        ar = np.abs(self.leak_right[:count] @ psi) ** 2
        return states, al, ar


def _evolve(config: WalkConfig, term: TerminationSpec, keep_states: bool):
    prop = _Propagator(config.n, config.theta)
    psi = prop.to_interior(initial_state(config).amplitudes)
    pl_chunks = [np.zeros(1)]
    pr_chunks = [np.zeros(1)]
    surv_chunks = [np.array([float(np.vdot(psi, psi).real)])]
    state_chunks = [prop.to_full(psi[None, :])] if keep_states else []
    cum_l = 0.0
    cum_r = 0.0
    t = 0
    terminated = "step-limit"
    while t < term.max_steps:
        count = min(prop.block, term.max_steps - t)
        states, al, ar = prop.advance(psi, count)
        survival = np.einsum("ij,ij->i", states.real, states.real) + np.einsum(
            "ij,ij->i", states.imag, states.imag
        )
        below = np.flatnonzero(survival < term.eps)
        if below.size:
            count = int(below[0]) + 1
            states, al, ar, survival = states[:count], al[:count], ar[:count], survival[:count]
            terminated = "converged"
        cl = cum_l + np.cumsum(al)
        cr = cum_r + np.cumsum(ar)
        pl_chunks.append(cl)
        pr_chunks.append(cr)
        surv_chunks.append(survival)
        if keep_states:
            state_chunks.append(prop.to_full(states))
        cum_l, cum_r = float(cl[-1]), float(cr[-1])
        psi = states[-1]
        t += count
        if terminated == "converged":
            break
    trace = AbsorptionTrace(
        pl=np.concatenate(pl_chunks),
        pr=np.concatenate(pr_chunks),
        survival=np.concatenate(surv_chunks),
        terminated=terminated,
        states=np.concatenate(state_chunks) if keep_states else None,
    )
    return trace


def run_walk(
    config: WalkConfig,
    term: TerminationSpec | None = None,
    *,
    keep_states: bool = False,
) -> AbsorptionTrace:
    """Evolve until survival < ``term.eps`` or ``term.max_steps`` steps.

    The returned trace has ``steps + 1`` entries (t = 0 included).  It is not
    an error to hit the step limit here; check ``trace.terminated``.  With
    ``keep_states=True`` the full state after every step is stored in
    ``trace.states`` (shape ``(steps + 1, 2N + 1, 2)``), which is only
    sensible for short runs.
    """
    term = TerminationSpec() if term is None else term
    return _evolve(config, term, keep_states)


def simulate_absorption(config: WalkConfig, term: TerminationSpec | None = None) -> tuple[float, float]:
    """Limiting (P_L, P_R).

    Raises
    ------
    NonConvergenceError
        If the survival probability is still >= eps after ``max_steps``
        steps (always the case for theta = pi/2).
    """
    term = TerminationSpec() if term is None else term
    trace = run_walk(config, term)
    if not trace.converged:
        raise NonConvergenceError(
            f"survival {trace.survival[-1]:.6g} >= eps={term.eps:g} after "
            f"{trace.steps} steps (theta={config.theta!r}, N={config.n})",
            trace=trace,
        )
    return trace.p_left, trace.p_right


def enumerate_paths_oracle(config: WalkConfig, t_max: int) -> OracleSeries:
    """Brute-force path sums for t = 0..t_max.

    Every left/right move sequence is enumerated explicitly.  A sequence
    contributes the product of coin matrix elements C[d_k, d_(k-1)] along it,
    times the initial amplitude of d_0.  Sequences that reach -N or +N stop
    there and count as absorbed at that step.
    """
    if t_max > MAX_ORACLE_STEPS:
        raise ValueError(f"path enumeration limited to t_max <= {MAX_ORACLE_STEPS}, got {t_max}")
    if t_max < 0:
        raise ValueError("t_max must be non-negative")
    n = config.n
    cm = coin_matrix(config.theta)
    init = (config.initial.a, config.initial.b)
    amps = np.zeros((t_max + 1, 2 * n + 1, 2), dtype=np.complex128)
    sink_amp = np.zeros((t_max + 1, 2), dtype=np.complex128)
    amps[0, n] = init

    for t in range(1, t_max + 1):
        for d0 in (L, R):
            for moves in itertools.product((L, R), repeat=t):
                amp = init[d0]
                prev = d0
                x = 0
                absorbed_early = False
                for k, d in enumerate(moves):
                    amp *= cm[d, prev]
                    x += -1 if d == L else 1
                    prev = d
                    if abs(x) == n and k < t - 1:
                        absorbed_early = True
                        break
                if absorbed_early:
                    continue
                if x == -n:
                    sink_amp[t, 0] += amp
                elif x == n:
                    sink_amp[t, 1] += amp
                else:
                    amps[t, x + n, prev] += amp

    states = [WalkState(amps[t], t) for t in range(t_max + 1)]
    return OracleSeries(
        states=states,
        absorbed_left=np.abs(sink_amp[:, 0]) ** 2,
        absorbed_right=np.abs(sink_amp[:, 1]) ** 2,
    )
