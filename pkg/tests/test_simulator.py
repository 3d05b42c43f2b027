import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qwabsorb.core import HALF_PI, CoinAmplitudes, coin_matrix, initial_amplitudes
from qwabsorb.errors import NonConvergenceError
from qwabsorb.simulator import (
    MAX_ORACLE_STEPS,
    TerminationSpec,
    WalkConfig,
    enumerate_paths_oracle,
    initial_state,
    iter_walk,
    run_walk,
    simulate_absorption,
    step,
)

states = st.tuples(st.floats(0.0, 1.0), st.floats(0.0, 2 * math.pi))


def dense_step_matrix(n: int, theta: float) -> np.ndarray:
    """Unitary coin-then-shift on the ring of 2N+1 sites, flattened (site, chirality)."""
    size = 2 * n + 1
    shift = np.zeros((2 * size, 2 * size))
    for m in range(size):
        shift[2 * ((m - 1) % size) + 0, 2 * m + 0] = 1.0
        shift[2 * ((m + 1) % size) + 1, 2 * m + 1] = 1.0
    return shift @ np.kron(np.eye(size), coin_matrix(theta))


def test_config_validation():
    psi = CoinAmplitudes(1, 0)
    with pytest.raises(ValueError):
        WalkConfig(1, 0.3, psi)
    with pytest.raises(ValueError):
        WalkConfig(3, 2.0, psi)
    with pytest.raises(TypeError):
        WalkConfig(3, 0.3, (1, 0))
    with pytest.raises(ValueError):
        TerminationSpec(eps=0.0)
    with pytest.raises(ValueError):
        TerminationSpec(max_steps=0)


@pytest.mark.parametrize("n", [2, 3, 5])
@pytest.mark.parametrize("theta", [0.3, math.pi / 4, 1.1])
def test_step_matches_dense_projected_unitary(n, theta):
    # the projected dense evolution (sink rows zeroed after each step) is an
    # independent implementation of the same map
    u = dense_step_matrix(n, theta)
    psi = initial_amplitudes(theta, 0.4, 1.3)
    state = initial_state(WalkConfig(n, theta, psi))
    vec = state.amplitudes.reshape(-1).copy()
    sinks = [0, 1, 4 * n, 4 * n + 1]
    for _ in range(25):
        state, al, ar = step(state, theta)
        vec = u @ vec
        assert al == pytest.approx(np.sum(np.abs(vec[0:2]) ** 2), abs=1e-15)
        assert ar == pytest.approx(np.sum(np.abs(vec[4 * n:]) ** 2), abs=1e-15)
        vec[sinks] = 0.0
        np.testing.assert_allclose(state.amplitudes.reshape(-1), vec, atol=1e-14)


def test_unprojected_step_is_unitary_inside():
    theta, n = 0.7, 3
    state = initial_state(WalkConfig(n, theta, initial_amplitudes(theta, 0.2, 0.5)))
    for _ in range(n - 1):
        state, _, _ = step(state, theta, project=False)
        assert state.norm2() == pytest.approx(1.0, abs=1e-14)


@given(st.sampled_from([2, 3, 4]), st.floats(0.05, 1.5), states)
def test_probability_is_conserved_every_step(n, theta, state):
    trace = run_walk(WalkConfig(n, theta, initial_amplitudes(theta, *state)), TerminationSpec(max_steps=400))
    total = trace.pl + trace.pr + trace.survival
    np.testing.assert_allclose(total, 1.0, atol=1e-13)
    assert np.all(np.diff(trace.pl) >= -1e-16)
    assert np.all(np.diff(trace.survival) <= 1e-15)


def test_block_propagator_matches_stepping():
    theta, n = 0.9, 4
    cfg = WalkConfig(n, theta, initial_amplitudes(theta, 0.6, 2.0))
    trace = run_walk(cfg, TerminationSpec(max_steps=600), keep_states=True)
    walker = iter_walk(cfg)
    cum_l = cum_r = 0.0
    for t in range(1, 601):
        state, al, ar = next(walker)
        cum_l += al
        cum_r += ar
        np.testing.assert_allclose(trace.states[t], state.amplitudes, atol=1e-12)
    assert trace.pl[600] == pytest.approx(cum_l, abs=1e-13)
    assert trace.pr[600] == pytest.approx(cum_r, abs=1e-13)


@pytest.mark.parametrize("theta", [0.25, math.pi / 4, 1.3])
@pytest.mark.parametrize("n", [2, 3])
def test_path_enumeration_oracle(theta, n):
    cfg = WalkConfig(n, theta, initial_amplitudes(theta, 0.7, 0.9))
    oracle = enumerate_paths_oracle(cfg, 12)
    trace = run_walk(cfg, TerminationSpec(max_steps=12), keep_states=True)
    for t in range(13):
        np.testing.assert_allclose(trace.states[t], oracle.states[t].amplitudes, atol=1e-12)
    np.testing.assert_allclose(np.diff(trace.pl), oracle.absorbed_left[1:], atol=1e-12)
    np.testing.assert_allclose(np.diff(trace.pr), oracle.absorbed_right[1:], atol=1e-12)


def test_oracle_step_limit():
    cfg = WalkConfig(2, 0.3, CoinAmplitudes(1, 0))
    with pytest.raises(ValueError):
        enumerate_paths_oracle(cfg, MAX_ORACLE_STEPS + 1)


def test_first_absorption_time():
    # the sinks are N steps away, so nothing is absorbed before step N
    theta, n = 0.5, 4
    trace = run_walk(WalkConfig(n, theta, CoinAmplitudes(1, 0)), TerminationSpec(max_steps=10))
    assert np.all(trace.pl[:n] == 0.0) and np.all(trace.pr[:n] == 0.0)
    assert trace.pl[n] > 0.0


@pytest.mark.parametrize("a, b", [(1, 0), (0, 1), (0.6, 0.8j), (math.sqrt(0.5), -1j * math.sqrt(0.5))])
def test_theta_zero_moves_ballistically(a, b):
    pl, pr = simulate_absorption(WalkConfig(3, 0.0, CoinAmplitudes(a, b)))
    assert pl == pytest.approx(abs(a) ** 2, abs=1e-15)
    assert pr == pytest.approx(abs(b) ** 2, abs=1e-15)


def test_half_pi_never_absorbs():
    cfg = WalkConfig(3, HALF_PI, CoinAmplitudes(0.6, 0.8))
    with pytest.raises(NonConvergenceError) as info:
        simulate_absorption(cfg, TerminationSpec(max_steps=5000))
    trace = info.value.trace
    assert trace.terminated == "step-limit"
    assert trace.survival[-1] == pytest.approx(1.0, abs=1e-14)
    assert trace.p_left == 0.0 and trace.p_right == 0.0


def test_half_pi_confines_walker():
    cfg = WalkConfig(4, HALF_PI, CoinAmplitudes(0.6, 0.8j))
    state = initial_state(cfg)
    for _ in range(9):
        state, _, _ = step(state, cfg.theta)
        occupied = np.flatnonzero(state.position_distribution() > 0) - cfg.n
        assert set(occupied) <= {-1, 0, 1}


def test_survival_below_eps_on_convergence():
    cfg = WalkConfig(5, 0.6, initial_amplitudes(0.6, 0.3))
    trace = run_walk(cfg, TerminationSpec(eps=1e-10))
    assert trace.converged
    assert trace.survival[-1] < 1e-10 <= trace.survival[-2]
    assert trace.steps == len(trace.survival) - 1


def test_eps_tightening_changes_result_by_at_most_eps():
    cfg = WalkConfig(4, 0.8, initial_amplitudes(0.8, 0.5, 1.0))
    loose = simulate_absorption(cfg, TerminationSpec(eps=1e-8))
    tight = simulate_absorption(cfg, TerminationSpec(eps=1e-15))
    assert abs(loose[0] - tight[0]) < 1e-8
