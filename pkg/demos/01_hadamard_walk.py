"""Where does a Hadamard walker get absorbed?

Run with ``python3 demos/01_hadamard_walk.py``.
"""

import math

from qwabsorb import (
    CoinAmplitudes,
    WalkConfig,
    absorption_from_coefficients,
    coefficients_exact,
    initial_amplitudes,
    pl_pr_asymptotic,
    run_walk,
)

theta = math.pi / 4

# %% Start in |L> on a line with sinks at -5 and +5 and evolve until less
# than 1e-12 of the probability is still on the line.
trace = run_walk(WalkConfig(5, theta, CoinAmplitudes(1, 0)))
print(f"absorbed after {trace.steps} steps: P_L = {trace.p_left:.12f}, P_R = {trace.p_right:.12f}")

# the cumulative curves rise fast at first and then creep towards the limit
for t in (5, 10, 20, 50, 100, trace.steps):
    print(f"  t={t:4d}  P_L(t)={trace.pl[t]:.6f}  P_R(t)={trace.pr[t]:.6f}  left on line={trace.survival[t]:.2e}")

# %% The same number from the generating-function integrals.  The three
# coefficients cover every initial state at once.
c = coefficients_exact(theta, 5)
pl, pr = absorption_from_coefficients(c, CoinAmplitudes(1, 0))
print(f"\nquadrature: C1={c.c1:.12f} C2={c.c2:.12f} C3={c.c3:.12f}")
print(f"quadrature P_L for |L>: {pl:.12f}  (simulation minus quadrature: {trace.p_left - pl:.1e})")

# %% For long lines only the weight rho^2 on the coin eigenvector |theta->
# matters.  rho = 1/sqrt(2) splits the walker evenly.
for rho in (0.0, 0.5, 1 / math.sqrt(2), 1.0):
    asym = pl_pr_asymptotic(theta, rho).p_left
    sim = run_walk(WalkConfig(8, theta, initial_amplitudes(theta, rho))).p_left
    print(f"rho={rho:.4f}  large-N P_L={asym:.6f}  simulated at N=8: {sim:.6f}")
