"""How fast P_L(N) settles: Delta(N) = P_L(limit) - P_L(N) ~ exp(mu + nu N)."""

import math

import numpy as np

from qwabsorb import convergence_series, fit_exponential, slope_sweep

rho = 1 / math.sqrt(2)

for theta in (math.pi / 4, 0.4):
    series = convergence_series(theta, rho, 0.0, 2, 10)
    fit = fit_exponential(series)
    print(f"theta={theta:.4f}: mu={fit.mu:.4f} nu={fit.nu:.4f} (rms of log residuals {fit.rms_residual:.3f})")
    for n, d in zip(series.n_values, series.deltas):
        print(f"   N={n:2d}  Delta={d:+.3e}")

# %% Larger coin angles converge faster.  Past theta ~ 1.25 the deviations for
# N close to 10 reach the rounding floor and flip sign, so those fits say
# little; the sweep reports them anyway.
print("\n theta      nu")
for p in slope_sweep(np.arange(0.2, 1.41, 0.1), rho, 2, 10, workers=2):
    print(f"{p.theta:6.2f}  {p.nu:8.3f}" if p.nu is not None else f"{p.theta:6.2f}  {p.error}")
