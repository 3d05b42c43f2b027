"""The relative phase beta stops mattering as the line grows.

Fix the Hadamard coin and rho = 1/sqrt(2), for which the large-N answer is
P_L = 1/2, and scan beta around the circle for a few line lengths.
"""

import math

import numpy as np

from qwabsorb import parameter_sweep

theta, rho = math.pi / 4, 1 / math.sqrt(2)
betas = np.linspace(0, 2 * math.pi, 25)

for n in (2, 3, 4, 6, 10):
    rows = parameter_sweep("beta", {"theta": theta, "rho": rho}, betas, n)
    dev = np.array([r.deviation for r in rows])
    worst = betas[np.argmax(np.abs(dev))]
    print(f"N={n:2d}: max |P_L - 1/2| = {np.abs(dev).max():.2e} at beta = {worst:.3f}")

# %% At N = 2 the deviation follows a simple profile with extremes at 0 and pi.
rows = parameter_sweep("beta", {"theta": theta, "rho": rho}, betas, 2)
for r in rows[::3]:
    bar = "#" * int(round(abs(r.deviation) * 400))
    print(f"beta={r.grid_value:5.2f} {r.deviation:+.4f} {bar}")
