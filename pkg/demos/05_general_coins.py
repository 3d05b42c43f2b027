"""Any U(2) coin reduces to the one-parameter family.

With coin e^{i alpha}, e^{i beta} phases outside and e^{i gamma sigma_z}
inside, the walk has the same position distribution as the real coin
C(theta) started from exp(i gamma sigma_z) psi.
"""

import numpy as np

from qwabsorb import U2CoinParams, WalkConfig, initial_amplitudes, reduce_u2_coin
from qwabsorb.simulator import initial_state, step

params = U2CoinParams(theta=0.9, alpha=0.4, beta_phase=-1.3, gamma=0.7)
psi = initial_amplitudes(0.9, 0.35, 2.0)
theta, reduced = reduce_u2_coin(params, psi)
print(f"reduced start state: a={reduced.a:.4f}, b={reduced.b:.4f}")

full = initial_state(WalkConfig(4, params.theta, psi))
red = initial_state(WalkConfig(4, theta, reduced))
absorbed_full = absorbed_red = 0.0
for t in range(1, 41):
    full, fl, _ = step(full, params.theta, coin=params.matrix())
    red, rl, _ = step(red, theta)
    absorbed_full += fl
    absorbed_red += rl
    if t % 10 == 0:
        gap = np.max(np.abs(full.position_distribution() - red.position_distribution()))
        print(f"t={t:2d}: max difference in position probabilities {gap:.1e}, "
              f"absorbed left {absorbed_full:.6f} vs {absorbed_red:.6f}")
