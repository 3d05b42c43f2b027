"""Finite-N coefficients three ways, and how they approach the closed forms.

The direct route integrates |A|^2, |B|^2 and conj(A) B built from the
generating functions.  The Chebyshev route rewrites the integrands as
rational functions of T_k(c(phi)).  The reformulated route needs only two
integrals, with C2 = 1 - C1.  All three should agree to rounding.
"""

import math

import numpy as np

from qwabsorb import coefficients_asymptotic, coefficients_exact, coefficients_reformulated
from qwabsorb.exact import calibrate_reformulation_prefactor, integrand_direct

theta = 0.4
ratio, k = calibrate_reformulation_prefactor()
print(f"reformulated prefactor: {k:.15f} = 1/(4 pi) (calibration ratio {ratio})\n")

print("   N        C1 direct       C1 chebyshev     C1 reformulated   |C - C_inf|    panels")
limit = coefficients_asymptotic(theta)
for n in (2, 4, 8, 16, 32, 64):
    d = coefficients_exact(theta, n)
    ch = coefficients_exact(theta, n, form="chebyshev")
    rf = coefficients_reformulated(theta, n)
    gap = max(abs(d.c1 - limit.c1), abs(d.c3 - limit.c3))
    print(f"{n:4d}  {d.c1:.15f}  {ch.c1:.15f}  {rf.c1:.15f}  {gap:10.2e}  {d.panels:6d}")

# %% Why the quadrature refines adaptively: the integrand has peaks whose
# width shrinks roughly like N^-3.
phi = np.linspace(0, 2 * math.pi, 2_000_001)
for n in (4, 8, 16, 32):
    i1, _, _ = integrand_direct(phi, theta, n)
    top = int(np.argmax(i1))
    half = 0.5 * i1[top]
    lo, hi = top, top
    while lo > 0 and i1[lo - 1] > half:
        lo -= 1
    while hi < phi.size - 1 and i1[hi + 1] > half:
        hi += 1
    print(f"N={n:3d}: tallest |A|^2 peak {i1[top]:9.1f} at phi={phi[top]:.4f}, "
          f"full width at half height {phi[hi] - phi[lo]:.1e} rad")
