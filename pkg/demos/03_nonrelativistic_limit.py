"""
Nonrelativistic limit
=====================

Near omega = m the Dirac wave approaches a sech^(1/k) profile. The modified
NLSE (mNLSE) keeps the first 1/2m correction; its centre density equals the
Dirac one exactly.
"""

import numpy as np

from nlde.nr_limit import compare_densities, mnlse_stationary
from nlde.solitary import ModelParams

x = np.linspace(0, 4, 9)
for ch, om in (("ss", 0.9), ("ss", 0.3), ("vv", 0.01)):
    c = compare_densities(ModelParams(1.0, 1.0, 1.0, ch), om, x)
    print(f"\n{ch} omega={om} expansion parameter {c.expansion_parameter:.3f} "
          f"(trusted: {c.within_validity})")
    print("    x    rho_nlde   rho_mnlse       f")
    for row in zip(x, c.rho_nlde, c.rho_mnlse, c.f):
        print("  {:4.1f}  {:9.6f}  {:9.6f}  {:8.5f}".format(*row))

# the exact stationary state of the mNLSE energy obeys a virial identity
print("\nmNLSE stationary states: 2 H1 +- (2+k) H2 - k H3 = 0")
for ch in ("ss", "vv"):
    s = 1 if ch == "ss" else -1
    for k in (1.0, 2.0, 3.0):
        p = mnlse_stationary(1.0, 1.0, k, 0.9, ch).parts()
        print(f"  {ch} k={k}: residual {2 * p.H1 + s * (2 + k) * p.H2 - k * p.H3:+.2e}  M={p.M:.6f}")
