"""
Frequency from charge, and where bound states exist
====================================================

Fixing the charge Q turns the frequency into the root of Q(omega) = Q. A wave
is bound when its energy is below m (at Q = 1).
"""

import math

import numpy as np

from nlde.omega_solver import bound_state_domain, omega_c, solve_omega
from nlde.solitary import ModelParams, energy_closed_form, make_wave

print("k = 1, vector-vector: omega = cos(g^2/2) and no solution once g^2 >= pi")
for g2 in (0.5, 1.0, 2.0, 3.0, 3.2):
    roots = solve_omega(ModelParams(1.0, g2, 1.0, "vv"), 1.0)
    if roots:
        H = energy_closed_form(make_wave(ModelParams(1.0, g2, 1.0, "vv"), roots[0]), 1.0).H_sol
        print(f"  g2={g2:3.1f} omega={roots[0]:.12f} cos={math.cos(g2 / 2):.12f} H_sol={H:.6f}")
    else:
        print(f"  g2={g2:3.1f} no root")

# for k > 2 the charge diverges at both ends of (0, m): two roots
params = ModelParams(1.0, 1.0, 3.0, "ss")
print("\nk = 3, scalar-scalar, Q = 3:", solve_omega(params, 3.0))

print("\nvector-vector bound-state window in g at Q = 1")
grid = np.linspace(0.05, 4.0, 80)
for k in np.arange(1.0, 2.8, 0.2):
    row = bound_state_domain(float(k), 1.0, grid, "vv")
    if row.empty:
        print(f"  k={k:3.1f}  none")
    else:
        print(f"  k={k:3.1f}  g in [{row.g_min:.4f}, {row.g_max:.4f}]")

print("\ndouble-hump crossover (scalar-scalar) against m k/(k+1)")
for k in (0.5, 1.0, 2.0, 3.0):
    print(f"  k={k:3.1f}  omega_c={omega_c(k):.12f}  oracle={k / (k + 1):.12f}")
