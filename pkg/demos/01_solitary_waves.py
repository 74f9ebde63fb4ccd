"""
Exact solitary waves of the nonlinear Dirac equation
=====================================================

A wave is fixed by the mass m, the coupling g^2, the exponent k, the channel
(scalar-scalar "ss" or vector-vector "vv") and its frequency 0 < omega < m.
"""

import math

import numpy as np

from nlde.solitary import (
    ModelParams,
    charge_closed_form,
    charge_quadrature,
    density_at,
    energy_closed_form,
    energy_quadrature,
    make_wave,
    t11_residual,
)

# k = 1, g^2 = 2, omega = 1/sqrt(2): a wave of unit charge
w = make_wave(ModelParams(m=1.0, g2=2.0, k=1.0, channel="ss"), 1 / math.sqrt(2))
print(f"alpha={w.alpha:.6f} beta={w.beta:.6f} rho(0)={w.amplitude_pow:.6f}")
print(f"Q closed form {charge_closed_form(w):.15f}, by quadrature {charge_quadrature(w):.15f}")

obs = energy_closed_form(w, Q=1.0)
print(f"H_sol = {obs.H_sol:.15f}   asinh(1) = {math.asinh(1):.15f}   bound: {obs.bound}")

# the same decomposition by direct quadrature of the energy density
q = energy_quadrature(w)
print(f"H1 {q.H1:.12f} H2 {q.H2:.12f} H3 {q.H3:.12f} (H3 = H1/k)")

# the first integral T11 = omega rho - m psibar psi + L_I vanishes pointwise
x = np.linspace(-10, 10, 1001) / w.beta_k
print("max |T11| / (omega rho):", np.max(np.abs(t11_residual(w, x)) / (w.omega * density_at(w, x))))

# scalar-scalar waves become double humped at low frequency
print("\n  omega   rho(0)    max rho   shape")
for om in (0.9, 0.6, 0.5, 0.4, 0.3):
    w = make_wave(ModelParams(1.0, 1.0, 1.0, "ss"), om)
    rho = density_at(w, np.linspace(-5, 5, 2001))
    shape = "double" if rho.max() > rho[1000] * (1 + 1e-12) else "single"
    print(f"  {om:4.2f}  {rho[1000]:8.5f}  {rho.max():8.5f}   {shape}")
