"""
Scale-transformation stability indicators
=========================================

Stretch a wave at fixed mass, psi -> beta^(1/2) psi(beta x), and look at the
curvature of the energy at beta = 1. For the NLSE and the mNLSE its sign is a
stability indicator; for the Dirac equation it is reported only.
"""

from nlde.nr_limit import mnlse_stationary, nlse_profile
from nlde.solitary import ModelParams, make_wave
from nlde.stability import second_variation, vk_slope

print("   k   model      d2H/db2 (closed)  finite diff.      verdict")
for k in (0.5, 1.0, 1.5, 2.0, 2.5, 3.0):
    cases = [
        ("nlse", nlse_profile(1.0, 1.0, k, 1.0)),
        ("nlde", make_wave(ModelParams(1.0, 1.0, k, "ss"), 0.9)),
        ("mnlse_ss", mnlse_stationary(1.0, 1.0, k, 0.9, "ss")),
        ("mnlse_vv", mnlse_stationary(1.0, 1.0, k, 0.9, "vv")),
    ]
    for model, sol in cases:
        r = second_variation(model, sol)
        print(f"  {k:3.1f}  {model:9s} {r.second_derivative_at_1:+.10f}  "
              f"{r.fd_second_derivative:+.10f}  {r.classification.value}")

print("\nslope criterion dM/domega < 0 for NLSE waves")
for k in (1.0, 2.0, 3.0):
    v = vk_slope(k, -1.0)
    print(f"  k={k}: M ~ (-omega)^{v.exponent:+.3f}  -> {v.verdict}")
