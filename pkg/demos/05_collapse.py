"""
Self-similar collapse
=====================

A sech^(1/k) profile of width 1/G with a quadratic chirp reduces the NLSE to
one degree of freedom. At k = 2 the width can only reach zero above the
critical mass M*; beyond it G ~ (t_c - t)^(2/(k+2)).
"""

import math

from nlde.blowup import CollapseParams, barrier_width, constants, critical_mass, evolve

c = constants(2.0)
print(f"k=2 constants: C1={c.C1:.12f} (pi) C3={c.C3:.12f} (pi/8) C4={c.C4:.12f} (pi/2)")
Ms = critical_mass(1.0, 1.0)
print(f"sqrt(2m) g M* = {math.sqrt(2) * Ms:.10f}   pi sqrt(3)/2 = {math.pi * math.sqrt(3) / 2:.10f}")

run = evolve(CollapseParams("nlse", 2.0, 1.0, 1.0, 0.9 * Ms), 10.0, Gdot0=-0.05)
print(f"\n0.9 M*, moving inward: {run.outcome.kind.value} at G_min={run.outcome.G_min:.6f}")

for k in (2.0, 2.5, 3.0):
    params = CollapseParams("nlse", k, 1.0, 1.0, 1.1 * Ms)
    bw = barrier_width(params)
    run = evolve(params, 10.0 if bw is None else 0.5 * bw)
    o = run.outcome
    print(f"k={k}: {o.kind.value} at t_c={o.t_c:.6f}, exponent {o.fitted_exponent:.5f} "
          f"(2/(k+2)={2 / (k + 2):.5f}), energy drift {run.energy_drift:.1e}")

# with the 1/2m correction the expansion itself fails before the width vanishes
Ms = critical_mass(0.5, 1.0)
for model in ("mnlse_ss", "mnlse_vv"):
    for ratio in (1.1, 2.0):
        run = evolve(CollapseParams(model, 2.0, 0.5, 1.0, ratio * Ms), 10.0)
        print(f"{model} {ratio} M*: {run.outcome.kind.value}, last G={run.trajectory[-1].G:.4g}, "
              f"max correction ratio {run.correction_ratio.max():.3f}")
