"""Frequency from charge, bound-state domains in (k, g), and the double-hump crossover."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import ConvergenceError, DomainError
from .solitary import (
    Channel,
    ModelParams,
    WaveSolution,
    center_density,
    charge_integral,
    energy_closed_form,
    energy_quadrature,
    make_wave,
    shape_factor,
)

N_SCAN = 512
ROOT_XTOL = 1e-12


@dataclass(frozen=True)
class DomainMapRow:
    """Bound-state window in the coupling g (not g**2) for one exponent k.

    ``lower_open``/``upper_open`` flag a window that reaches the first/last
    grid point, i.e. no boundary was resolved on that side.
    """

    k: float
    channel: Channel
    g_min: float | None
    g_max: float | None
    omega_at_gmin: float | None
    omega_at_gmax: float | None
    lower_open: bool = False
    upper_open: bool = False
    spot_check_error: float = 0.0

    @property
    def empty(self) -> bool:
        return self.g_min is None


def scan_grid(m: float, n: int = N_SCAN) -> np.ndarray:
    """Uniform interior points of (0, m) plus geometric clusters at both ends."""
    uniform = m * (np.arange(n) + 0.5) / n
    edge = m * np.logspace(-10, np.log10(0.5 / n), 40)
    return np.unique(np.concatenate([edge, uniform, m - edge]))


def charge_curve(params: ModelParams, omegas) -> np.ndarray:
    """Closed-form Q(omega), vectorised over omega."""
    om = np.asarray(omegas, dtype=float)
    m, k = params.m, params.k
    alpha2 = (m - om) / (m + om)
    beta_k = k * np.sqrt((m - om) * (m + om))
    pref = center_density(m, params.g2, k, om) / beta_k
    return pref * charge_integral(alpha2, k, params.channel)


def _charge(params, omega):
    m, k = params.m, params.k
    alpha2 = (m - omega) / (m + omega)
    beta_k = k * math.sqrt((m - omega) * (m + omega))
    return center_density(m, params.g2, k, omega) / beta_k * charge_integral(alpha2, k, params.channel)


def solve_omega(params: ModelParams, Q_target: float) -> list[float]:
    """All omega in (0, m) with Q(omega) = Q_target, ascending.

    An empty list means no solution exists; numerical trouble raises
    ConvergenceError instead.
    """
    if not Q_target > 0:
        raise DomainError("Q_target must be positive")
    grid = scan_grid(params.m)
    F = charge_curve(params, grid) - Q_target
    if not np.all(np.isfinite(F)):
        raise ConvergenceError("non-finite charge during frequency scan")
    f = lambda w: _charge(params, w) - Q_target
    tol = 1e-9 * Q_target
    roots = []
    for i in range(len(grid) - 1):
        a, b = grid[i], grid[i + 1]
        if F[i] == 0.0:
            roots.append(a)
        elif F[i] * F[i + 1] < 0:
            # near either end Q varies on the scale of omega or m - omega
            xtol = ROOT_XTOL * min(params.m, a, params.m - b)
            roots.append(brentq(f, a, b, xtol=xtol, rtol=4 * np.finfo(float).eps))
    # tangential roots: local extrema of F that approach zero without a sign change
    for i in range(1, len(grid) - 1):
        if F[i - 1] * F[i] > 0 and F[i] * F[i + 1] > 0:
            if abs(F[i]) < abs(F[i - 1]) and abs(F[i]) < abs(F[i + 1]):
                res = minimize_scalar(
                    lambda w: abs(f(w)), bounds=(grid[i - 1], grid[i + 1]), method="bounded",
                    options={"xatol": ROOT_XTOL * params.m},
                )
                if res.fun <= tol:
                    roots.append(float(res.x))
    roots = sorted(roots)
    out = []
    for r in roots:
        if abs(f(r)) > tol and not _resolved_to_ulp(f, r):
            raise ConvergenceError(f"root at omega={r} misses the charge target", estimate=r)
        if not out or r - out[-1] > 10 * ROOT_XTOL * params.m:
            out.append(float(r))
    return out


def _resolved_to_ulp(f, r, n=4):
    # near omega -> m neighbouring doubles already differ by more than the
    # charge tolerance; a sign change within a few ulps is the best attainable
    h = n * np.spacing(r)
    return f(r - h) * f(r + h) <= 0.0


def is_bound(w: WaveSolution, Q: float = 1.0) -> bool:
    """H_sol < m Q (strict, so the omega -> m marginal case is unbound)."""
    return energy_closed_form(w, Q).bound


def _bound_root(params: ModelParams, Q: float):
    """Most deeply bound (lowest H_sol) root, or None."""
    best = None
    for om in solve_omega(params, Q):
        obs = energy_closed_form(make_wave(params, om), Q)
        if obs.bound and (best is None or obs.H_sol < best[1]):
            best = (om, obs.H_sol)
    return best


def bound_state_domain(
    k: float,
    Q: float,
    g_grid,
    channel,
    m: float = 1.0,
    tol: float = 1e-4,
    spot_check_every: int = 10,
) -> DomainMapRow:
    """Range of couplings g admitting a bound solitary wave of charge Q.

    Boundaries are located on ``g_grid`` and refined by bisection to ``tol``.
    Every ``spot_check_every``-th bound grid point is re-evaluated by
    quadrature; the worst relative H_sol discrepancy is reported.
    """
    channel = Channel(channel)
    g_grid = np.asarray(g_grid, dtype=float)
    if np.any(np.diff(g_grid) <= 0):
        raise DomainError("g_grid must be strictly ascending")

    def probe(g):
        return _bound_root(ModelParams(m, g * g, k, channel), Q)

    hits = [probe(g) for g in g_grid]
    idx = [i for i, h in enumerate(hits) if h is not None]
    if not idx:
        return DomainMapRow(k, channel, None, None, None, None)

    spot = 0.0
    for n, i in enumerate(idx):
        if n % spot_check_every == 0:
            g = g_grid[i]
            wave = make_wave(ModelParams(m, g * g, k, channel), hits[i][0])
            quad = energy_quadrature(wave, Q).H_sol
            spot = max(spot, abs(quad / hits[i][1] - 1.0))

    def refine(g_out, g_in, hit_in):
        while abs(g_in - g_out) > tol:
            mid = 0.5 * (g_in + g_out)
            h = probe(mid)
            if h is None:
                g_out = mid
            else:
                g_in, hit_in = mid, h
        # the bracket midpoint is within tol/2 of the true boundary
        return 0.5 * (g_in + g_out), hit_in

    first, last = idx[0], idx[-1]
    if first == 0:
        g_min, om_min, lower_open = g_grid[0], hits[0][0], True
    else:
        g_min, h = refine(g_grid[first - 1], g_grid[first], hits[first])
        om_min, lower_open = h[0], False
    if channel is Channel.SCALAR_SCALAR:
        g_max = om_max = None
        upper_open = last == len(g_grid) - 1
    elif last == len(g_grid) - 1:
        g_max, om_max, upper_open = g_grid[-1], hits[-1][0], True
    else:
        g_max, h = refine(g_grid[last + 1], g_grid[last], hits[last])
        om_max, upper_open = h[0], False
    return DomainMapRow(
        k, channel, float(g_min), None if g_max is None else float(g_max),
        float(om_min), None if om_max is None else float(om_max),
        lower_open, upper_open, spot,
    )


# ---------------------------------------------------------------- double hump

_CAUCHY_RADIUS = 0.5
_CAUCHY_POINTS = 64


def center_curvature(w: WaveSolution) -> float:
    """Coefficient c2 in rho(x) = rho(0) [1 + c2 (beta_k x)^2 + O(x^4)].

    Taken from a Cauchy contour integral of the analytic density around the
    origin (radius 0.5 in beta_k x, well inside the nearest singularity at
    distance pi/2), so no finite differencing is involved.
    """
    phi = 2.0 * np.pi * np.arange(_CAUCHY_POINTS) / _CAUCHY_POINTS
    u = _CAUCHY_RADIUS * np.exp(1j * phi)
    h = shape_factor(u, w.alpha**2, w.k, w.channel)
    a2 = np.mean(h * np.exp(-2j * phi)) / _CAUCHY_RADIUS**2
    return float(a2.real)


def omega_c(k: float, m: float = 1.0, channel=Channel.SCALAR_SCALAR) -> float | None:
    """Frequency below which the scalar-scalar density is double humped.

    Vector-vector densities are never double humped; returns None.
    """
    if Channel(channel) is Channel.VECTOR_VECTOR:
        return None
    if not k > 0:
        raise DomainError("k must be positive")
    params = ModelParams(m, 1.0, k, Channel.SCALAR_SCALAR)
    c2 = lambda om: center_curvature(make_wave(params, om))
    lo, hi = 1e-9 * m, (1 - 1e-9) * m
    if not (c2(lo) > 0 > c2(hi)):
        raise ConvergenceError("center curvature does not change sign on (0, m)")
    return float(brentq(c2, lo, hi, xtol=1e-15 * m, rtol=4 * np.finfo(float).eps))
