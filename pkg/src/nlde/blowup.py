"""Self-similar collapse of NLSE and mNLSE waves.

The ansatz psi = A(t) f(y/G) exp i[Lambda(t) y^2 + omega t], f = sech^(1/k),
reduces the dynamics to one degree of freedom, the width G(t). Mass
conservation fixes A^2 = M/(C1 G); the Lagrange equation for Lambda ties it to
dG/dt, and energy conservation leaves a first-order equation
dG/dt = -sqrt(F(G)). Since F is known in closed form the trajectory is the
quadrature t(G) = int dG / sqrt(F).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.optimize import brentq

from .errors import ConvergenceError, DomainError
from .special_fn import QuadratureSpec, integrate

BREAKDOWN_RATIO = 0.5
G_STOP_FRACTION = 1e-6

_QUAD = QuadratureSpec(relative_tolerance=1e-11, absolute_tolerance=1e-300, max_subdivisions=500)


# ---------------------------------------------------------------- shape constants


@dataclass(frozen=True)
class CollapseConstants:
    """Shape integrals of f(z) = sech^gamma(z), gamma = 1/k.

    C1 = int f^2, C2 = int z^2 f^2, C3 = int f'^2, C4 = int f^(2k+2),
    E1 = int f'^2 f^(2k+2), E2 = int z^2 f^(2k+2). ``certificate`` holds the
    relative gap between the Gamma-function forms of C1, C3, C4, E1 and
    direct quadrature; ``refinement`` the gap of C2, E2 between two
    quadrature tolerances.
    """

    k: float
    gamma: float
    C1: float
    C2: float
    C3: float
    C4: float
    E1: float
    E2: float
    certificate: dict = field(default_factory=dict, compare=False)
    refinement: dict = field(default_factory=dict, compare=False)


def _gamma_forms(k: float) -> dict:
    g = 1.0 / k
    G = math.gamma
    sp = math.sqrt(math.pi)
    return {
        "C1": sp * G(g) / G(g + 0.5),
        "C3": sp * g * G(g + 1.0) / (2.0 * G(g + 1.5)),
        "C4": sp * G((k + 1) * g) / G((k + 1) * g + 0.5),
        "E1": sp * g * g * G((k + 2) * g) / (2.0 * G((k + 2) * g + 1.5)),
    }


def _sech(z):
    e = math.exp(-2.0 * abs(z))
    return 2.0 * math.sqrt(e) / (1.0 + e)


def _quadrature_forms(k: float, spec: QuadratureSpec) -> dict:
    g = 1.0 / k
    p = 2.0 * k + 2.0
    # f' = -g sech^g tanh, so f'^2 = g^2 sech^(2g) tanh^2
    integrands = {
        "C1": lambda z: _sech(z) ** (2 * g),
        "C2": lambda z: z * z * _sech(z) ** (2 * g),
        "C3": lambda z: g * g * _sech(z) ** (2 * g) * math.tanh(z) ** 2,
        "C4": lambda z: _sech(z) ** (p * g),
        "E1": lambda z: g * g * _sech(z) ** (2 * g + p * g) * math.tanh(z) ** 2,
        "E2": lambda z: z * z * _sech(z) ** (p * g),
    }
    return {name: 2.0 * integrate(f, 0.0, np.inf, spec) for name, f in integrands.items()}


def constants(k: float) -> CollapseConstants:
    if not k > 0:
        raise DomainError("k must be positive")
    closed = _gamma_forms(k)
    fine = _quadrature_forms(k, QuadratureSpec(1e-13, 1e-300, 500))
    coarse = _quadrature_forms(k, QuadratureSpec(1e-10, 1e-300, 500))
    cert = {n: abs(fine[n] / closed[n] - 1.0) for n in closed}
    refine = {n: abs(coarse[n] / fine[n] - 1.0) for n in ("C2", "E2")}
    return CollapseConstants(
        k=k, gamma=1.0 / k,
        C1=closed["C1"], C2=fine["C2"], C3=closed["C3"], C4=closed["C4"],
        E1=closed["E1"], E2=fine["E2"],
        certificate=cert, refinement=refine,
    )


def hypergeometric_c2_e2(k: float) -> tuple[float, float]:
    """C2 and E2 from their 4F3 series at argument -1 (cross-check; needs mpmath)."""
    import mpmath as mp

    g = mp.mpf(1) / k
    h = (k + 1) * g
    C2 = 2 / g**3 * mp.power(4, g - 1) * mp.hyper([g, g, g, 2 * g], [g + 1, g + 1, g + 1], -1)
    E2 = mp.power(2, 2 * h - 1) / h**3 * mp.hyper([h, h, h, 2 * h], [h + 1, h + 1, h + 1], -1)
    return float(C2), float(E2)


def critical_mass(m: float, g: float) -> float:
    """M* at k = 2: sqrt(2m) g M* = sqrt(3 C1^2 C3 / C4) = pi sqrt(3)/2."""
    if not (m > 0 and g > 0):
        raise DomainError("m and g must be positive")
    c = _gamma_forms(2.0)
    return math.sqrt(3.0 * c["C1"] ** 2 * c["C3"] / c["C4"]) / (math.sqrt(2.0 * m) * g)


# ---------------------------------------------------------------- dynamics


class CollapseModel(str, Enum):
    NLSE = "nlse"
    MNLSE_SS = "mnlse_ss"
    MNLSE_VV = "mnlse_vv"


class OutcomeKind(str, Enum):
    COLLAPSE = "collapse"
    TURNING_POINT = "turning_point"
    BREAKDOWN = "breakdown"
    INCOMPLETE = "incomplete"  # t_max reached first


@dataclass(frozen=True)
class CollapseParams:
    model: CollapseModel
    k: float
    m: float
    g2: float
    M: float

    def __post_init__(self):
        object.__setattr__(self, "model", CollapseModel(self.model))
        for name in ("k", "m", "g2", "M"):
            val = getattr(self, name)
            if not (np.isfinite(val) and val > 0):
                raise DomainError(f"{name} must be positive and finite, got {val}")

    @property
    def sign(self) -> int:
        return {CollapseModel.NLSE: 0, CollapseModel.MNLSE_SS: 1, CollapseModel.MNLSE_VV: -1}[self.model]


@dataclass(frozen=True)
class CollapseState:
    t: float
    G: float
    Lambda: float
    Gdot: float


@dataclass(frozen=True)
class CollapseOutcome:
    kind: OutcomeKind
    t_c: float | None = None
    fitted_exponent: float | None = None
    G_min: float | None = None
    t_b: float | None = None


@dataclass
class CollapseRun:
    params: CollapseParams
    E: float
    G0: float
    trajectory: list
    outcome: CollapseOutcome
    tau: np.ndarray  # t_c - t along the trajectory (collapse only)
    E_check: np.ndarray
    correction_ratio: np.ndarray
    energy_drift: float  # max |E_check - E| relative to the largest energy term


class Dynamics:
    """Closed-form pieces of the reduced energy for one parameter set."""

    def __init__(self, params: CollapseParams, consts: CollapseConstants | None = None):
        self.p = params
        self.c = consts or constants(params.k)
        c, p = self.c, params
        self.mu = p.M / c.C1
        # correction ratio eps(G) = eps_coef G^(-k)
        self.eps_coef = p.g2 / (2 * p.m) * self.mu**p.k * c.E2 / c.C2 if p.sign else 0.0

    def correction_ratio(self, G):
        return self.eps_coef * np.asarray(G, dtype=float) ** (-self.p.k)

    def stiffness(self, G):
        """D(G) = 1 +- eps(G); 1 for the NLSE."""
        return 1.0 + self.p.sign * self.correction_ratio(G)

    def potential_terms(self, G):
        """(dispersive, gradient-coupling, interaction) parts of V(G)."""
        c, p = self.c, self.p
        G = np.asarray(G, dtype=float)
        disp = c.C3 / c.C1 / (2 * p.m * G * G)
        grad = p.sign * p.g2 / (4 * p.m**2) * self.mu**p.k * c.E1 / c.C1 * G ** (-(p.k + 2))
        inter = -p.g2 / (p.k + 1) * c.C4 / c.C1 * (self.mu / G) ** p.k
        return disp, grad, inter

    def potential_powers(self):
        """V(G) as a list of (coefficient, power) pairs."""
        c, p = self.c, self.p
        out = [(c.C3 / c.C1 / (2 * p.m), -2.0), (-p.g2 / (p.k + 1) * c.C4 / c.C1 * self.mu**p.k, -p.k)]
        if p.sign:
            out.append((p.sign * p.g2 / (4 * p.m**2) * self.mu**p.k * c.E1 / c.C1, -(p.k + 2.0)))
        return out

    def potential(self, G):
        d, e, i = self.potential_terms(G)
        return d + e + i

    def kinetic(self, G, Gdot):
        c, p = self.c, self.p
        return 0.5 * p.m * c.C2 / c.C1 * np.asarray(Gdot) ** 2 / self.stiffness(G)

    def lam(self, G, Gdot):
        """Lambda = m Gdot / (2 G D(G))."""
        return self.p.m * np.asarray(Gdot) / (2.0 * np.asarray(G) * self.stiffness(G))

    def gdot_squared(self, G, E):
        c, p = self.c, self.p
        return 2.0 * c.C1 * self.stiffness(G) * (E - self.potential(G)) / (p.m * c.C2)


def barrier_width(params: CollapseParams, consts: CollapseConstants | None = None) -> float | None:
    """NLSE, k > 2: the width at which V(G) peaks; a wave at rest inside it collapses."""
    p = params
    if p.sign or not p.k > 2:
        return None
    dyn = Dynamics(p, consts)
    (a, _), (b, _) = dyn.potential_powers()
    # V = a G^-2 + b G^-k with b < 0; dV/dG = 0 at G^(k-2) = -k b / (2 a)
    return float((-p.k * b / (2.0 * a)) ** (1.0 / (p.k - 2.0)))


def energy_functional(state: CollapseState, params: CollapseParams, consts: CollapseConstants | None = None) -> float:
    """Energy per unit mass from (G, Lambda) in the Lambda form."""
    dyn = Dynamics(params, consts)
    c, p, G, L = dyn.c, params, state.G, state.Lambda
    E = (
        c.C3 / c.C1 / (2 * p.m * G * G)
        + 4 * L * L * c.C2 / c.C1 * G * G / (2 * p.m)
        - p.g2 / (p.k + 1) * c.C4 / c.C1 * (dyn.mu / G) ** p.k
    )
    if p.sign:
        E += p.sign * p.g2 / (4 * p.m**2) * dyn.mu**p.k * (
            c.E1 / c.C1 * G ** (-(p.k + 2)) + c.E2 / c.C1 * 4 * L * L * G ** (2 - p.k)
        )
    return float(E)


def delta_H(state: CollapseState, params: CollapseParams, consts: CollapseConstants | None = None) -> float:
    """Gradient-coupling correction per unit mass (rest frame); 0 for the NLSE."""
    dyn = Dynamics(params, consts)
    c, p, G, L = dyn.c, params, state.G, state.Lambda
    return float(
        p.sign * p.g2 / (4 * p.m**2) * dyn.mu**p.k
        * (c.E1 / c.C1 * G ** (-(p.k + 2)) + c.E2 / c.C1 * 4 * L * L * G ** (2 - p.k))
    )


def correction_ratio(G: float, params: CollapseParams, consts: CollapseConstants | None = None) -> float:
    """(g^2/2m) (M/(C1 G))^k E2/C2; the expansion is abandoned at BREAKDOWN_RATIO."""
    p = params
    c = consts or constants(p.k)
    return float(p.g2 / (2 * p.m) * (p.M / (c.C1 * G)) ** p.k * c.E2 / c.C2)


def _h_offset(dyn, r, side, d):
    """F(G)/d at G = r + side*d, where r is a zero of F (V(r) = E).

    V(r) - V(G) is formed term by term with expm1/log1p and the offset d is
    carried exactly, so the ratio keeps full precision as d -> 0.
    """
    pre = 2.0 * dyn.c.C1 / (dyn.p.m * dyn.c.C2)
    terms = dyn.potential_powers()
    if d == 0.0:
        dv = sum(c * p * r ** (p - 1.0) for c, p in terms)
        return pre * float(dyn.stiffness(r)) * (-side * dv)
    G = r + side * d
    x = -side * d / G
    diff = sum(c * G**p * math.expm1(p * math.log1p(x)) for c, p in terms)
    return pre * float(dyn.stiffness(G)) * diff / d


def _plain_time(dyn, E, a, b):
    """int_a^b dG / sqrt(F(G))."""
    return integrate(lambda G: 1.0 / math.sqrt(float(dyn.gdot_squared(G, E))), a, b, _QUAD)


def _offset_time(dyn, r, side, d0, d1):
    """The same integral in the offset d = |G - r| from a zero r of F, over [d0, d1].

    With d0 = 0 the 1/sqrt(d) singularity goes into the quadrature weight.
    """
    if d0 == 0.0:
        f = lambda d: 1.0 / math.sqrt(_h_offset(dyn, r, side, d))
        return integrate(f, 0.0, d1, _QUAD, endpoint_exponents=(-0.5, 0.0))
    f = lambda d: 1.0 / math.sqrt(_h_offset(dyn, r, side, d) * d)
    return integrate(f, d0, d1, _QUAD)


def evolve(
    params: CollapseParams,
    G0: float,
    t_max: float = np.inf,
    Gdot0: float = 0.0,
    n_points: int = 600,
    consts: CollapseConstants | None = None,
) -> CollapseRun:
    """Follow G(t) inward from G0 until collapse, a turning point or breakdown.

    Gdot0 <= 0 (at rest or moving inward). Terminations: G < G_STOP_FRACTION * G0
    (collapse), dG/dt = 0 ahead (turning point; the run then returns to G0),
    or, for the mNLSE, the correction ratio reaching BREAKDOWN_RATIO.
    """
    if not G0 > 0:
        raise DomainError("G0 must be positive")
    if Gdot0 > 0:
        raise DomainError("only inward or resting starts are supported (Gdot0 <= 0)")
    dyn = Dynamics(params, consts)
    p, k = params, params.k
    E = float(dyn.potential(G0) + dyn.kinetic(G0, Gdot0))
    F = lambda G: float(dyn.gdot_squared(G, E))

    G_stop = G_STOP_FRACTION * G0
    G_b = (dyn.eps_coef / BREAKDOWN_RATIO) ** (1.0 / k) if p.sign else 0.0
    at_rest = Gdot0 == 0.0

    if p.sign and G_b >= G0:
        st = CollapseState(0.0, G0, float(dyn.lam(G0, Gdot0)), Gdot0)
        return _finish(dyn, p, E, G0, [st], CollapseOutcome(OutcomeKind.BREAKDOWN, t_b=0.0), None)

    # outward force at rest: G0 is already the innermost point
    scan_lo = max(G_stop, G_b)
    probe = G0 * (1 - 1e-6)
    if at_rest and F(probe) <= 0:
        st = CollapseState(0.0, G0, 0.0, 0.0)
        return _finish(dyn, p, E, G0, [st], CollapseOutcome(OutcomeKind.TURNING_POINT, G_min=G0), None)

    # first zero of F inward of G0
    scan = np.geomspace(G0, scan_lo, 4000)[1:]
    vals = np.array([F(g) for g in scan])
    bad = np.flatnonzero(vals <= 0)
    G_turn = None
    if bad.size:
        j = bad[0]
        upper = G0 if j == 0 else scan[j - 1]
        if j == 0 and at_rest:
            upper = probe
        G_turn = brentq(F, scan[j], upper, xtol=1e-15 * G0, rtol=4 * np.finfo(float).eps)

    if G_turn is not None:
        G_end, kind = G_turn, OutcomeKind.TURNING_POINT
    elif p.sign:
        G_end, kind = G_b, OutcomeKind.BREAKDOWN
    else:
        G_end, kind = G_stop, OutcomeKind.COLLAPSE

    turning = kind is OutcomeKind.TURNING_POINT
    if turning:
        # grid in the exact offset from the turning point, dense next to it
        span = G0 - G_end
        offs = np.concatenate([np.geomspace(span, 1e-9 * span, n_points - 1), [0.0]])
        Gs = G_end + offs
    else:
        offs = None
        Gs = np.geomspace(G0, G_end, n_points)
    Gs[0], Gs[-1] = G0, G_end

    def split(i):
        # reference zero of F for segment [Gs[i+1], Gs[i]]: the nearer of G0
        # (resting start) and the turning point, if any
        lo, hi = Gs[i + 1], Gs[i]
        if turning and (not at_rest or lo - G_end < G0 - hi):
            return _offset_time(dyn, G_end, 1.0, offs[i + 1], offs[i])
        if at_rest:
            return _offset_time(dyn, G0, -1.0, G0 - hi, G0 - lo)
        return _plain_time(dyn, E, lo, hi)

    dt = np.array([split(i) for i in range(len(Gs) - 1)])
    t = np.concatenate([[0.0], np.cumsum(dt)])

    Gdot = -np.sqrt(np.maximum([F(g) for g in Gs], 0.0))
    if turning:
        near = offs < 1e-3 * (G0 - G_end)
        Gdot[near] = [-math.sqrt(_h_offset(dyn, G_end, 1.0, d) * d) for d in offs[near]]
    Gdot[0] = Gdot0

    tau = None
    if kind is OutcomeKind.TURNING_POINT:
        # reflect: the motion retraces itself back out to G0
        T = t[-1]
        t = np.concatenate([t, 2 * T - t[-2::-1]])
        Gs = np.concatenate([Gs, Gs[-2::-1]])
        Gdot = np.concatenate([Gdot, -Gdot[-2::-1]])
    elif kind is OutcomeKind.COLLAPSE:
        # tau = t_c - t accumulated from the inside so it carries no cancellation
        tail = integrate(lambda G: 1.0 / math.sqrt(F(G)), 0.0, G_end, _QUAD)
        tau = tail + np.concatenate([np.cumsum(dt[::-1])[::-1], [0.0]])

    lam = dyn.lam(Gs, Gdot)
    states = [CollapseState(float(a), float(b), float(c), float(d)) for a, b, c, d in zip(t, Gs, lam, Gdot)]

    if np.isfinite(t_max) and t[-1] > t_max:
        keep = [s for s in states if s.t <= t_max]
        return _finish(dyn, p, E, G0, keep, CollapseOutcome(OutcomeKind.INCOMPLETE), None)

    if kind is OutcomeKind.TURNING_POINT:
        out = CollapseOutcome(kind, G_min=float(G_end))
    elif kind is OutcomeKind.BREAKDOWN:
        out = CollapseOutcome(kind, t_b=float(t[-1]))
    else:
        t_c = float(t[-1] + tau[-1])
        run = _finish(dyn, p, E, G0, states, CollapseOutcome(kind, t_c=t_c), tau)
        out = CollapseOutcome(kind, t_c=t_c, fitted_exponent=fit_collapse_exponent(run))
    return _finish(dyn, p, E, G0, states, out, tau)


def _finish(dyn, p, E, G0, states, outcome, tau):
    G = np.array([s.G for s in states])
    lam = np.array([s.Lambda for s in states])
    c = dyn.c
    disp, grad, inter = dyn.potential_terms(G)
    kin = 4 * lam**2 * c.C2 / c.C1 * G**2 / (2 * p.m)
    if p.sign:
        kin = kin * dyn.stiffness(G)
    E_check = disp + grad + inter + kin
    scale = np.max(np.abs([disp, grad, inter, kin]), axis=0)
    drift = float(np.max(np.abs(E_check - E) / np.maximum(scale, abs(E)))) if len(G) else 0.0
    ratio = dyn.correction_ratio(G) if p.sign else np.zeros_like(G)
    if tau is not None and len(tau) != len(states):
        tau = tau[: len(states)]
    return CollapseRun(p, E, G0, states, outcome, tau, E_check, ratio, drift)


def fit_collapse_exponent(run: CollapseRun) -> float:
    """Slope of log G against log(t_c - t) over the final decade of G."""
    if run.tau is None:
        raise DomainError("exponent fit needs a collapsing run")
    G = np.array([s.G for s in run.trajectory])
    tau = np.asarray(run.tau)
    G_end = G[-1]
    sel = (G <= 10.0 * G_end) & (tau > 0)
    if G[0] < 10.0 * G_end or sel.sum() < 3:
        raise DomainError("fewer than one decade of G available for the fit")
    slope, _ = np.polyfit(np.log(tau[sel]), np.log(G[sel]), 1)
    return float(slope)


def trajectory_table(run: CollapseRun) -> dict:
    """Columns t, G, Lambda, Gdot, E_check, correction_ratio."""
    return {
        "t": np.array([s.t for s in run.trajectory]),
        "G": np.array([s.G for s in run.trajectory]),
        "Lambda": np.array([s.Lambda for s in run.trajectory]),
        "Gdot": np.array([s.Gdot for s in run.trajectory]),
        "E_check": np.asarray(run.E_check),
        "correction_ratio": np.asarray(run.correction_ratio),
    }
