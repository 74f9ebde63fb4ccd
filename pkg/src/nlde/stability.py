"""Scale-transformation (Derrick-type) stability indicators and the VK slope test.

A solution psi is stretched at fixed mass/charge, psi_beta(x) = beta^(1/2) psi(beta x),
and the energy H_beta is expanded about beta = 1. Each energy piece scales with
a fixed power of beta, so H_beta is assembled from the pieces computed once.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError
from .nr_limit import MnlseStationary, NrKind, NrSolution
from .solitary import (
    Channel,
    WaveSolution,
    cos2theta,
    density_at,
    energy_quadrature,
    theta_prime,
)
from .special_fn import QuadratureSpec, beta_fn, integrate

FD_STEP = 1e-3
FD_STEP_RICHARDSON = 5e-4
FD_RTOL = 1e-6

_QUAD = QuadratureSpec(relative_tolerance=1e-13, absolute_tolerance=1e-300, max_subdivisions=500)


class Model(str, Enum):
    NLSE = "nlse"
    NLDE = "nlde"
    MNLSE_SS = "mnlse_ss"
    MNLSE_VV = "mnlse_vv"


class Classification(str, Enum):
    STABLE_INDICATOR = "stable_indicator"
    UNSTABLE_INDICATOR = "unstable_indicator"
    MARGINAL = "marginal"
    NOT_A_STABILITY_CRITERION = "not_a_stability_criterion"


@dataclass(frozen=True)
class ScaleReport:
    model: Model
    k: float
    H_parts: tuple
    first_derivative_at_1: float
    second_derivative_at_1: float  # closed form
    fd_second_derivative: float  # central difference, step FD_STEP
    fd_richardson: float  # Richardson extrapolation with FD_STEP_RICHARDSON
    fd_agrees: bool
    classification: Classification


def _exponents(model: Model, k: float):
    """(sign, power) of beta for each energy piece."""
    if model is Model.NLSE:
        return ((1, 2.0), (-1, k))
    if model is Model.NLDE:
        return ((1, 1.0), (1, 0.0), (-1, k))
    s = 1 if model is Model.MNLSE_SS else -1
    return ((1, 2.0), (s, 2.0 + k), (-1, k))


def _model_of(solution) -> Model:
    if isinstance(solution, WaveSolution):
        return Model.NLDE
    if isinstance(solution, MnlseStationary):
        return Model.MNLSE_SS if solution.channel is Channel.SCALAR_SCALAR else Model.MNLSE_VV
    if isinstance(solution, NrSolution):
        return {
            NrKind.NLSE: Model.NLSE,
            NrKind.MNLSE_SS: Model.MNLSE_SS,
            NrKind.MNLSE_VV: Model.MNLSE_VV,
        }[solution.kind]
    raise DomainError(f"unsupported solution type {type(solution).__name__}")


def _check_model(model, solution) -> Model:
    model = Model(model)
    if _model_of(solution) is not model:
        raise DomainError(f"solution of type {_model_of(solution).value} given for model {model.value}")
    return model


def _sech_parts(sol: NrSolution, spec):
    # pieces on a sech^(1/k) profile, integrated over u = D x >= 0 and doubled
    k, m, D = sol.k, sol.m, sol.D
    g2 = sol.g2 if sol.kind is NrKind.NLSE else sol.g2_hat
    line = lambda f: 2.0 / D * integrate(lambda u: f(u / D), 0.0, np.inf, spec)
    r = sol.amplitude
    H1 = line(lambda x: sol.derivative(x) ** 2) / (2.0 * m)
    H3 = g2 / (k + 1.0) * line(lambda x: r(x) ** (2 * k + 2))
    if sol.kind is NrKind.NLSE:
        return (H1, H3)
    H2 = g2 / (4.0 * m * m) * line(lambda x: r(x) ** (2 * k) * sol.derivative(x) ** 2)
    return (H1, H2, H3)


def hamiltonian_parts(model, solution, spec: QuadratureSpec | None = None) -> tuple:
    """Positive energy pieces, all by quadrature.

    NLSE: (H1, H2) = ((1/2m) int r'^2, g^2/(k+1) int r^(2k+2)).
    NLDE: (H1, H2, H3) = kinetic, mass and interaction terms.
    mNLSE: (H1, H2, H3) with H2 = (g_hat^2/4m^2) int u^(2k) u'^2, either on the
    exact stationary state (MnlseStationary) or on the sech profile (NrSolution).
    """
    model = _check_model(model, solution)
    spec = spec or _QUAD
    if model is Model.NLDE:
        obs = energy_quadrature(solution, spec=spec)
        return (obs.H1, obs.H2, obs.H3)
    if isinstance(solution, MnlseStationary):
        p = solution.parts(spec)
        return (p.H1, p.H2, p.H3)
    return _sech_parts(solution, spec)


def scaled_energy(model, solution, beta: float, parts: tuple | None = None) -> float:
    """H_beta for the mass-preserving stretch beta^(1/2) psi(beta x)."""
    if not beta > 0:
        raise DomainError("beta must be positive")
    model = _check_model(model, solution)
    parts = hamiltonian_parts(model, solution) if parts is None else parts
    return float(sum(s * beta**p * h for (s, p), h in zip(_exponents(model, solution.k), parts)))


def stretched_energy(model, solution, beta: float, spec: QuadratureSpec | None = None) -> float:
    """H of the stretched field by direct quadrature (no use of the scaling law).

    Independent check of ``scaled_energy``; available for NLDE waves and sech
    profiles.
    """
    if not beta > 0:
        raise DomainError("beta must be positive")
    model = _check_model(model, solution)
    spec = spec or _QUAD
    if model is Model.NLDE:
        w = solution
        rho = lambda x: beta * density_at(w, beta * x)
        c2 = lambda x: cos2theta(w, beta * x)
        k, g2 = w.k, w.g2

        def dens(x):
            r = rho(x)
            kin = r * beta * theta_prime(w, beta * x)
            s = r * c2(x) if w.channel is Channel.SCALAR_SCALAR else r
            return kin + w.m * r * c2(x) - g2 / (k + 1.0) * s ** (k + 1.0)

        scale = w.beta_k * beta
    elif isinstance(solution, NrSolution):
        sol = solution
        k, m = sol.k, sol.m
        g2 = sol.g2 if sol.kind is NrKind.NLSE else sol.g2_hat
        psi = lambda x: np.sqrt(beta) * sol.amplitude(beta * x)
        dpsi = lambda x: beta**1.5 * sol.derivative(beta * x)

        def dens(x):
            p, dp = psi(x), dpsi(x)
            out = dp * dp / (2.0 * m) - g2 / (k + 1.0) * p ** (2 * k + 2)
            if sol.sign:
                out += sol.sign * g2 / (4.0 * m * m) * p ** (2 * k) * dp * dp
            return out

        scale = sol.D * beta
    else:
        raise DomainError("stretched quadrature needs an explicit profile")
    return 2.0 / scale * integrate(lambda u: dens(u / scale), 0.0, np.inf, spec)


def _closed_forms(model: Model, k: float, parts: tuple):
    if model is Model.NLSE:
        H1, H2 = parts
        return 2 * H1 - k * H2, 2.0 * (2.0 - k) * H1
    if model is Model.NLDE:
        H1, _, H3 = parts
        return H1 - k * H3, -k * (k - 1.0) * H3
    s = 1 if model is Model.MNLSE_SS else -1
    H1, H2, H3 = parts
    return 2 * H1 + s * (2 + k) * H2 - k * H3, (4.0 - 2.0 * k) * H1 + s * 2.0 * (2.0 + k) * H2


def _second_difference(f, h):
    return (f(1.0 + h) - 2.0 * f(1.0) + f(1.0 - h)) / (h * h)


def second_variation(model, solution, parts: tuple | None = None) -> ScaleReport:
    """Closed-form d^2 H_beta/d beta^2 at beta = 1 with a finite-difference check.

    The NLDE value is reported but never classified: bound states of the
    Dirac equation are not minima at fixed charge, so its sign says nothing
    about stability.
    """
    model = _check_model(model, solution)
    k = solution.k
    parts = hamiltonian_parts(model, solution) if parts is None else tuple(parts)
    first, closed = _closed_forms(model, k, parts)
    H = lambda b: scaled_energy(model, solution, b, parts)
    d1 = _second_difference(H, FD_STEP)
    d2 = _second_difference(H, FD_STEP_RICHARDSON)
    rich = (4.0 * d2 - d1) / 3.0
    scale = max(abs(closed), max(abs(p) for p in parts))
    agrees = abs(d1 - closed) <= FD_RTOL * scale and abs(rich - closed) <= FD_RTOL * scale
    if model is Model.NLDE:
        cls = Classification.NOT_A_STABILITY_CRITERION
    elif abs(closed) <= 1e-12 * scale:
        cls = Classification.MARGINAL
    elif closed > 0:
        cls = Classification.STABLE_INDICATOR
    else:
        cls = Classification.UNSTABLE_INDICATOR
    return ScaleReport(model, k, parts, first, closed, d1, rich, agrees, cls)


# ---------------------------------------------------------------- VK slope


@dataclass(frozen=True)
class VKVerdict:
    k: float
    exponent: float  # p in M = C (-omega)^p
    slope_sign: int  # sign of dM/d omega
    verdict: str  # "stable", "marginal" or "unstable"


def vk_slope(k: float, omega: float) -> VKVerdict:
    """Vakhitov-Kolokolov test for NLSE waves, omega < 0 (bound-state convention).

    M = C (-omega)^p with p = (2-k)/(2k), so dM/d omega = -C p (-omega)^(p-1);
    dM/d omega < 0 (stable) iff k < 2.
    """
    if not k > 0:
        raise DomainError("k must be positive")
    if not omega < 0:
        raise DomainError("NLSE bound states need omega < 0")
    p = (2.0 - k) / (2.0 * k)
    sign = -int(np.sign(p))
    verdict = {-1: "stable", 0: "marginal", 1: "unstable"}[sign]
    return VKVerdict(k, p, sign, verdict)


def nlse_mass(m: float, g2: float, k: float, Omega: float) -> float:
    """Mass of the NLSE wave with eigenvalue Omega = -omega > 0.

    M = ((k+1) Omega/g^2)^(1/k) B(1/2, 1/k) / (k sqrt(2 m Omega)).
    """
    for name, val in (("m", m), ("g2", g2), ("k", k), ("Omega", Omega)):
        if not val > 0:
            raise DomainError(f"{name} must be positive")
    D = k * np.sqrt(2.0 * m * Omega)
    return float(((k + 1.0) * Omega / g2) ** (1.0 / k) * beta_fn(0.5, 1.0 / k) / D)
