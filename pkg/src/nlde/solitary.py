"""Exact rest-frame solitary waves of the 1+1D nonlinear Dirac equation.

The wave is Psi(x, t) = exp(-i omega t) R(x) (cos theta, sin theta) with
theta(x) = arctan(alpha tanh(beta_k x)). Densities are written in terms of
u = beta_k x through sech/tanh only, so nothing overflows for large |x|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError
from .special_fn import QuadratureSpec, beta_fn, elliptic_e, elliptic_k, gauss_2f1, integrate


class Channel(str, Enum):
    SCALAR_SCALAR = "ss"
    VECTOR_VECTOR = "vv"


@dataclass(frozen=True)
class ModelParams:
    """Mass ``m``, coupling ``g2`` (= g**2), exponent ``k`` and interaction channel."""

    m: float
    g2: float
    k: float
    channel: Channel = Channel.SCALAR_SCALAR

    def __post_init__(self):
        object.__setattr__(self, "channel", Channel(self.channel))
        for name in ("m", "g2", "k"):
            val = getattr(self, name)
            if not (np.isfinite(val) and val > 0):
                raise DomainError(f"{name} must be positive and finite, got {val}")


@dataclass(frozen=True)
class WaveSolution:
    params: ModelParams
    omega: float
    alpha: float
    beta: float
    beta_k: float
    amplitude_pow: float  # rho(0) = [(k+1) beta_k^2 / (g^2 k^2 (m + omega))]^(1/k)

    @property
    def m(self):
        return self.params.m

    @property
    def k(self):
        return self.params.k

    @property
    def g2(self):
        return self.params.g2

    @property
    def channel(self):
        return self.params.channel

    @property
    def omega_k(self):
        return self.params.k * self.omega

    @property
    def m_k(self):
        return self.params.k * self.params.m


@dataclass(frozen=True)
class SpinorSample:
    x: np.ndarray
    theta: np.ndarray
    u: np.ndarray
    v: np.ndarray
    rho: np.ndarray
    scalar_density: np.ndarray


@dataclass(frozen=True)
class Observables:
    """Charge and energy decomposition of one wave.

    ``bound`` compares H_sol with m*Q; the usual criterion at Q = 1
    and an extrapolation otherwise (``bound_extrapolated`` is then True).
    """

    Q: float
    H1: float
    H2: float
    H3: float
    H_sol: float
    bound: bool
    bound_extrapolated: bool = False


def center_density(m, g2, k, omega):
    """[(k+1) beta_k^2 / (g^2 k^2 (m+omega))]^(1/k), shared by NLDE and mNLSE."""
    beta_k2 = k * k * (m * m - omega * omega)
    return ((k + 1.0) * beta_k2 / (g2 * k * k * (m + omega))) ** (1.0 / k)


def make_wave(params: ModelParams, omega: float) -> WaveSolution:
    m = params.m
    if not 0 < omega < m:
        raise DomainError(f"need 0 < omega < m, got omega={omega}, m={m}")
    alpha = math.sqrt((m - omega) / (m + omega))
    beta = math.sqrt((m - omega) * (m + omega))
    return WaveSolution(
        params=params,
        omega=float(omega),
        alpha=alpha,
        beta=beta,
        beta_k=params.k * beta,
        amplitude_pow=center_density(m, params.g2, params.k, omega),
    )


def _sech(u):
    if np.iscomplexobj(u):
        return 1.0 / np.cosh(u)
    e = np.exp(-2.0 * np.abs(u))
    return 2.0 * np.sqrt(e) / (1.0 + e)


def shape_factor(u, alpha2, k, channel):
    """rho / rho(0) as a function of u = beta_k x; accepts complex u near 0."""
    t2 = np.tanh(u) ** 2
    base = _sech(u) ** (2.0 / k)
    if Channel(channel) is Channel.SCALAR_SCALAR:
        return base * (1.0 + alpha2 * t2) / (1.0 - alpha2 * t2) ** (1.0 + 1.0 / k)
    return base * (1.0 + alpha2 * t2) ** (-1.0 / k)


def correction_factor(w: WaveSolution, x):
    """f(alpha, beta, x) = rho_NLDE / (rho(0) sech^(2/k)(beta_k x))."""
    t2 = np.tanh(w.beta_k * np.asarray(x, dtype=float)) ** 2
    a2 = w.alpha**2
    if w.channel is Channel.SCALAR_SCALAR:
        return (1.0 + a2 * t2) / (1.0 - a2 * t2) ** (1.0 + 1.0 / w.k)
    return (1.0 + a2 * t2) ** (-1.0 / w.k)


def theta_at(w: WaveSolution, x):
    return np.arctan(w.alpha * np.tanh(w.beta_k * np.asarray(x, dtype=float)))


def theta_prime(w: WaveSolution, x):
    """d theta/dx in closed form (equal to -omega_k + m_k cos 2 theta)."""
    u = w.beta_k * np.asarray(x, dtype=float)
    t2 = np.tanh(u) ** 2
    return w.alpha * w.beta_k * _sech(u) ** 2 / (1.0 + w.alpha**2 * t2)


def cos2theta(w: WaveSolution, x):
    t2 = np.tanh(w.beta_k * np.asarray(x, dtype=float)) ** 2
    a2 = w.alpha**2
    return (1.0 - a2 * t2) / (1.0 + a2 * t2)


def density_at(w: WaveSolution, x):
    """Charge density rho = R^2 at ``x`` (scalar or array)."""
    u = w.beta_k * np.asarray(x, dtype=float)
    rho = w.amplitude_pow * shape_factor(u, w.alpha**2, w.k, w.channel)
    return rho if np.ndim(rho) else float(rho)


def density_cosh_form(w: WaveSolution, x):
    """The same density from the cosh(2 beta_k x) form; valid for |2 beta_k x| < 700."""
    m, om, k, g2 = w.m, w.omega, w.k, w.g2
    ch = np.cosh(2.0 * w.beta_k * np.asarray(x, dtype=float))
    if w.channel is Channel.SCALAR_SCALAR:
        bracket = (k + 1) * w.beta_k**2 / (g2 * k * k * (m + om * ch))
        return (om + m * ch) / (m + om * ch) * bracket ** (1.0 / k)
    return ((k + 1) * w.beta_k**2 / (g2 * k * k * (om + m * ch))) ** (1.0 / k)


def interaction_density(w: WaveSolution, x):
    """L_I evaluated on the wave."""
    rho = np.asarray(density_at(w, x))
    if w.channel is Channel.SCALAR_SCALAR:
        s = rho * cos2theta(w, x)
    else:
        s = rho
    return w.g2 / (w.k + 1.0) * s ** (w.k + 1.0)


def spinor_at(w: WaveSolution, x) -> SpinorSample:
    x = np.asarray(x, dtype=float)
    theta = theta_at(w, x)
    rho = np.asarray(density_at(w, x))
    r = np.sqrt(rho)
    return SpinorSample(
        x=x,
        theta=theta,
        u=r * np.cos(theta),
        v=r * np.sin(theta),
        rho=rho,
        scalar_density=rho * cos2theta(w, x),
    )


def t11_residual(w: WaveSolution, x):
    """T_11 = omega psi^dag psi - m psibar psi + L_I; zero on an exact wave."""
    rho = np.asarray(density_at(w, x))
    res = w.omega * rho - w.m * rho * cos2theta(w, x) + interaction_density(w, x)
    return res if np.ndim(res) else float(res)


# ---------------------------------------------------------------- closed forms


def charge_integral(alpha2: float, k: float, channel) -> float:
    """I_k (scalar-scalar) or hat I_k (vector-vector) as Beta x 2F1 combinations."""
    g = 1.0 / k
    if Channel(channel) is Channel.SCALAR_SCALAR:
        return beta_fn(0.5, g) * gauss_2f1(1 + g, 0.5, 0.5 + g, alpha2) + alpha2 * beta_fn(
            1.5, g
        ) * gauss_2f1(1 + g, 1.5, 1.5 + g, alpha2)
    return beta_fn(0.5, g) * gauss_2f1(0.5, g, 0.5 + g, -alpha2)


def charge_integral_k2_elliptic(alpha2: float) -> float:
    """I_2 through complete elliptic integrals: -2K(a2) + 4E(a2)/(1 - a2)."""
    return -2.0 * elliptic_k(alpha2) + 4.0 * elliptic_e(alpha2) / (1.0 - alpha2)


def charge_closed_form(w: WaveSolution) -> float:
    return w.amplitude_pow / w.beta_k * charge_integral(w.alpha**2, w.k, w.channel)


def energy_closed_form(w: WaveSolution, Q: float | None = None) -> Observables:
    """Q, H1, H2, H3 = H1/k and H_sol from the hypergeometric closed forms.

    ``Q`` is the charge used for the bound-state comparison; it defaults to the
    wave's own charge.
    """
    k, a2, P = w.k, w.alpha**2, w.amplitude_pow
    g = 1.0 / k
    z = a2 if w.channel is Channel.SCALAR_SCALAR else -a2
    charge = charge_closed_form(w)
    H1 = P * w.alpha * beta_fn(0.5, 1 + g) * gauss_2f1(1 + g, 0.5, 1.5 + g, z)
    pref = w.m * P / w.beta_k * beta_fn(0.5, g)
    if w.channel is Channel.SCALAR_SCALAR:
        H2 = pref * gauss_2f1(g, 0.5, 0.5 + g, z)
    else:
        H2 = pref * (2.0 * gauss_2f1(1 + g, 0.5, 0.5 + g, z) - gauss_2f1(g, 0.5, 0.5 + g, z))
    return _observables(w, charge, H1, H2, H1 / k, Q)


def _observables(w, charge, H1, H2, H3, Q):
    Q = charge if Q is None else Q
    H_sol = H1 * (1.0 - 1.0 / w.k) + H2
    return Observables(
        Q=charge,
        H1=H1,
        H2=H2,
        H3=H3,
        H_sol=H_sol,
        bound=bool(H_sol < w.m * Q),
        bound_extrapolated=not math.isclose(Q, 1.0, rel_tol=1e-9),
    )


# ---------------------------------------------------------------- quadrature

_QUAD = QuadratureSpec(relative_tolerance=1e-13, absolute_tolerance=1e-300, max_subdivisions=500)


def _line_integral(w: WaveSolution, integrand, spec):
    # even integrand in x; integrate over u = beta_k x in [0, inf)
    return 2.0 / w.beta_k * integrate(lambda u: integrand(u / w.beta_k), 0.0, np.inf, spec)


def charge_quadrature(w: WaveSolution, spec: QuadratureSpec | None = None) -> float:
    """Q = int rho dx by direct quadrature of the density."""
    return _line_integral(w, lambda x: density_at(w, x), spec or _QUAD)


def energy_quadrature(
    w: WaveSolution, Q: float | None = None, spec: QuadratureSpec | None = None
) -> Observables:
    """H1 = int rho theta', H2 = m int psibar psi, H3 = int L_I, all by quadrature."""
    spec = spec or _QUAD
    charge = charge_quadrature(w, spec)
    H1 = _line_integral(w, lambda x: density_at(w, x) * theta_prime(w, x), spec)
    H2 = w.m * _line_integral(w, lambda x: density_at(w, x) * cos2theta(w, x), spec)
    H3 = _line_integral(w, lambda x: interaction_density(w, x), spec)
    return _observables(w, charge, H1, H2, H3, Q)


# ---------------------------------------------------------------- special k


def elementary_forms(w: WaveSolution) -> dict:
    """Elementary-function charge and energies for k = 1 and k = 1/2 (m = 1 units).

    Cross-checks of the general hypergeometric expressions. Energies are
    absolute (not per unit charge).
    """
    if not math.isclose(w.m, 1.0):
        raise DomainError("elementary forms are written in m = 1 units")
    a, om, g2 = w.alpha, w.omega, w.g2
    ss = w.channel is Channel.SCALAR_SCALAR
    if math.isclose(w.k, 1.0):
        if ss:
            at = math.atanh(a)
            return {
                "Q": 2 * w.beta / (g2 * om),
                "H1": 2 * (1 + om) / g2 * ((1 + a * a) * at - a),
                "H2": 4 / g2 * at,
            }
        return {
            "Q": 4 * math.atan(a) / g2,
            "H1": 2 * (1 + om) / g2 * (a - (1 - a * a) * math.atan(a)),
            "H2": 4 * a / (g2 * (1 + a * a)),
        }
    if math.isclose(w.k, 0.5):
        g4 = g2 * g2
        if ss:
            at = math.atanh(a)
            i_half = (a * (1 + a * a) - (1 - a * a) ** 2 * at) / (2 * a**3 * (1 - a * a))
            return {
                "Q": 9 * (1 + om) / (2 * g4) * a**3 * i_half,
                "H1": 9 * (1 + om) ** 2 / (16 * g4) * ((3 * a**4 + 2 * a * a + 3) * at - 3 * a * (1 + a * a)),
                "H2": 9 * (1 + om) / (2 * g4) * ((1 + a * a) * at - a),
            }
        t = math.atan(a)
        return {
            "Q": 9 * (1 + om) / (2 * g4) * (a - (1 - a * a) * t),
            "H1": 9 * (1 + om) ** 2 / (16 * g4) * ((3 * a**4 - 2 * a * a + 3) * t - 3 * a * (1 - a * a)),
            "H2": 9 * (1 + om) / (4 * g4) * ((1 + a * a) * t - a * (1 - a * a) / (1 + a * a)),
        }
    raise DomainError("elementary forms exist for k = 1 and k = 1/2 only")
