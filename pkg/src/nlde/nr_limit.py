"""Nonrelativistic limit: NLSE and modified NLSE (mNLSE) static profiles.

Both limits have sech^(1/k) profiles. The NLSE profile r(y) = A sech^(1/k)(D y)
solves r''/(2m) - Omega r + g^2 r^(2k+1) = 0 and the mNLSE profile
u(x) = A sech^(1/k)(beta_k x) solves -u'' + beta^2 u - (m + omega) g^2 u^(2k+1) = 0,
the static equation to first order in 1/2m. The gradient-coupling term of the
mNLSE Hamiltonian is not part of that equation; ``MnlseStationary`` gives the
exact stationary state of the full mNLSE energy functional.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError
from .solitary import (
    Channel,
    ModelParams,
    _sech,
    correction_factor,
    density_at,
    make_wave,
)
from .special_fn import QuadratureSpec, beta_fn, integrate

VALIDITY_THRESHOLD = 0.1

_QUAD = QuadratureSpec(relative_tolerance=1e-13, absolute_tolerance=1e-300, max_subdivisions=500)


class NrKind(str, Enum):
    NLSE = "nlse"
    MNLSE_SS = "mnlse_ss"
    MNLSE_VV = "mnlse_vv"


def _positive(**kw):
    for name, val in kw.items():
        if not (np.isfinite(val) and val > 0):
            raise DomainError(f"{name} must be positive and finite, got {val}")


@dataclass(frozen=True)
class NrSolution:
    """Static sech^(1/k) profile of the NLSE or mNLSE.

    ``D`` is the inverse width (beta_k for the mNLSE) and ``A`` the amplitude
    of r (not of the density). ``omega`` is set for the mNLSE, ``Omega`` for
    the NLSE. Rest frame only: ``v`` and ``x0`` are carried but fixed at 0.
    """

    kind: NrKind
    m: float
    g2: float
    k: float
    D: float
    A: float
    omega: float | None = None
    Omega: float | None = None
    v: float = 0.0
    x0: float = 0.0

    @property
    def gamma(self) -> float:
        return 1.0 / self.k

    @property
    def eps0(self) -> float | None:
        return None if self.omega is None else self.omega - self.m

    @property
    def g2_hat(self) -> float | None:
        """g^2 (1 + eps0/2m) = g^2 (m + omega)/(2m); None for the NLSE."""
        if self.omega is None:
            return None
        return self.g2 * (self.m + self.omega) / (2.0 * self.m)

    @property
    def sign(self) -> int:
        """+1 (S-S) or -1 (V-V) in front of the gradient-coupling term; 0 for the NLSE."""
        return {NrKind.NLSE: 0, NrKind.MNLSE_SS: 1, NrKind.MNLSE_VV: -1}[self.kind]

    def amplitude(self, x):
        x = np.asarray(x, dtype=float)
        return self.A * _sech(self.D * (x + self.x0)) ** self.gamma

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        u = self.D * (x + self.x0)
        return -self.A * self.D * self.gamma * _sech(u) ** self.gamma * np.tanh(u)

    def second_derivative(self, x):
        x = np.asarray(x, dtype=float)
        u = self.D * (x + self.x0)
        s = _sech(u)
        g = self.gamma
        return self.A * self.D**2 * g * s**g * (g - (g + 1.0) * s * s)

    def density(self, x):
        r = self.amplitude(x)
        rho = r * r
        return rho if np.ndim(rho) else float(rho)

    def residual(self, x):
        """Left-hand side of the static equation; zero on the exact profile."""
        r = self.amplitude(x)
        r2 = self.second_derivative(x)
        if self.kind is NrKind.NLSE:
            res = r2 / (2.0 * self.m) - self.Omega * r + self.g2 * r ** (2 * self.k + 1)
        else:
            beta2 = (self.m - self.omega) * (self.m + self.omega)
            res = -r2 + beta2 * r - (self.m + self.omega) * self.g2 * r ** (2 * self.k + 1)
        return res if np.ndim(res) else float(res)

    def mass(self) -> float:
        """int rho dx = A^2 B(1/2, 1/k) / D."""
        return self.A**2 * beta_fn(0.5, self.gamma) / self.D

    def mass_quadrature(self, spec: QuadratureSpec | None = None) -> float:
        return 2.0 / self.D * integrate(
            lambda u: self.A**2 * _sech(u) ** (2.0 * self.gamma), 0.0, np.inf, spec or _QUAD
        )


def nlse_profile(m: float, g2: float, k: float, D: float) -> NrSolution:
    """r = A sech^(1/k)(D y) with A^(2k) = (k+1) D^2/(2 m g^2 k^2), Omega = D^2/(2 m k^2)."""
    _positive(m=m, g2=g2, k=k, D=D)
    A = ((k + 1.0) * D * D / (2.0 * m * g2 * k * k)) ** (0.5 / k)
    return NrSolution(NrKind.NLSE, m, g2, k, D, A, Omega=D * D / (2.0 * m * k * k))


def mnlse_profile(m: float, g2: float, k: float, omega: float, channel=Channel.SCALAR_SCALAR) -> NrSolution:
    """u = A sech^(1/k)(beta_k x) with A^(2k) = (k+1) beta_k^2/((m + omega) g^2 k^2)."""
    _positive(m=m, g2=g2, k=k)
    if not 0 < omega < m:
        raise DomainError(f"need 0 < omega < m, got omega={omega}, m={m}")
    kind = NrKind.MNLSE_SS if Channel(channel) is Channel.SCALAR_SCALAR else NrKind.MNLSE_VV
    beta_k = k * math.sqrt((m - omega) * (m + omega))
    A = ((k + 1.0) * beta_k**2 / ((m + omega) * g2 * k * k)) ** (0.5 / k)
    return NrSolution(kind, m, g2, k, beta_k, A, omega=float(omega))


def expansion_parameter(omega: float, m: float) -> float:
    """|omega - m| / (2m); the reduction is trusted up to VALIDITY_THRESHOLD."""
    _positive(m=m)
    return abs(omega - m) / (2.0 * m)


def within_validity(omega: float, m: float) -> bool:
    return expansion_parameter(omega, m) <= VALIDITY_THRESHOLD


@dataclass(frozen=True)
class DensityComparison:
    x: np.ndarray
    rho_nlde: np.ndarray
    rho_nlse: np.ndarray
    rho_mnlse: np.ndarray
    f: np.ndarray
    expansion_parameter: float
    within_validity: bool
    nlse_coupling: str


def compare_densities(
    params: ModelParams, omega: float, x_grid, nlse_coupling: str = "renormalized"
) -> DensityComparison:
    """Exact NLDE density next to the NLSE and mNLSE densities and the factor f.

    The NLSE profile uses D = beta_k. With ``nlse_coupling="renormalized"``
    its coupling is g^2 (m + omega)/(2m), which makes rho_NLSE(0) = rho_NLDE(0)
    (and the NLSE column coincide with the mNLSE one); ``"bare"`` uses g^2.
    """
    x = np.asarray(x_grid, dtype=float)
    if not np.all(np.isfinite(x)):
        raise DomainError("x_grid must be finite")
    if nlse_coupling not in ("renormalized", "bare"):
        raise DomainError(f"unknown nlse_coupling {nlse_coupling!r}")
    w = make_wave(params, omega)
    mn = mnlse_profile(params.m, params.g2, params.k, omega, params.channel)
    g2_nlse = mn.g2_hat if nlse_coupling == "renormalized" else params.g2
    nl = nlse_profile(params.m, g2_nlse, params.k, w.beta_k)
    eps = expansion_parameter(omega, params.m)
    return DensityComparison(
        x=x,
        rho_nlde=np.asarray(density_at(w, x)),
        rho_nlse=np.asarray(nl.density(x)),
        rho_mnlse=np.asarray(mn.density(x)),
        f=np.asarray(correction_factor(w, x)),
        expansion_parameter=eps,
        within_validity=eps <= VALIDITY_THRESHOLD,
        nlse_coupling=nlse_coupling,
    )


# ---------------------------------------------------------------- exact mNLSE state


@dataclass(frozen=True)
class MnlseParts:
    M: float
    H1: float  # (1/2m) int |u'|^2
    H2: float  # (g_hat^2/4m^2) int |u|^(2k) |u'|^2
    H3: float  # g_hat^2/(k+1) int |u|^(2k+2)

    def energy(self, sign: int) -> float:
        return self.H1 + sign * self.H2 - self.H3


@dataclass(frozen=True)
class MnlseStationary:
    """Exact stationary state of the full mNLSE energy at fixed mass.

    Critical point of H + lam M with H = int [(1/2m)|u'|^2 (1 +- (g_hat^2/2m)|u|^(2k))
    - g_hat^2/(k+1) |u|^(2k+2)], lam = beta^2/(2m) and g_hat^2 = g^2 (m+omega)/(2m).
    Its first integral a(u) u'^2 = lam u^2 - g_hat^2/(k+1) u^(2k+2), with
    a(u) = (1 +- (g_hat^2/2m) u^(2k))/(2m), fixes the peak u0 at the same value
    as the sech profile; all integrals are done in s = u/u0 on [0, 1].
    """

    m: float
    g2: float
    k: float
    omega: float
    channel: Channel
    lam: float
    g2_hat: float
    u0: float
    kappa: float  # (g_hat^2/2m) u0^(2k) = (k+1) beta^2/(4 m^2)

    @property
    def sign(self) -> int:
        return 1 if self.channel is Channel.SCALAR_SCALAR else -1

    def _a(self, s):
        return (1.0 + self.sign * self.kappa * s ** (2 * self.k)) / (2.0 * self.m)

    def _q(self, s):
        # (1 - s^(2k)) / (1 - s), smooth on [0, 1] with limit 2k at s = 1
        if s == 1.0:
            return 2.0 * self.k
        if s > 0.5:
            return -math.expm1(2 * self.k * math.log(s)) / (1.0 - s)
        return (1.0 - s ** (2 * self.k)) / (1.0 - s)

    def _moment(self, power: float, inverse: bool, spec) -> float:
        # int_0^1 s^power [a / (lam (1 - s^2k))]^(+-1/2) ds with the (1-s)^(-+1/2)
        # endpoint factor handled by the weighted rule
        if inverse:
            f = lambda s: s**power * math.sqrt(self._a(s) / (self.lam * self._q(s)))
            return integrate(f, 0.0, 1.0, spec, endpoint_exponents=(0.0, -0.5))
        f = lambda s: s**power * math.sqrt(self.lam * self._q(s) / self._a(s))
        return integrate(f, 0.0, 1.0, spec, endpoint_exponents=(0.0, 0.5))

    def parts(self, spec: QuadratureSpec | None = None) -> MnlseParts:
        spec = spec or _QUAD
        k, m, u0 = self.k, self.m, self.u0
        M = 2.0 * u0**2 * self._moment(1.0, True, spec)
        H1 = u0**2 / m * self._moment(1.0, False, spec)
        H2 = self.g2_hat / (2.0 * m * m) * u0 ** (2 * k + 2) * self._moment(2 * k + 1, False, spec)
        H3 = 2.0 * self.g2_hat / (k + 1.0) * u0 ** (2 * k + 2) * self._moment(2 * k + 1, True, spec)
        return MnlseParts(M, H1, H2, H3)

    def position(self, s: float, spec: QuadratureSpec | None = None) -> float:
        """x >= 0 at which u = s u0 (x(1) = 0)."""
        if not 0 < s <= 1:
            raise DomainError("need 0 < s <= 1")
        if s == 1.0:
            return 0.0
        spec = spec or _QUAD
        # dx = ds / (s sqrt(lam (1 - s^2k)/a)), weight (1 - s)^(-1/2) on [s, 1]
        f = lambda t: math.sqrt(self._a(t) / (self.lam * self._q(t))) / t
        return integrate(f, s, 1.0, spec, endpoint_exponents=(0.0, -0.5))


def mnlse_stationary(m: float, g2: float, k: float, omega: float, channel=Channel.SCALAR_SCALAR) -> MnlseStationary:
    _positive(m=m, g2=g2, k=k)
    if not 0 < omega < m:
        raise DomainError(f"need 0 < omega < m, got omega={omega}, m={m}")
    channel = Channel(channel)
    beta2 = (m - omega) * (m + omega)
    lam = beta2 / (2.0 * m)
    g2_hat = g2 * (m + omega) / (2.0 * m)
    u0 = ((k + 1.0) * lam / g2_hat) ** (0.5 / k)
    kappa = (k + 1.0) * beta2 / (4.0 * m * m)
    if channel is Channel.VECTOR_VECTOR and kappa >= 1.0:
        raise DomainError(
            "vector-vector mNLSE has no stationary state here: the gradient "
            f"coefficient changes sign inside the wave (kappa={kappa:.6g} >= 1)"
        )
    return MnlseStationary(m, g2, k, float(omega), channel, lam, g2_hat, u0, kappa)
