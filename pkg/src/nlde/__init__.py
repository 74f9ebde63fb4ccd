"""Exact solitary waves of the 1+1 dimensional nonlinear Dirac equation.

Modules: ``special_fn`` (Gamma, Beta, 2F1, elliptic integrals, quadrature),
``solitary`` (waves, charge and energy), ``omega_solver`` (frequency from charge,
bound-state domains, double-hump crossover), ``nr_limit`` (NLSE and modified
NLSE limits), ``stability`` (scale-transformation and slope tests), ``blowup``
(self-similar collapse) and ``cli``.
"""

__version__ = "0.1.0"

from .errors import ConvergenceError, DomainError
from .solitary import Channel, ModelParams, Observables, WaveSolution, make_wave

__all__ = [
    "Channel",
    "ConvergenceError",
    "DomainError",
    "ModelParams",
    "Observables",
    "WaveSolution",
    "make_wave",
    "__version__",
]
