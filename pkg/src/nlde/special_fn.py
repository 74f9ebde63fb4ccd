"""Real special functions and quadrature.

Everything here works on real arguments only. The Gauss hypergeometric
function is evaluated by its power series near the origin and by the Euler
integral elsewhere, so no analytic continuation is ever needed for z < 1.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate as _integrate
from scipy import special as _special

from .errors import ConvergenceError, DomainError

SERIES_RADIUS = 0.8


@dataclass(frozen=True)
class QuadratureSpec:
    relative_tolerance: float = 1e-10
    absolute_tolerance: float = 1e-12
    max_subdivisions: int = 200

    def __post_init__(self):
        if not (self.relative_tolerance > 0 and self.absolute_tolerance > 0):
            raise DomainError("quadrature tolerances must be strictly positive")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be >= 1")


DEFAULT_SPEC = QuadratureSpec()


def integrate(
    f: Callable[[float], float],
    lower: float,
    upper: float,
    spec: QuadratureSpec | None = None,
    *,
    endpoint_exponents: tuple[float, float] | None = None,
    points=None,
) -> float:
    """Integrate ``f`` over ``[lower, upper]``.

    Either limit may be infinite. With ``endpoint_exponents=(p, q)`` the
    integral computed is of ``f(x) (x - lower)**p (upper - x)**q``, with
    ``f`` smooth and ``p, q > -1``; the algebraic factor is handled
    analytically by the weighted rule, so integrable endpoint singularities
    cost nothing extra.

    Raises ConvergenceError (carrying the best estimate) if the requested
    tolerance is not met.
    """
    spec = spec or DEFAULT_SPEC
    kwargs = dict(
        epsabs=spec.absolute_tolerance,
        epsrel=spec.relative_tolerance,
        limit=spec.max_subdivisions,
        full_output=1,
    )
    if endpoint_exponents is not None:
        p, q = endpoint_exponents
        if p <= -1 or q <= -1:
            raise DomainError("endpoint exponents must exceed -1")
        if not (np.isfinite(lower) and np.isfinite(upper)):
            raise DomainError("weighted quadrature needs a finite interval")
        kwargs.update(weight="alg", wvar=(p, q))
    elif points is not None:
        kwargs["points"] = points
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", _integrate.IntegrationWarning)
        out = _integrate.quad(f, lower, upper, **kwargs)
    value, error = out[0], out[1]
    # a fourth element (the QUADPACK message) is only returned when ier > 0
    if len(out) > 3:
        tol = max(spec.absolute_tolerance, spec.relative_tolerance * abs(value))
        if not (np.isfinite(value) and error <= 10 * tol):
            raise ConvergenceError(
                f"quadrature did not converge: {out[3]}", estimate=value, error=error
            )
    return value


def gamma_fn(x: float) -> float:
    if not x > 0:
        raise DomainError(f"gamma_fn needs x > 0, got {x}")
    return math.gamma(x)


def beta_fn(a: float, b: float) -> float:
    if not (a > 0 and b > 0):
        raise DomainError(f"beta_fn needs positive arguments, got ({a}, {b})")
    if a + b < 170.0:
        return math.gamma(a) * math.gamma(b) / math.gamma(a + b)
    return math.exp(math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b))


def hyp2f1_series(a, b, c, z, max_terms: int = 20000):
    """Power series of 2F1(a, b; c; z); vectorised over ``z`` with |z| < 1."""
    z = np.asarray(z, dtype=float)
    if np.any(np.abs(z) >= 1):
        raise DomainError("series needs |z| < 1")
    term = np.ones_like(z)
    total = np.ones_like(z)
    # past this index the term ratio is monotone in magnitude
    n_safe = abs(a) + abs(b) + abs(c) + 2
    quiet = 0
    for n in range(max_terms):
        term = term * ((a + n) * (b + n) / ((c + n) * (n + 1.0))) * z
        total = total + term
        if not np.any(term):
            return total if total.ndim else float(total)
        small = np.all(np.abs(term) <= 1e-17 * np.abs(total))
        quiet = quiet + 1 if small else 0
        if n > n_safe and quiet >= 2:
            return total if total.ndim else float(total)
    raise ConvergenceError("2F1 series did not converge", estimate=total, error=np.abs(term))


def hyp2f1_euler(a, b, c, z, spec: QuadratureSpec | None = None) -> float:
    """Euler integral representation of 2F1; needs c > b > 0 and z < 1."""
    if not (c > b > 0):
        raise DomainError("Euler integral needs c > b > 0")
    if z >= 1:
        raise DomainError("Euler integral needs z < 1")
    spec = spec or QuadratureSpec(1e-13, 1e-300, 500)
    # split at t = 1/2; on the right half use s = 1 - t and form 1 - t z as
    # (1 - z) + z s, which keeps full precision when z is close to 1
    one_minus_z = 1.0 - z
    left = integrate(
        lambda t: (1.0 - t) ** (c - b - 1.0) * (1.0 - t * z) ** (-a),
        0.0, 0.5, spec, endpoint_exponents=(b - 1.0, 0.0),
    )
    right = integrate(
        lambda s: (1.0 - s) ** (b - 1.0) * (one_minus_z + z * s) ** (-a),
        0.0, 0.5, spec, endpoint_exponents=(c - b - 1.0, 0.0),
    )
    return (left + right) / beta_fn(b, c - b)


def _euler_pair(a, b, c):
    # choose the parameter playing "b" from the unordered pair so that
    # swapping a and b gives bit-identical results
    lo, hi = sorted((a, b))
    for cand, other in ((hi, lo), (lo, hi)):
        if c > cand > 0:
            return other, cand
    return None


def gauss_2f1(a: float, b: float, c: float, z):
    """Gauss hypergeometric function 2F1(a, b; c; z) for real z < 1.

    Scalar or array ``z``. Series for ``|z| <= 0.8``, Euler integral
    otherwise (requires c > b > 0 for one of the two upper parameters).
    """
    zarr = np.asarray(z, dtype=float)
    if np.any(zarr >= 1):
        raise DomainError("gauss_2f1 is only defined here for z < 1")
    flat = zarr.reshape(-1)
    inner = np.abs(flat) <= SERIES_RADIUS
    out = np.empty_like(flat)
    if np.any(inner):
        lo, hi = sorted((a, b))
        out[inner] = hyp2f1_series(lo, hi, c, flat[inner])
    if not np.all(inner):
        pair = _euler_pair(a, b, c)
        for i in np.flatnonzero(~inner):
            zi = float(flat[i])
            if pair is not None:
                out[i] = hyp2f1_euler(pair[0], pair[1], c, zi)
            elif abs(zi) < 1:
                out[i] = hyp2f1_series(a, b, c, zi, max_terms=2_000_000)
            else:
                raise ConvergenceError(
                    f"no convergent representation for 2F1({a}, {b}; {c}; {zi})"
                )
    out = out.reshape(zarr.shape)
    return out if out.ndim else float(out)


def elliptic_k(m: float) -> float:
    """Complete elliptic integral of the first kind, parameter m = k**2."""
    if not 0 <= m < 1:
        raise DomainError("elliptic_k needs 0 <= m < 1")
    return float(_special.ellipk(m))


def elliptic_e(m: float) -> float:
    """Complete elliptic integral of the second kind, parameter m = k**2."""
    if not 0 <= m <= 1:
        raise DomainError("elliptic_e needs 0 <= m <= 1")
    return float(_special.ellipe(m))
