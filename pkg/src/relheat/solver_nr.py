"""Non-relativistic evolution: the Gauss-Weierstrass transform with D = 1/2.

``psi_NR(x, t) = integral exp(-(x-u)^2 / (2t)) f(u) du / sqrt(2 pi t)``
"""

import math
import warnings

import numpy as np
from scipy import integrate, special

from .errors import AccuracyError, DomainError
from .quadrature import DEFAULT_CONFIG
from .specfun import orth_poly_table

__all__ = ["gw_transform", "nr_closed_gaussian", "nr_closed_hermite", "hermite_expansion"]

SQRT_PI = math.sqrt(math.pi)
SQRT_2PI = math.sqrt(2.0 * math.pi)

# heat-kernel window, in standard deviations; the Gaussian mass outside is < 1e-19
_KERNEL_SIGMAS = 9.0


def nr_closed_gaussian(x, t):
    """Glaisher's formula for the evolved normalized Gaussian."""
    q = 1.0 + 2.0 * np.asarray(t, dtype=float)
    return np.exp(-np.asarray(x, dtype=float) ** 2 / q) / np.sqrt(math.pi * q)


def nr_closed_hermite(p, x, t):
    """Gauss-Weierstrass transform of ``H_p(x) exp(-x^2)``.

    ``(1+2t)^{-(p+1)/2} exp(-x^2/(1+2t)) H_p(x / sqrt(1+2t))``
    """
    if np.any(np.asarray(t) < 0):
        raise DomainError("time must be non-negative")
    x = np.asarray(x, dtype=float)
    q = 1.0 + 2.0 * np.asarray(t, dtype=float)
    sq = np.sqrt(q)
    h = orth_poly_table("HermitePhysicists", p, x / sq)[-1]
    out = q ** (-(p + 1) / 2.0) * np.exp(-x * x / q) * h
    return float(out) if out.ndim == 0 else out


def hermite_expansion(r):
    """``[(p, c_p)]`` with ``2 x^r / Gamma((r+1)/2) = sum c_p H_p(x)``."""
    pref = 2.0 * math.factorial(r) / (2**r * math.gamma(0.5 * (r + 1)))
    return [
        (r - 2 * k, pref / (math.factorial(k) * math.factorial(r - 2 * k)))
        for k in range(r // 2 + 1)
    ]


def _gw_tabulated(grid, values, x, t):
    # exact convolution of the piecewise-linear interpolant with the heat kernel
    s = np.sqrt(np.asarray(t, dtype=float))[..., None]
    a = grid[:-1]
    b = grid[1:]
    fa = values[:-1]
    slope = (values[1:] - fa) / (b - a)
    x = np.asarray(x, dtype=float)[..., None]
    # on [a, b]: f(u) = fa + slope (u - a);  u = x - s z
    za = (x - a) / s
    zb = (x - b) / s
    mass = special.ndtr(za) - special.ndtr(zb)
    first = (np.exp(-0.5 * zb**2) - np.exp(-0.5 * za**2)) / SQRT_2PI
    # integral of u * kernel over the panel = x * mass - s * first
    return np.sum(fa * mass + slope * ((x - a) * mass - s * first), axis=-1)


def _gw_adaptive_scalar(ic, x, t, cfg):
    s = math.sqrt(t)
    lo = max(x - _KERNEL_SIGMAS * s, ic.lower_support)
    hi = min(x + _KERNEL_SIGMAS * s, ic.upper_support)
    if not hi > lo:
        # x is far outside the support: integrate the nearest stretch of it
        if x < ic.lower_support:
            lo, hi = ic.lower_support, ic.lower_support + _KERNEL_SIGMAS * s
        else:
            lo, hi = ic.upper_support - _KERNEL_SIGMAS * s, ic.upper_support
    pts = sorted({p for p in ic.features + (x,) if lo < p < hi})
    inv2t = 0.5 / t
    norm = 1.0 / (SQRT_2PI * s)
    f = ic.scalar_fn()

    def integrand(u):
        d = x - u
        return math.exp(-d * d * inv2t) * f(u)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        out = integrate.quad(
            integrand,
            lo,
            hi,
            points=pts or None,
            epsabs=cfg.adaptive_abs_tol * SQRT_2PI * s,
            epsrel=cfg.adaptive_rel_tol,
            limit=max(cfg.max_subdivisions, 4 * (len(pts) + 1)),
            full_output=1,
        )
    val, err = out[0], out[1]
    if len(out) > 3:
        raise AccuracyError(
            f"heat-kernel convolution failed at x={x}, t={t}", best=val * norm, bound=err * norm
        )
    return val * norm


def gw_transform(ic, x, t, cfg=None):
    """Gauss-Weierstrass transform of the profile ``ic`` at ``(x, t)``.

    ``x`` and ``t`` broadcast against each other. ``t = 0`` returns ``f(x)``
    exactly. Closed forms are used for the Gaussian and Hermite-Gauss
    profiles, exact panel convolution for tabulated data, and adaptive
    quadrature against the analytic profile otherwise.
    """
    cfg = cfg or DEFAULT_CONFIG
    scalar = np.ndim(x) == 0 and np.ndim(t) == 0
    x, t = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(t, dtype=float))
    if np.any(t < 0) or np.any(np.isnan(t)):
        raise DomainError("gw_transform needs t >= 0")
    out = np.empty(x.shape)
    zero = t == 0
    if np.any(zero):
        out[zero] = ic(x[zero])
    pos = ~zero
    if np.any(pos):
        xp, tp = x[pos], t[pos]
        if ic.kind == "gaussian":
            out[pos] = nr_closed_gaussian(xp, tp)
        elif ic.kind == "hermite":
            acc = np.zeros_like(xp)
            for p, c in hermite_expansion(ic.r):
                acc += c * nr_closed_hermite(p, xp, tp)
            out[pos] = acc
        elif ic.kind == "tabulated":
            out[pos] = _gw_tabulated(ic.grid, ic.values, xp, tp)
        else:
            out[pos] = [_gw_adaptive_scalar(ic, float(a), float(b), cfg) for a, b in zip(xp, tp)]
    return float(out) if scalar else out
