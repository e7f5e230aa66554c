"""Special functions used by the relativistic heat solvers.

Everything here accepts scalars or numpy arrays and returns the same shape.
Scalar input gives a Python float back.
"""

import math
import threading
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DegreeError, DomainError

__all__ = [
    "MAX_DEGREE",
    "PolyFamily",
    "levy_smirnov",
    "tilted_levy_density",
    "bessel_poly",
    "bessel_poly_coefficients",
    "orth_poly",
    "orth_poly_table",
    "bessel_k1",
]

MAX_DEGREE = 200

SQRT_PI = math.sqrt(math.pi)
EULER_GAMMA = 0.57721566490153286061

FAMILIES = ("BesselCarlitz", "HermitePhysicists", "ChebyshevU", "LegendreP")


def _ret(value, scalar):
    return float(value) if scalar else value


def _check_degree(n, max_degree):
    if int(n) != n or n < 0:
        raise DegreeError(f"degree must be a non-negative integer, got {n!r}")
    if n > max_degree:
        raise DegreeError(f"degree {n} exceeds maximum {max_degree}")
    return int(n)


# ----------------------------------------------------------------------------
# Levy-Smirnov density
# ----------------------------------------------------------------------------


def levy_smirnov(xi):
    """One-sided stable density of index 1/2.

    ``g(xi) = exp(-1/(4 xi)) / (2 sqrt(pi) xi**1.5)`` for ``xi > 0`` and
    ``g(0) = 0`` (every derivative vanishes at the origin).
    """
    scalar = np.ndim(xi) == 0
    xi = np.asarray(xi, dtype=float)
    if np.any(xi < 0) or np.any(np.isnan(xi)):
        raise DomainError("levy_smirnov is defined for xi >= 0 only")
    out = np.zeros_like(xi)
    pos = xi > 0
    x = xi[pos]
    out[pos] = np.exp(-0.25 / x) / (2.0 * SQRT_PI * x * np.sqrt(x))
    return _ret(out, scalar)


def tilted_levy_density(y, t):
    """Normalized subordination weight ``e^t g(y) e^{-y t^2}``.

    This is the inverse-Gaussian law with mean ``1/(2t)`` and shape ``1/2``.
    """
    if not t > 0:
        raise DomainError(f"tilted_levy_density needs t > 0, got {t!r}")
    scalar = np.ndim(y) == 0
    y = np.asarray(y, dtype=float)
    if np.any(y < 0):
        raise DomainError("tilted_levy_density is defined for y >= 0 only")
    out = np.zeros_like(y)
    pos = y > 0
    yp = y[pos]
    # combine exponents before exponentiating; e^t alone overflows for t > 709
    out[pos] = np.exp(t - 0.25 / yp - yp * t * t) / (2.0 * SQRT_PI * yp * np.sqrt(yp))
    return _ret(out, scalar)


# ----------------------------------------------------------------------------
# Bessel polynomials (Carlitz form)
# ----------------------------------------------------------------------------

_coef_lock = threading.Lock()
_coef_cache = {}


def bessel_poly_coefficients(n, max_degree=MAX_DEGREE):
    """Exact coefficients ``[c_0, ..., c_n]`` of ``B_n(t) = sum c_k t^k``.

    ``c_k = (2n-k-1)! / ((k-1)! (n-k)! 2^(n-k))`` for ``1 <= k <= n``.
    """
    n = _check_degree(n, max_degree)
    coefs = _coef_cache.get(n)
    if coefs is not None:
        return coefs
    with _coef_lock:
        coefs = _coef_cache.get(n)
        if coefs is None:
            if n == 0:
                coefs = (Fraction(1),)
            else:
                fac = math.factorial
                coefs = (Fraction(0),) + tuple(
                    Fraction(fac(2 * n - k - 1), fac(k - 1) * fac(n - k) * 2 ** (n - k))
                    for k in range(1, n + 1)
                )
            _coef_cache[n] = coefs
    return coefs


def bessel_poly(n, t, max_degree=MAX_DEGREE):
    """Bessel polynomial ``B_n(t)`` by Horner evaluation of exact coefficients."""
    coefs = bessel_poly_coefficients(n, max_degree)
    try:
        fcoefs = [float(c) for c in coefs]
    except OverflowError as exc:
        raise DegreeError(f"coefficients of B_{n} overflow double precision") from exc
    scalar = np.ndim(t) == 0
    t = np.asarray(t, dtype=float)
    acc = np.zeros_like(t)
    for c in reversed(fcoefs):
        acc = acc * t + c
    return _ret(acc, scalar)


# ----------------------------------------------------------------------------
# Classical orthogonal polynomials
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class PolyFamily:
    """A polynomial family together with a degree."""

    family: str
    degree: int
    max_degree: int = MAX_DEGREE

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown polynomial family {self.family!r}")
        _check_degree(self.degree, self.max_degree)


def orth_poly_table(family, n_max, x, max_degree=MAX_DEGREE):
    """Values of degrees ``0..n_max`` stacked along a new leading axis.

    Upward three-term recurrences:

    * Hermite:   ``H_{n+1} = 2x H_n - 2n H_{n-1}``
    * Chebyshev: ``U_{n+1} = 2x U_n - U_{n-1}``
    * Legendre:  ``(n+1) P_{n+1} = (2n+1) x P_n - n P_{n-1}``
    """
    n_max = _check_degree(n_max, max_degree)
    x = np.asarray(x, dtype=float)
    if family in ("ChebyshevU", "LegendreP") and np.any(np.abs(x) > 1):
        warnings.warn(
            f"{family} evaluated outside [-1, 1]", RuntimeWarning, stacklevel=2
        )
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = 1.0
    if n_max == 0:
        return out
    if family == "HermitePhysicists":
        out[1] = 2.0 * x
        for n in range(1, n_max):
            out[n + 1] = 2.0 * x * out[n] - 2.0 * n * out[n - 1]
    elif family == "ChebyshevU":
        out[1] = 2.0 * x
        for n in range(1, n_max):
            out[n + 1] = 2.0 * x * out[n] - out[n - 1]
    elif family == "LegendreP":
        out[1] = x
        for n in range(1, n_max):
            out[n + 1] = ((2 * n + 1) * x * out[n] - n * out[n - 1]) / (n + 1)
    elif family == "BesselCarlitz":
        for n in range(1, n_max + 1):
            out[n] = bessel_poly(n, x, max_degree)
    else:
        raise ValueError(f"unknown polynomial family {family!r}")
    return out


def orth_poly(spec, x):
    """Evaluate ``spec.family`` of degree ``spec.degree`` at ``x``."""
    scalar = np.ndim(x) == 0
    if spec.family == "BesselCarlitz":
        return bessel_poly(spec.degree, x, spec.max_degree)
    table = orth_poly_table(spec.family, spec.degree, x, spec.max_degree)
    return _ret(table[-1], scalar)


# ----------------------------------------------------------------------------
# Modified Bessel function K_1
# ----------------------------------------------------------------------------

_K1_SPLIT = 2.0
_K1_SERIES_TERMS = 26
_K1_TINY = 1e-307  # 1/z overflows below this
_K1_HUGE = 745.0  # exp(-z) underflows above this


def _k1_series(z):
    # K1 = 1/z + ln(z/2) I1(z) - (z/4) sum_k [psi(k+1)+psi(k+2)] q^k / (k!(k+1)!)
    q = 0.25 * z * z
    term = np.ones_like(z)  # q^k / (k! (k+1)!)
    i1_sum = np.zeros_like(z)
    psi_sum = np.zeros_like(z)
    psi_k1 = -EULER_GAMMA  # psi(k+1)
    for k in range(_K1_SERIES_TERMS):
        psi_k2 = psi_k1 + 1.0 / (k + 1)
        i1_sum += term
        psi_sum += (psi_k1 + psi_k2) * term
        psi_k1 = psi_k2
        term = term * q / ((k + 1) * (k + 2))
    i1 = 0.5 * z * i1_sum
    return 1.0 / z + np.log(0.5 * z) * i1 - 0.25 * z * psi_sum


def _k1_steed(z, eps=1e-16, maxit=10000):
    # Steed's continued fraction CF2 for K_0, K_1 (Temme's normalization sum)
    b = 2.0 * (1.0 + z)
    d = 1.0 / b
    h = d.copy()
    delh = d.copy()
    q1 = np.zeros_like(z)
    q2 = np.ones_like(z)
    a1 = 0.25
    q = np.full_like(z, a1)
    c = np.full_like(z, a1)
    a = -a1
    s = 1.0 + q * delh
    active = np.ones(z.shape, dtype=bool)
    for i in range(2, maxit + 1):
        a -= 2 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1 = q2
        q2 = qnew
        q = q + c * qnew
        b = b + 2.0
        d = 1.0 / (b + a * d)
        delh = np.where(active, (b * d - 1.0) * delh, 0.0)
        h = h + delh
        dels = np.where(active, q * delh, 0.0)
        s = s + dels
        active &= np.abs(dels / s) >= eps
        if not active.any():
            break
    h = a1 * h
    k0 = np.sqrt(np.pi / (2.0 * z)) * np.exp(-z) / s
    return k0 * (z + 0.5 - h) / z


def bessel_k1(z):
    """Modified Bessel function of the second kind, order 1.

    Power series for ``z <= 2``; Steed's continued fraction above.
    Returns ``inf`` for ``z`` below ~1e-307 and ``0`` beyond ``z = 745``.
    """
    scalar = np.ndim(z) == 0
    z = np.asarray(z, dtype=float)
    if np.any(~(z > 0)):
        raise DomainError("bessel_k1 needs z > 0")
    out = np.empty_like(z)
    tiny = z < _K1_TINY
    huge = z > _K1_HUGE
    small = (z <= _K1_SPLIT) & ~tiny
    large = (z > _K1_SPLIT) & ~huge
    out[tiny] = np.inf
    out[huge] = 0.0
    if small.any():
        out[small] = _k1_series(z[small])
    if large.any():
        out[large] = _k1_steed(z[large])
    return _ret(out, scalar)
