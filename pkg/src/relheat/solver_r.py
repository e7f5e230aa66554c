"""Relativistic evolution ``d_t psi = (1 - sqrt(1 - d_x^2)) psi``.

Three routes are provided:

* :func:`solve_subordination` averages the non-relativistic solution over
  a random diffusion time ``2 Y t^2``, ``Y`` tilted Levy-Smirnov.
* :func:`solve_series` sums the Bessel-polynomial operator series
  termwise. The series is asymptotic at best and only serves as a check.
* ``psi1`` .. ``psi5`` are the closed forms for the five analytic profiles.

All solution functions accept scalar or array ``x`` and return the same
shape. ``t = 0`` returns the initial profile exactly.
"""

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial

import numpy as np

from .conditions import InitialCondition
from .errors import DomainError, SeriesDivergenceError
from .quadrature import DEFAULT_CONFIG, geometric_edges, integrate_semi_infinite, panel_integrate, subordinate
from .solver_nr import gw_transform, hermite_expansion, nr_closed_gaussian, nr_closed_hermite
from .specfun import bessel_k1, bessel_poly

__all__ = [
    "SeriesTruncation",
    "solve_subordination",
    "solve_series",
    "psi1",
    "phi_hermite",
    "psi2",
    "r3_inner",
    "psi3",
    "r4_inner",
    "r4_inner_printed",
    "psi4",
    "psi5",
    "closed_form",
]

SQRT_PI = math.sqrt(math.pi)
PI32 = math.pi**1.5

# exponent (in e-folds) at which inner integrals are cut
_INNER_WINDOW = 50.0
# inner-integral batch size; bounds memory at ~ batch * nodes doubles
_BATCH = 2048


def _threads():
    try:
        return max(1, int(os.environ.get("RELHEAT_THREADS", "1")))
    except ValueError:
        return 1


def _map(func, xs):
    n = _threads()
    if n == 1 or len(xs) < 2 * n:
        return [func(x) for x in xs]
    with ProcessPoolExecutor(max_workers=n) as pool:
        return list(pool.map(func, xs, chunksize=max(1, len(xs) // (4 * n))))


def _prepare(x, t):
    if not t >= 0:
        raise DomainError(f"time must be non-negative, got {t!r}")
    scalar = np.ndim(x) == 0
    return scalar, np.atleast_1d(np.asarray(x, dtype=float))


def _out(values, scalar):
    return float(values[0]) if scalar else values


# ----------------------------------------------------------------------------
# Generic routes
# ----------------------------------------------------------------------------


def _subordinate_point(ic, t, cfg, x):
    return subordinate(lambda y: gw_transform(ic, x, 2.0 * y * t * t, cfg), t, cfg)


def solve_subordination(ic, x, t, cfg=None):
    """Relativistic solution as a subordinated Gauss-Weierstrass transform."""
    cfg = cfg or DEFAULT_CONFIG
    scalar, xs = _prepare(x, t)
    if t == 0:
        return _out(ic(xs), scalar)
    if ic.kind in ("gaussian", "hermite", "tabulated"):
        # closed-form NR kernels vectorize over (y, x) at once
        vals = subordinate(lambda y: gw_transform(ic, xs[None, :], 2.0 * t * t * y[:, None], cfg), t, cfg)
    else:
        vals = np.array(_map(partial(_subordinate_point, ic, t, cfg), list(xs)))
    return _out(np.asarray(vals, dtype=float), scalar)


@dataclass(frozen=True)
class SeriesTruncation:
    """Truncation order of the operator series and the size of its last term."""

    n_max: int = 60
    tail_estimate: float = None

    def __post_init__(self):
        if self.n_max < 0:
            raise ValueError("n_max must be non-negative")


def solve_series(ic, x, t, trunc=None, growth_limit=5):
    """Partial sum of ``sum_n B_n(t) / (2^n n!) d^{2n} f(x)``.

    Returns ``(value, SeriesTruncation)`` where the truncation records the
    number of terms used and the magnitude of the last one. If the terms grow
    for ``growth_limit`` consecutive orders the series is declared divergent
    and :class:`SeriesDivergenceError` carries the smallest-term partial sum.
    """
    trunc = trunc or SeriesTruncation()
    if not t >= 0:
        raise DomainError("time must be non-negative")
    x = float(x)
    if t == 0 or trunc.n_max == 0:
        return float(ic(x)), SeriesTruncation(0, 0.0)
    total = 0.0
    partials = []
    mags = []
    growth = 0
    for n in range(trunc.n_max + 1):
        coef = bessel_poly(n, t) / (2.0**n * math.factorial(n))
        term = coef * float(ic.even_derivative(n, x))
        total += term
        partials.append(total)
        mags.append(abs(term))
        if n > 0 and mags[-1] > mags[-2]:
            growth += 1
            if growth >= growth_limit:
                k = int(np.argmin(mags))
                best = partials[k - 1] if k > 0 else 0.0
                raise SeriesDivergenceError(
                    f"operator series diverges from order {k} at t={t}",
                    best=best,
                    bound=mags[k],
                    n_terms=k,
                )
        else:
            growth = 0
    return total, SeriesTruncation(trunc.n_max, mags[-1])


# ----------------------------------------------------------------------------
# Closed forms
# ----------------------------------------------------------------------------


def psi1(x, t, cfg=None):
    """Relativistic evolution of the normalized Gaussian ``exp(-x^2)/sqrt(pi)``."""
    scalar, xs = _prepare(x, t)
    if t == 0:
        return _out(np.exp(-xs * xs) / SQRT_PI, scalar)
    vals = subordinate(lambda y: nr_closed_gaussian(xs[None, :], 2.0 * t * t * y[:, None]), t, cfg)
    return _out(vals, scalar)


def phi_hermite(p, x, t, cfg=None):
    """Relativistic evolution of ``H_p(x) exp(-x^2)`` on the whole line."""
    scalar, xs = _prepare(x, t)
    if t == 0:
        return _out(nr_closed_hermite(p, xs, 0.0), scalar)
    vals = subordinate(lambda y: nr_closed_hermite(p, xs[None, :], 2.0 * t * t * y[:, None]), t, cfg)
    return _out(vals, scalar)


def psi2(r, x, t, cfg=None):
    """Evolution of ``f(x) = 2 x^r exp(-x^2) / Gamma((r+1)/2)``.

    ``x^r`` is expanded in Hermite polynomials, so the result is the
    evolution of the analytic expression on the whole line; the profile's
    unit mass refers to ``x >= 0``.
    """
    if int(r) != r or r < 1:
        raise DomainError("r must be a positive integer")
    scalar, xs = _prepare(x, t)
    terms = hermite_expansion(int(r))
    if t == 0:
        return _out(InitialCondition.hermite(int(r))(xs), scalar)

    def F(y):
        tau = 2.0 * t * t * y[:, None]
        return sum(c * nr_closed_hermite(p, xs[None, :], tau) for p, c in terms)

    return _out(subordinate(F, t, cfg), scalar)


def _batched(kernel, t_tilde, c, rate, v_max, first, cfg):
    shape = t_tilde.shape
    tt = t_tilde.ravel()
    cc = c.ravel()
    rr = rate.ravel()
    out = np.empty(tt.shape)
    for start in range(0, tt.size, _BATCH):
        sl = slice(start, start + _BATCH)
        a, b = tt[sl, None], cc[sl, None]
        # 1/sqrt(1 + t u) branches at u = -1/t; the first panel must be narrower
        edges = geometric_edges(0.0, v_max(rr[sl].min()), first=first(a.max()))
        out[sl] = panel_integrate(lambda v: kernel(v, a, b), edges, cfg)
    return out.reshape(shape)


def _inner(kernel, t_tilde, x_tilde, cfg, squared):
    cfg = cfg or DEFAULT_CONFIG
    scalar = np.ndim(t_tilde) == 0 and np.ndim(x_tilde) == 0
    tt, xt = np.broadcast_arrays(np.asarray(t_tilde, float), np.asarray(x_tilde, float))
    if np.any(tt < 0):
        raise DomainError("t_tilde must be non-negative")
    if np.any(np.abs(xt) > 1):
        raise DomainError("|x_tilde| must not exceed 1")
    # the exponent is bounded by -(1 - x^2) u, or by -u when t = 0
    rate = np.where(tt == 0, 1.0, 1.0 - xt * xt)
    out = np.full(tt.shape, np.inf)
    ok = rate > 0
    if np.any(ok):
        if squared:
            v_max = lambda rmin: math.sqrt(_INNER_WINDOW / rmin)
            first = lambda tmax: 0.125 / max(1.0, math.sqrt(tmax))
        else:
            v_max = lambda rmin: _INNER_WINDOW / rmin
            first = lambda tmax: 0.125 / max(1.0, tmax)
        out[ok] = _batched(kernel, tt[ok], (1.0 - xt * xt)[ok], rate[ok], v_max, first, cfg)
    return float(out) if scalar else out


def _r3_kernel(u, tt, c):
    q = 1.0 + tt * u
    return SQRT_PI * np.exp(-(u + tt * c * u * u) / q) / np.sqrt(q)


def r3_inner(t_tilde, x_tilde, cfg=None):
    """Resummed inner series of the Cauchy solution.

    ``sqrt(pi) * integral_0^inf exp[-(u + u^2 t (1-x^2)) / (1 + t u)] / sqrt(1 + t u) du``

    The integrand decays like ``exp(-(1-x^2) u)``, so at ``|x_tilde| = 1``
    with ``t_tilde > 0`` the integral diverges and ``inf`` is returned.
    """
    return _inner(_r3_kernel, t_tilde, x_tilde, cfg, squared=False)


def _r4_kernel(v, tt, c):
    u = v * v
    q = 1.0 + tt * u
    return 2.0 * np.exp(-(u + tt * c * u * u) / q) / np.sqrt(q)


def r4_inner(t_tilde, x_tilde, cfg=None):
    """Resummed inner series of the ``(1+x^2)^(-1/2)`` solution.

    ``integral_0^inf exp[-(u + u^2 t (1-x^2)) / (1 + t u)] / sqrt(u (1 + t u)) du``

    This is the Borel sum of ``sum_n t^n Gamma(n + 1/2) P_{2n}(x)`` and equals
    ``sqrt(pi)`` at ``t = 0``. Evaluated as ``2 * integral ... dv`` with
    ``u = v^2`` to remove the endpoint singularity. Like :func:`r3_inner`
    it diverges at ``|x_tilde| = 1`` for ``t_tilde > 0``.
    """
    return _inner(_r4_kernel, t_tilde, x_tilde, cfg, squared=True)


def r4_inner_printed(t_tilde, x_tilde, cfg=None):
    """Inner integral in the literal printed form, with ``-u^2`` in the exponent.

    ``integral_0^inf exp[-(u^2 + t u^2 (1-x^2)) / (1 + t u)] / sqrt(u (1 + t u)) du``

    At ``t = 0`` this is ``Gamma(1/4)/2``, not ``sqrt(pi)``, so it does not
    reproduce the initial profile. Kept for comparison only.
    """
    if t_tilde < 0 or abs(x_tilde) > 1:
        raise DomainError("need t_tilde >= 0 and |x_tilde| <= 1")
    tt, c = float(t_tilde), 1.0 - float(x_tilde) ** 2

    def integrand(u):
        q = 1.0 + tt * u
        return math.exp(-(u * u + tt * u * u * c) / q) / math.sqrt(u * q)

    return integrate_semi_infinite(integrand, cfg)


def psi3(x, t, cfg=None):
    """Relativistic evolution of the Cauchy profile ``1/(pi (1+x^2))``."""
    scalar, xs = _prepare(x, t)
    q = 1.0 + xs * xs
    if t == 0:
        return _out(1.0 / (math.pi * q), scalar)
    xt = -xs / np.sqrt(q)

    def F(y):
        tt = 4.0 * t * t * y[:, None] / q[None, :]
        return r3_inner(tt, xt[None, :], cfg) / (PI32 * q[None, :])

    return _out(subordinate(F, t, cfg), scalar)


def psi4(x, t, cfg=None):
    """Relativistic evolution of ``(1+x^2)^(-1/2)``."""
    scalar, xs = _prepare(x, t)
    q = 1.0 + xs * xs
    if t == 0:
        return _out(1.0 / np.sqrt(q), scalar)
    xt = xs / np.sqrt(q)

    def F(y):
        tt = 4.0 * t * t * y[:, None] / q[None, :]
        return r4_inner(tt, xt[None, :], cfg) / np.sqrt(math.pi * q[None, :])

    return _out(subordinate(F, t, cfg), scalar)


def _psi5_edges(x, t):
    hi = max(x, 0.0) + 60.0 + 10.0 * t
    edges = set(geometric_edges(0.0, hi, first=1.0 / 256.0).tolist())
    if x > 0:
        w = min(t, x) / 4.0
        while w < hi:
            for e in (x - w, x + w):
                if 0.0 < e < hi:
                    edges.add(e)
            w *= 2.0
        edges.add(x)
    return np.array(sorted(edges))


def _psi5_point(t, cfg, x):
    pref = t * math.exp(t) / (2.0 * PI32)

    def integrand(xi):
        rho = np.sqrt(t * t + (x - xi) ** 2)
        return bessel_k1(rho) / rho * np.exp(-0.25 / xi) / (xi * np.sqrt(xi))

    edges = _psi5_edges(x, t)
    # the first node sits strictly inside the first panel, so xi > 0 always
    return pref * panel_integrate(integrand, edges, cfg)


def psi5(x, t, cfg=None):
    """Relativistic evolution of the Levy-Smirnov profile.

    Single integral of the relativistic heat kernel
    ``t e^t K_1(sqrt(t^2+z^2)) / (pi sqrt(t^2+z^2))`` against ``g(xi)``.
    """
    cfg = cfg or DEFAULT_CONFIG
    scalar, xs = _prepare(x, t)
    if t == 0:
        return _out(InitialCondition.levy()(xs), scalar)
    vals = np.array(_map(partial(_psi5_point, float(t), cfg), [float(v) for v in xs]))
    return _out(vals, scalar)


def closed_form(ic, x, t, cfg=None):
    """Dispatch to the closed form belonging to ``ic``."""
    k = ic.kind
    if k == "gaussian":
        return psi1(x, t, cfg)
    if k == "hermite":
        return psi2(ic.r, x, t, cfg)
    if k == "cauchy":
        return psi3(x, t, cfg)
    if k == "invsqrt":
        return psi4(x, t, cfg)
    if k == "levy":
        return psi5(x, t, cfg)
    raise DomainError(f"no closed form for {k} profiles")
