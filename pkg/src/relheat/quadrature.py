"""Semi-infinite quadrature tuned to the Levy-Smirnov subordination weight.

Two families of rules live here:

* :func:`subordinate` integrates ``F`` against ``e^t g(y) e^{-y t^2}``.
  The default scheme is the trapezoidal rule in ``v = ln y``. In that variable
  the weight decays doubly exponentially at both ends and is analytic in the
  strip ``|Im v| < pi/2``, so the rule converges geometrically in the node
  count for every ``t``. Generalized Gauss-Laguerre in ``s = 1/(4y)`` is kept
  as an alternative scheme; it is only accurate once ``t`` is a few units.
* :func:`integrate_semi_infinite` (adaptive, scalar integrands) and
  :func:`panel_integrate` (fixed Gauss-Legendre panels, vectorized) serve the
  inner integrals of the closed-form solutions.

Both report failure through :class:`~relheat.errors.AccuracyError`.
"""

import math
import warnings
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
from scipy import integrate, special

from .errors import AccuracyError, DomainError

__all__ = [
    "QuadratureConfig",
    "DEFAULT_CONFIG",
    "subordinate",
    "subordination_nodes",
    "integrate_semi_infinite",
    "panel_integrate",
    "geometric_edges",
]

SQRT_PI = math.sqrt(math.pi)

# log-weight drop (in e-folds) at which the trapezoid range is cut
_LOG_WINDOW = 60.0


@dataclass(frozen=True)
class QuadratureConfig:
    """Node counts and tolerances for the semi-infinite integrals.

    ``scheme`` selects the subordination rule: ``"logtrap"`` (default) or
    ``"laguerre"``. ``tail_cutoff`` is the split point between the finite
    panel and the mapped tail in :func:`integrate_semi_infinite`; ``None``
    lets quadpack map ``[1, inf)`` directly.
    """

    gauss_nodes: int = 80
    adaptive_rel_tol: float = 1e-9
    adaptive_abs_tol: float = 1e-12
    max_subdivisions: int = 60
    tail_cutoff: float = None
    scheme: str = "logtrap"
    panel_order: int = 20

    def __post_init__(self):
        if self.gauss_nodes < 8:
            raise ValueError("gauss_nodes must be >= 8")
        if not (self.adaptive_rel_tol > 0 and self.adaptive_abs_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")
        if self.scheme not in ("logtrap", "laguerre"):
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.panel_order < 4:
            raise ValueError("panel_order must be >= 4")
        if self.tail_cutoff is not None and not self.tail_cutoff > 1:
            raise ValueError("tail_cutoff must exceed 1")

    def with_(self, **changes):
        return replace(self, **changes)


DEFAULT_CONFIG = QuadratureConfig()


# ----------------------------------------------------------------------------
# Subordination integral
# ----------------------------------------------------------------------------


def _log_weight(v, t):
    # log of e^t g(e^v) e^{-e^v t^2} e^v, without the 1/(2 sqrt(pi)) factor
    return t - 0.25 * math.exp(-v) - t * t * math.exp(v) - 0.5 * v


@lru_cache(maxsize=512)
def _logtrap_window(t):
    """Interval in ``v = ln y`` outside which the weight is below e^-60 of its peak.

    The log-weight is strictly concave, so Newton on its derivative converges
    and bisection brackets both ends.
    """
    # d/dv: e^{-v}/4 - t^2 e^v - 1/2 = 0  ->  quadratic in e^v
    a = t * t
    if a > 0:
        ev = (-0.5 + math.sqrt(0.25 + a)) / (2.0 * a)
    else:
        ev = 0.5
    v0 = math.log(ev)
    peak = _log_weight(v0, t)

    def edge(direction):
        step = 1.0
        hi = v0
        while _log_weight(hi + direction * step, t) > peak - _LOG_WINDOW:
            hi += direction * step
            step *= 2.0
        lo, far = hi, hi + direction * step
        for _ in range(80):
            mid = 0.5 * (lo + far)
            if _log_weight(mid, t) > peak - _LOG_WINDOW:
                lo = mid
            else:
                far = mid
        return far

    return edge(-1.0), edge(+1.0)


def subordination_nodes(t, n, scheme="logtrap"):
    """Nodes ``y_i`` and weights ``w_i`` with ``sum w_i F(y_i) ~ E[F(Y)]``.

    ``Y`` follows the tilted Levy-Smirnov law ``e^t g(y) e^{-y t^2} dy``.
    """
    if not t > 0:
        raise DomainError(f"subordination needs t > 0, got {t!r}")
    if scheme == "logtrap":
        lo, hi = _logtrap_window(float(t))
        v = np.linspace(lo, hi, n)
        h = v[1] - v[0]
        y = np.exp(v)
        w = h * np.exp(t - 0.25 / y - y * t * t) / (2.0 * SQRT_PI * np.sqrt(y))
        w[0] *= 0.5
        w[-1] *= 0.5
        return y, w
    if scheme == "laguerre":
        s, ws = _genlaguerre(n)
        y = 0.25 / s
        w = ws * np.exp(t - t * t / (4.0 * s)) / SQRT_PI
        return y, w
    raise ValueError(f"unknown scheme {scheme!r}")


@lru_cache(maxsize=32)
def _genlaguerre(n):
    return special.roots_genlaguerre(n, -0.5)


def _apply(F, y, w):
    vals = np.asarray(F(y), dtype=float)
    if vals.shape[:1] != y.shape:
        vals = np.broadcast_to(vals, y.shape + vals.shape[1:])
    return np.tensordot(w, vals, axes=(0, 0))


def _close(a, b, cfg):
    diff = np.max(np.abs(a - b))
    scale = np.max(np.abs(b))
    return diff <= max(cfg.adaptive_rel_tol * scale, cfg.adaptive_abs_tol), diff


def subordinate(F, t, cfg=None, full_output=False):
    """``e^t * integral_0^inf g(y) e^{-y t^2} F(y) dy``.

    ``F`` receives a 1-D array of ``y`` values and returns an array whose
    leading axis matches it; trailing axes (vector-valued ``F``) are kept.

    The estimate with ``gauss_nodes`` nodes is compared with the refined
    rule (step halved for the trapezoid, doubled count for Laguerre). If they
    disagree beyond tolerance the integral is redone adaptively with
    ``scipy.integrate.quad_vec`` in ``v = ln y``.
    """
    cfg = cfg or DEFAULT_CONFIG
    if not t > 0:
        raise DomainError(f"subordinate needs t > 0, got {t!r}")
    n = cfg.gauss_nodes
    if cfg.scheme == "logtrap":
        y, w = subordination_nodes(t, n, "logtrap")
        coarse = _apply(F, y, w)
        # halved step: odd nodes are new, even nodes reuse the coarse sum
        lo, hi = _logtrap_window(float(t))
        h = (hi - lo) / (n - 1)
        v_mid = lo + h * (np.arange(n - 1) + 0.5)
        y_mid = np.exp(v_mid)
        w_mid = 0.5 * h * np.exp(t - 0.25 / y_mid - y_mid * t * t) / (2.0 * SQRT_PI * np.sqrt(y_mid))
        fine = 0.5 * coarse + _apply(F, y_mid, w_mid)
    else:
        y, w = subordination_nodes(t, n, "laguerre")
        coarse = _apply(F, y, w)
        y2, w2 = subordination_nodes(t, 2 * n, "laguerre")
        fine = _apply(F, y2, w2)
    ok, err = _close(coarse, fine, cfg)
    if ok:
        result = fine if np.ndim(fine) else float(fine)
        return (result, float(err)) if full_output else result
    result, err = _subordinate_adaptive(F, t, cfg)
    return (result, err) if full_output else result


def _subordinate_adaptive(F, t, cfg):
    lo, hi = _logtrap_window(float(t))

    def integrand(v):
        y = math.exp(v)
        wt = math.exp(t - 0.25 / y - y * t * t) * y / (2.0 * SQRT_PI * y * math.sqrt(y))
        return wt * np.asarray(F(np.array([y])), dtype=float)[0]

    # split at the coarse-node scale so quad_vec starts with a useful mesh
    points = np.linspace(lo, hi, 9)
    res, err, info = integrate.quad_vec(
        integrand,
        lo,
        hi,
        epsabs=cfg.adaptive_abs_tol,
        epsrel=cfg.adaptive_rel_tol,
        limit=max(cfg.max_subdivisions, 8),
        points=points[1:-1],
        full_output=True,
    )
    res = res if np.ndim(res) else float(res)
    if not info.success:
        raise AccuracyError(
            f"subordination integral did not converge at t={t}", best=res, bound=err
        )
    return res, float(err)


# ----------------------------------------------------------------------------
# Generic semi-infinite integrals
# ----------------------------------------------------------------------------


def _quad(f, a, b, cfg, points=None):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        kwargs = dict(
            epsabs=cfg.adaptive_abs_tol,
            epsrel=cfg.adaptive_rel_tol,
            limit=cfg.max_subdivisions,
            full_output=1,
        )
        if points is not None and math.isfinite(b):
            kwargs["points"] = points
        out = integrate.quad(f, a, b, **kwargs)
    val, err, info = out[0], out[1], out[2]
    ier = 0 if len(out) == 3 else 1
    return val, err, ier, info


def integrate_semi_infinite(F, cfg=None, singular_at_zero=True):
    """Adaptive ``integral_0^inf F(u) du`` for scalar ``F``.

    ``[0, 1]`` is handled in ``u = v^2`` so an integrable ``u^{-1/2}`` endpoint
    singularity becomes smooth; ``[1, cutoff]`` is a plain adaptive panel and
    the remaining tail goes to quadpack's infinite-range mapping.
    """
    cfg = cfg or DEFAULT_CONFIG
    pieces = []
    if singular_at_zero:
        pieces.append(_quad(lambda v: 2.0 * v * F(v * v), 0.0, 1.0, cfg))
    else:
        pieces.append(_quad(F, 0.0, 1.0, cfg))
    if cfg.tail_cutoff is not None:
        pieces.append(_quad(F, 1.0, cfg.tail_cutoff, cfg))
        pieces.append(_quad(F, cfg.tail_cutoff, math.inf, cfg))
    else:
        pieces.append(_quad(F, 1.0, math.inf, cfg))
    total = sum(p[0] for p in pieces)
    bound = sum(p[1] for p in pieces)
    if any(p[2] for p in pieces) or not math.isfinite(total):
        raise AccuracyError("semi-infinite integral did not converge", best=total, bound=bound)
    tol = max(cfg.adaptive_rel_tol * abs(total), cfg.adaptive_abs_tol)
    if bound > 10 * tol:
        raise AccuracyError(
            f"semi-infinite integral error bound {bound:.2e} above tolerance",
            best=total,
            bound=bound,
        )
    return total


# ----------------------------------------------------------------------------
# Fixed Gauss-Legendre panels (vectorized)
# ----------------------------------------------------------------------------


@lru_cache(maxsize=32)
def _leggauss(order):
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def geometric_edges(start, stop, first=0.125, ratio=2.0):
    """Panel edges ``start, start+first, start+first*ratio, ...`` up to ``stop``."""
    if not stop > start:
        raise ValueError("stop must exceed start")
    edges = [start]
    width = first
    while edges[-1] + width < stop:
        edges.append(edges[-1] + width)
        width *= ratio
    edges.append(stop)
    return np.asarray(edges)


def _panel_nodes(edges, order):
    x, w = _leggauss(order)
    a = edges[:-1, None]
    b = edges[1:, None]
    half = 0.5 * (b - a)
    nodes = (a + half * (x + 1.0)).ravel()
    weights = (half * w).ravel()
    return nodes, weights


def panel_integrate(f, edges, cfg=None, full_output=False):
    """Composite Gauss-Legendre integral of a vectorized integrand.

    ``f(u)`` takes a 1-D node array and returns values with that array as the
    LAST axis, so leading axes can carry a batch of integrands evaluated on a
    shared mesh. The rule of order ``cfg.panel_order`` is checked against one
    of order ``panel_order + 8``; disagreement raises :class:`AccuracyError`.
    """
    cfg = cfg or DEFAULT_CONFIG
    edges = np.asarray(edges, dtype=float)
    lo_n, lo_w = _panel_nodes(edges, cfg.panel_order)
    hi_n, hi_w = _panel_nodes(edges, cfg.panel_order + 8)
    coarse = np.asarray(f(lo_n)) @ lo_w
    fine = np.asarray(f(hi_n)) @ hi_w
    err = np.abs(fine - coarse)
    tol = np.maximum(cfg.adaptive_rel_tol * np.abs(fine), cfg.adaptive_abs_tol)
    finite = np.isfinite(fine)
    if np.any(finite & (err > tol)):
        raise AccuracyError(
            f"panel rule disagreement {np.max(err[finite]):.2e}", best=fine, bound=err
        )
    result = fine if np.ndim(fine) else float(fine)
    return (result, err) if full_output else result
