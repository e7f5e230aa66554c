"""Moments, kurtosis and Monte Carlo sampling of the subordinated process.

The relativistic solution is the law of

    X = X0 + sqrt(2 Y t^2) N

with ``X0 ~ f``, ``N`` standard normal and ``Y`` drawn from the tilted
Levy-Smirnov density ``e^t g(y) e^{-y t^2}``, which is the inverse-Gaussian
law with mean ``1/(2t)`` and shape ``1/2``. Moment relations follow from
``E[Y] = 1/(2t)`` and ``E[Y^2] = (t + 1)/(4 t^3)``:

* ``<x^2>_R = <x^2>_NR = m2 + t``
* ``<x^4>_NR = m4 + 6 t m2 + 3 t^2`` and ``<x^4>_R = <x^4>_NR + 3t``
"""

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import integrate, special, stats

from .conditions import InitialCondition, SolutionField
from .errors import AccuracyError, DomainError, MomentUndefinedError, UnsupportedInitialCondition
from .quadrature import subordinate
from .specfun import tilted_levy_density

__all__ = [
    "MomentReport",
    "GridMoment",
    "SampleBatch",
    "analytic_moments",
    "grid_moments",
    "sample_subordinator",
    "sample_r_process",
    "subordinator_tv_distance",
    "gaussian_r_cdf",
    "ks_distance",
]

# samples per independent sub-stream; fixed so results never depend on worker count
CHUNK = 1 << 16
TV_TOL = 1e-8


@dataclass(frozen=True)
class MomentReport:
    """Second and fourth moments of a solution at time ``t``."""

    t: float
    regime: str
    m2: float
    m4: float
    method: str
    stderr: tuple = None  # (stderr of m2, stderr of m4) for Monte Carlo estimates

    @property
    def kurtosis(self):
        return self.m4 / self.m2**2 - 3.0


def analytic_moments(ic, t, regime="R"):
    """Exact ``<x^2>``, ``<x^4>`` for profiles with finite moments.

    For the Hermite-Gauss profile the moments are those of the density
    ``f`` restricted to ``x >= 0``, where it is normalized.
    """
    if t < 0:
        raise DomainError("time must be non-negative")
    if regime not in ("R", "NR"):
        raise ValueError(f"regime must be 'R' or 'NR', got {regime!r}")
    if ic.kind not in ("gaussian", "hermite", "tabulated"):
        raise MomentUndefinedError(f"second moment of the {ic.kind} profile diverges")
    m2_0 = ic.even_moment(2)
    m4_0 = ic.even_moment(4)
    m2 = m2_0 + t
    m4 = m4_0 + 6.0 * t * m2_0 + 3.0 * t * t
    if regime == "R":
        m4 += 3.0 * t
    return MomentReport(t, regime, m2, m4, "analytic")


class GridMoment(float):
    """A float carrying the truncation diagnostics of a grid moment."""

    tail_estimate: float
    divergent: bool

    def __new__(cls, value, tail_estimate, divergent):
        obj = super().__new__(cls, value)
        obj.tail_estimate = tail_estimate
        obj.divergent = divergent
        return obj


def _tail_estimate(xs, w, dx):
    # extrapolate each edge as an exponential with the decay rate seen on the last cell
    total = 0.0
    for edge, inner in ((w[-1], w[-2]), (w[0], w[1])):
        if edge == 0.0:
            continue
        if inner > edge > 0 or inner < edge < 0:
            total += abs(edge) * dx / math.log(inner / edge)
        else:
            return math.inf
    return total


def grid_moments(fld: SolutionField, p: int, mass_tol: float = 1e-4):
    """Trapezoid ``<x^{2p}>`` of a sampled field, divided by its grid mass.

    Returns a :class:`GridMoment`. Profiles with divergent moments raise a
    ``RuntimeWarning`` and the truncated-grid value is returned with
    ``divergent`` set.
    """
    if p not in (1, 2):
        raise ValueError("p must be 1 or 2")
    fld.check_mass(mass_tol)
    divergent = fld.ic.kind in ("cauchy", "invsqrt", "levy")
    if divergent:
        warnings.warn(
            f"<x^{2 * p}> diverges for the {fld.ic.kind} profile; value is grid-truncated",
            RuntimeWarning,
            stacklevel=2,
        )
    weighted = fld.xs ** (2 * p) * fld.values
    mass = np.trapezoid(fld.values, fld.xs)
    value = np.trapezoid(weighted, fld.xs) / mass
    tail = math.inf if divergent else _tail_estimate(fld.xs, weighted, fld.dx) / abs(mass)
    return GridMoment(value, tail, divergent)


# ----------------------------------------------------------------------------
# Sampling
# ----------------------------------------------------------------------------


def _inverse_gaussian(rng, mean, shape, size):
    # transformation with multiple roots; the larger root is formed without cancellation
    w = rng.standard_normal(size) ** 2
    a = mean / (2.0 * shape)
    big = mean + a * mean * w + a * np.sqrt(4.0 * mean * shape * w + (mean * w) ** 2)
    small = mean * mean / big
    take_small = rng.random(size) * (mean + small) <= mean
    return np.where(take_small, small, big)


@lru_cache(maxsize=64)
def subordinator_tv_distance(t):
    """Total variation between the sampler's law and ``tilted_levy_density``.

    The inverse-Gaussian density comes from scipy, independently of
    :func:`tilted_levy_density`.
    """
    mean, shape = 0.5 / t, 0.5
    law = stats.invgauss(mean / shape, scale=shape)

    def gap(v):
        y = math.exp(v)
        return abs(law.pdf(y) - tilted_levy_density(y, t)) * y

    # integrate in log y; both densities are negligible outside this window
    lo, hi = math.log(mean) - 40.0, math.log(mean) + 40.0 + max(0.0, -math.log(t))
    val = integrate.quad(gap, lo, hi, limit=200, epsabs=1e-14, points=[math.log(mean)])[0]
    return 0.5 * val


def _check_subordinator(t):
    tv = subordinator_tv_distance(float(t))
    if tv > TV_TOL:
        raise AccuracyError(f"inverse-Gaussian law differs from the tilted density (TV {tv:.3g})")


def _workers():
    try:
        return max(1, int(os.environ.get("RELHEAT_THREADS", "1")))
    except ValueError:
        return 1


def _chunked(seed, n, draw):
    sizes = [min(CHUNK, n - i) for i in range(0, n, CHUNK)]
    streams = np.random.SeedSequence(seed).spawn(len(sizes))
    jobs = [(np.random.default_rng(s), m) for s, m in zip(streams, sizes)]
    workers = _workers()
    if workers == 1 or len(jobs) == 1:
        parts = [draw(rng, m) for rng, m in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda job: draw(*job), jobs))
    return np.concatenate(parts)


def _check_seed(seed):
    if int(seed) != seed or not 0 <= seed < 2**64:
        raise ValueError("seed must be an integer in [0, 2^64)")
    return int(seed)


def sample_subordinator(t, n, seed):
    """Draw ``n`` values of the random diffusion time ``Y`` at relativistic time ``t``."""
    if not t > 0:
        raise DomainError("t must be positive")
    seed = _check_seed(seed)
    _check_subordinator(t)
    return _chunked(seed, int(n), lambda rng, m: _inverse_gaussian(rng, 0.5 / t, 0.5, m))


@dataclass(eq=False)
class SampleBatch:
    """Monte Carlo positions of the relativistic process at time ``t``."""

    seed: int
    n_samples: int
    t: float
    ic: InitialCondition
    positions: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.n_samples < 1 or len(self.positions) != self.n_samples:
            raise ValueError("n_samples must be positive and match positions")

    def moment(self, order):
        """Sample mean of ``X^order`` and its standard error."""
        vals = self.positions**order
        return float(np.mean(vals)), float(np.std(vals, ddof=1) / math.sqrt(self.n_samples))

    def report(self):
        m2, s2 = self.moment(2)
        m4, s4 = self.moment(4)
        return MomentReport(self.t, "R", m2, m4, "montecarlo", (s2, s4))


def sample_r_process(ic, t, n, seed):
    """Sample the relativistic process for the Gaussian or Levy-Smirnov profile."""
    if ic.kind not in ("gaussian", "levy"):
        raise UnsupportedInitialCondition(f"no sampler for the {ic.kind} profile")
    if not t > 0:
        raise DomainError("t must be positive")
    n = int(n)
    if n < 1:
        raise ValueError("n must be positive")
    seed = _check_seed(seed)
    _check_subordinator(t)
    mean = 0.5 / t

    def draw(rng, m):
        if ic.kind == "gaussian":
            x0 = rng.standard_normal(m) * math.sqrt(0.5)
        else:
            x0 = 0.5 / rng.standard_normal(m) ** 2
        y = _inverse_gaussian(rng, mean, 0.5, m)
        return x0 + np.sqrt(2.0 * y * t * t) * rng.standard_normal(m)

    return SampleBatch(seed, n, float(t), ic, _chunked(seed, n, draw))


# ----------------------------------------------------------------------------
# Distribution checks
# ----------------------------------------------------------------------------


def gaussian_r_cdf(x, t, cfg=None):
    """CDF of the relativistically evolved Gaussian profile.

    ``P(X <= x) = E[Phi(x / sqrt(1/2 + 2 Y t^2))]``
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if t == 0:
        return special.ndtr(x * math.sqrt(2.0))
    return subordinate(lambda y: special.ndtr(x[None, :] / np.sqrt(0.5 + 2.0 * t * t * y[:, None])), t, cfg)


def ks_distance(batch: SampleBatch, n_grid=8001):
    """Kolmogorov-Smirnov distance between a Gaussian-profile batch and the exact CDF."""
    if batch.ic.kind != "gaussian":
        raise UnsupportedInitialCondition("exact CDF available for the Gaussian profile only")
    lo, hi = float(np.min(batch.positions)), float(np.max(batch.positions))
    grid = np.linspace(lo, hi, n_grid)
    table = gaussian_r_cdf(grid, batch.t)
    return float(stats.kstest(batch.positions, lambda v: np.interp(v, grid, table)).statistic)
