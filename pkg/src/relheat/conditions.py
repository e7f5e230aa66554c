"""Initial profiles and sampled solution fields."""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .errors import DomainError, GridError, MomentUndefinedError, UnsupportedInitialCondition
from .specfun import levy_smirnov, orth_poly_table

__all__ = ["InitialCondition", "SolutionField", "IC_KINDS"]

SQRT_PI = math.sqrt(math.pi)

IC_KINDS = ("gaussian", "hermite", "cauchy", "invsqrt", "levy", "tabulated")

# points where an analytic profile has structure worth telling the integrator about
_FEATURES = {
    "gaussian": (0.0,),
    "hermite": (0.0,),
    "cauchy": (-1.0, 0.0, 1.0),
    "invsqrt": (-1.0, 0.0, 1.0),
    "levy": (0.0, 1.0 / 6.0, 1.0),
}


@dataclass(frozen=True, eq=False)
class InitialCondition:
    """One of the five analytic profiles, or a tabulated one.

    ``gaussian``   ``exp(-x^2)/sqrt(pi)``
    ``hermite``    ``2 x^r exp(-x^2) / Gamma((r+1)/2)``, normalized on ``x >= 0``
    ``cauchy``     ``1/(pi (1+x^2))``
    ``invsqrt``    ``(1+x^2)^(-1/2)`` (not normalizable)
    ``levy``       Levy-Smirnov density, zero for ``x < 0``
    ``tabulated``  piecewise-linear through ``(grid, values)``, zero outside

    The ``hermite`` profile is evaluated as the analytic expression on the
    whole line, which is what the Hermite-expansion solution evolves; its
    unit mass refers to the half line ``x >= 0``.
    """

    kind: str
    r: int = None
    grid: np.ndarray = field(default=None, repr=False)
    values: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in IC_KINDS:
            raise ValueError(f"unknown initial condition {self.kind!r}")
        if self.kind == "hermite":
            if self.r is None or int(self.r) != self.r or self.r < 1:
                raise ValueError("hermite initial condition needs integer r >= 1")
            object.__setattr__(self, "r", int(self.r))
        if self.kind == "tabulated":
            grid = np.asarray(self.grid, dtype=float)
            values = np.asarray(self.values, dtype=float)
            if grid.ndim != 1 or grid.shape != values.shape or grid.size < 2:
                raise GridError("tabulated profile needs matching 1-D grid and values")
            if np.any(np.diff(grid) <= 0):
                raise GridError("tabulated grid must be strictly increasing")
            if not np.all(np.isfinite(values)):
                raise GridError("tabulated values must be finite")
            object.__setattr__(self, "grid", grid)
            object.__setattr__(self, "values", values)
        if self.normalizable:
            mass = self.mass()
            if self.kind != "tabulated" and abs(mass - 1.0) > 1e-8:
                raise AssertionError(f"{self.kind} profile has mass {mass}")

    # -- constructors ---------------------------------------------------------

    @classmethod
    def gaussian(cls):
        return cls("gaussian")

    @classmethod
    def hermite(cls, r):
        return cls("hermite", r=r)

    @classmethod
    def cauchy(cls):
        return cls("cauchy")

    @classmethod
    def invsqrt(cls):
        return cls("invsqrt")

    @classmethod
    def levy(cls):
        return cls("levy")

    @classmethod
    def tabulated(cls, grid, values):
        return cls("tabulated", grid=grid, values=values)

    # -- properties -----------------------------------------------------------

    @property
    def normalizable(self):
        return self.kind != "invsqrt"

    @property
    def label(self):
        return f"hermite(r={self.r})" if self.kind == "hermite" else self.kind

    @property
    def features(self):
        if self.kind == "tabulated":
            return (float(self.grid[0]), float(self.grid[-1]))
        return _FEATURES[self.kind]

    @property
    def lower_support(self):
        """Left end of the support (``-inf`` for full-line profiles)."""
        if self.kind == "levy":
            return 0.0
        if self.kind == "tabulated":
            return float(self.grid[0])
        return -math.inf

    @property
    def upper_support(self):
        if self.kind == "tabulated":
            return float(self.grid[-1])
        return math.inf

    # -- evaluation -----------------------------------------------------------

    def __call__(self, x):
        scalar = np.ndim(x) == 0
        x = np.asarray(x, dtype=float)
        k = self.kind
        if k == "gaussian":
            out = np.exp(-x * x) / SQRT_PI
        elif k == "hermite":
            out = 2.0 * x**self.r * np.exp(-x * x) / math.gamma(0.5 * (self.r + 1))
        elif k == "cauchy":
            out = 1.0 / (math.pi * (1.0 + x * x))
        elif k == "invsqrt":
            out = 1.0 / np.sqrt(1.0 + x * x)
        elif k == "levy":
            out = levy_smirnov(np.maximum(x, 0.0))
        else:
            out = np.interp(x, self.grid, self.values, left=0.0, right=0.0)
        return float(out) if scalar else out

    def scalar_fn(self):
        """Plain-float version of the profile, for scalar quadrature loops."""
        k = self.kind
        if k == "gaussian":
            return lambda u: math.exp(-u * u) / SQRT_PI
        if k == "hermite":
            r, c = self.r, 2.0 / math.gamma(0.5 * (self.r + 1))
            return lambda u: c * u**r * math.exp(-u * u)
        if k == "cauchy":
            return lambda u: 1.0 / (math.pi * (1.0 + u * u))
        if k == "invsqrt":
            return lambda u: 1.0 / math.sqrt(1.0 + u * u)
        if k == "levy":
            c = 0.5 / SQRT_PI
            return lambda u: c * math.exp(-0.25 / u) / (u * math.sqrt(u)) if u > 0 else 0.0
        return lambda u: float(np.interp(u, self.grid, self.values, left=0.0, right=0.0))

    def mass(self):
        """Integral used for the normalization check (half line for ``hermite``)."""
        k = self.kind
        if k == "tabulated":
            return float(np.trapezoid(self.values, self.grid))
        if k == "invsqrt":
            return math.inf
        lo = 0.0 if k in ("hermite", "levy") else -math.inf
        if k == "levy":
            # u = 1/(4 xi) maps the density onto e^{-u} u^{-1/2} / sqrt(pi)
            return integrate.quad(lambda v: 2.0 * math.exp(-v * v) / SQRT_PI, 0.0, math.inf)[0]
        return integrate.quad(lambda u: float(self(u)), lo, math.inf, epsabs=1e-13, epsrel=1e-12)[0]

    def even_derivative(self, n, x):
        """Analytic ``d^{2n} f / dx^{2n}`` for the full-line analytic profiles.

        * gaussian: ``H_{2n}(x) e^{-x^2} / sqrt(pi)``
        * hermite:  expansion of ``x^r`` in ``H_p`` and ``(H_p e^{-x^2})'' = H_{p+2} e^{-x^2}``
        * cauchy:   ``(2n)! (1+x^2)^{-(n+1)} U_{2n}(-x/sqrt(1+x^2)) / pi``
        * invsqrt:  ``(2n)! (1+x^2)^{-(n+1/2)} P_{2n}(x/sqrt(1+x^2))``
        """
        x = np.asarray(x, dtype=float)
        k = self.kind
        if k == "gaussian":
            return orth_poly_table("HermitePhysicists", 2 * n, x)[-1] * np.exp(-x * x) / SQRT_PI
        if k == "hermite":
            r = self.r
            table = orth_poly_table("HermitePhysicists", r + 2 * n, x)
            acc = np.zeros_like(x)
            for j, p in enumerate(range(r, -1, -2)):
                acc = acc + table[p + 2 * n] / (math.factorial(j) * math.factorial(p))
            pref = 2.0 * math.factorial(r) / (2**r * math.gamma(0.5 * (r + 1)))
            return pref * acc * np.exp(-x * x)
        if k == "cauchy":
            q = 1.0 + x * x
            u = orth_poly_table("ChebyshevU", 2 * n, -x / np.sqrt(q))[-1]
            return math.factorial(2 * n) * q ** (-(n + 1)) * u / math.pi
        if k == "invsqrt":
            q = 1.0 + x * x
            p = orth_poly_table("LegendreP", 2 * n, x / np.sqrt(q))[-1]
            return math.factorial(2 * n) * q ** (-(n + 0.5)) * p
        raise UnsupportedInitialCondition(f"no analytic derivatives for {k}")

    def even_moment(self, order):
        """``integral u^order f(u) du`` (order 0, 2 or 4), normalized to unit mass."""
        if order not in (0, 2, 4):
            raise ValueError("only moments of order 0, 2, 4 are provided")
        if self.kind == "gaussian":
            return {0: 1.0, 2: 0.5, 4: 0.75}[order]
        if self.kind == "hermite":
            a = 0.5 * (self.r + 1)
            return math.gamma(a + order // 2) / math.gamma(a)
        if self.kind == "tabulated":
            m0 = np.trapezoid(self.values, self.grid)
            return float(np.trapezoid(self.grid**order * self.values, self.grid) / m0)
        raise MomentUndefinedError(f"moments of the {self.kind} profile diverge")


@dataclass(eq=False)
class SolutionField:
    """``psi(x, t)`` sampled on a uniform grid."""

    xs: np.ndarray
    values: np.ndarray
    t: float
    regime: str
    ic: InitialCondition
    method: str
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.xs = np.asarray(self.xs, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.xs.ndim != 1 or self.xs.shape != self.values.shape or self.xs.size < 2:
            raise GridError("field needs matching 1-D xs and values")
        steps = np.diff(self.xs)
        if np.any(steps <= 0):
            raise GridError("grid must be strictly increasing")
        if np.max(np.abs(steps - steps[0])) > 1e-9 * max(1.0, abs(steps[0])) * len(steps):
            raise GridError("grid must be uniformly spaced")
        if not np.all(np.isfinite(self.values)):
            raise GridError("field contains non-finite values")
        if self.regime not in ("R", "NR"):
            raise ValueError(f"regime must be 'R' or 'NR', got {self.regime!r}")
        if self.t < 0:
            raise DomainError("time must be non-negative")

    @property
    def dx(self):
        return float(self.xs[1] - self.xs[0])

    def mass(self):
        return float(np.trapezoid(self.values, self.xs))

    def check_mass(self, tol=1e-4):
        """Raise :class:`GridError` if a normalizable field lost mass on the grid."""
        if self.ic.kind in ("invsqrt", "hermite"):
            return None
        m = self.mass()
        if abs(m - 1.0) > tol:
            raise GridError(f"grid mass {m} differs from 1 by more than {tol}")
        return m
