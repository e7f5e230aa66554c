"""Sample a solution on a uniform grid by any of the available routes."""

import numpy as np

from .conditions import SolutionField
from .errors import UnsupportedInitialCondition
from .quadrature import DEFAULT_CONFIG
from .solver_nr import gw_transform
from .solver_r import SeriesTruncation, closed_form, solve_series, solve_subordination
from .spectral import SpectralGrid, evolve_at

__all__ = ["METHODS", "SERIES_KINDS", "supported", "solve_field"]

METHODS = ("closed", "subordination", "spectral", "series")
# profiles whose even derivatives are cheap and whose series is at least asymptotic
SERIES_KINDS = ("gaussian", "hermite")


def supported(kind, method, regime):
    """Return ``None`` if the combination is valid, else a reason string."""
    if method not in METHODS:
        return f"unknown method {method!r}"
    if regime == "NR" and method in ("subordination", "series"):
        return f"method {method!r} only applies to the relativistic regime"
    if method == "closed" and kind == "tabulated" and regime == "R":
        return "tabulated profiles have no closed form; use subordination or spectral"
    if method == "spectral" and kind == "invsqrt":
        return "the spectral route needs a decaying profile; invsqrt does not decay"
    if method == "series" and kind not in SERIES_KINDS:
        return f"the operator series is only provided for {', '.join(SERIES_KINDS)}"
    return None


def solve_field(ic, xs, t, regime="R", method="closed", cfg=None, spectral_grid=None, series=None):
    """Evaluate ``psi(x, t)`` on the uniform grid ``xs``.

    ``method='closed'`` in the NR regime means the Gauss-Weierstrass
    transform (closed form where available, adaptive convolution otherwise).
    """
    cfg = cfg or DEFAULT_CONFIG
    reason = supported(ic.kind, method, regime)
    if reason:
        raise UnsupportedInitialCondition(reason)
    xs = np.asarray(xs, dtype=float)
    meta = {}
    if method == "closed":
        values = closed_form(ic, xs, t, cfg) if regime == "R" else gw_transform(ic, xs, t, cfg)
    elif method == "subordination":
        values = solve_subordination(ic, xs, t, cfg)
    elif method == "spectral":
        grid = spectral_grid or SpectralGrid()
        values = evolve_at(ic, grid, t, xs, regime)
        meta.update(
            n_points=grid.n_points, half_width=grid.half_width, tail_mass=grid.validate(ic)
        )
    else:
        trunc = series or SeriesTruncation()
        results = [solve_series(ic, x, t, trunc) for x in xs]
        values = np.array([v for v, _ in results])
        meta["series_tail"] = max(tr.tail_estimate for _, tr in results)
    return SolutionField(xs, np.asarray(values, dtype=float), float(t), regime, ic, method, meta)
