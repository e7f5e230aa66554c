"""Exception hierarchy shared by the solvers and the command line."""


class RelHeatError(Exception):
    """Base class for all library errors."""


class DomainError(RelHeatError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class DegreeError(RelHeatError, ValueError):
    """Polynomial degree above the configured maximum (or overflowing)."""


class AccuracyError(RelHeatError, ArithmeticError):
    """A numerical scheme failed to reach its tolerance.

    The best available estimate and its error bound are kept so callers can
    decide whether a degraded answer is still usable.
    """

    def __init__(self, message, best=None, bound=None):
        super().__init__(message)
        self.best = best
        self.bound = bound


class SeriesDivergenceError(AccuracyError):
    """The Bessel-polynomial series started growing before ``n_max``."""

    def __init__(self, message, best=None, bound=None, n_terms=None):
        super().__init__(message, best=best, bound=bound)
        self.n_terms = n_terms


class UnsupportedInitialCondition(RelHeatError, ValueError):
    """The requested route cannot handle this initial condition."""


class MomentUndefinedError(RelHeatError, ValueError):
    """Second or fourth moment of the initial condition diverges."""


class GridError(RelHeatError, ValueError):
    """Grid too small, badly spaced, or producing spurious output."""
